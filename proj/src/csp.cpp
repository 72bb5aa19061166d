#include "tgg/csp.hpp"

#include <algorithm>
#include <sstream>

namespace tgg {

void ConstraintRegistry::register_constraint(ConstraintDef def) {
    if (defs_.count(def.name)) {
        throw Error("duplicate-name", "constraint already registered: " + def.name);
    }
    if (!def.eval) throw Error("invalid-constraint", "constraint has no evaluator: " + def.name);
    for (const auto& a : def.allowed) {
        if (a.size() != def.arity || a.find_first_not_of("BF") != Adornment::npos) {
            throw Error("invalid-adornment",
                        def.name + ": adornment '" + a + "' does not fit arity");
        }
    }
    // the pure check mode must always be available
    def.allowed.insert(Adornment(def.arity, 'B'));
    defs_.emplace(def.name, std::move(def));
}

const ConstraintDef* ConstraintRegistry::find(const std::string& name) const {
    auto it = defs_.find(name);
    return it == defs_.end() ? nullptr : &it->second;
}

const ConstraintDef& ConstraintRegistry::require(const std::string& name) const {
    const ConstraintDef* def = find(name);
    if (!def) throw Error("unknown-constraint", "constraint not registered: " + name);
    return *def;
}

namespace {

Adornment derive_adornment(const ConstraintInstance& inst,
                           const std::set<std::string>& bound) {
    Adornment a;
    a.reserve(inst.args.size());
    for (const auto& arg : inst.args) {
        if (std::holds_alternative<AttrValue>(arg)) {
            a.push_back('B');
        } else {
            a.push_back(bound.count(std::get<VarRef>(arg).name) ? 'B' : 'F');
        }
    }
    return a;
}

std::string quoted(const AttrValue& v) {
    if (std::holds_alternative<std::string>(v)) return "\"" + std::get<std::string>(v) + "\"";
    return attr_to_string(v);
}

}  // namespace

CspPlan sort_csp(const std::vector<ConstraintInstance>& instances,
                 const std::set<std::string>& initially_bound,
                 const ConstraintRegistry& registry) {
    CspPlan plan;
    plan.initially_bound = initially_bound;
    plan.all_variables = initially_bound;
    for (const auto& inst : instances) {
        const ConstraintDef& def = registry.require(inst.constraint);
        if (inst.args.size() != def.arity) {
            throw Error("arity-mismatch", inst.constraint + " expects " +
                                              std::to_string(def.arity) + " arguments, got " +
                                              std::to_string(inst.args.size()));
        }
        for (const auto& arg : inst.args) {
            if (const auto* var = std::get_if<VarRef>(&arg)) plan.all_variables.insert(var->name);
        }
    }

    std::set<std::string> bound = initially_bound;
    std::vector<bool> planned(instances.size(), false);
    for (std::size_t step = 0; step < instances.size(); ++step) {
        bool progressed = false;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            if (planned[i]) continue;
            Adornment a = derive_adornment(instances[i], bound);
            const ConstraintDef& def = registry.require(instances[i].constraint);
            if (!def.allowed.count(a)) continue;
            planned[i] = true;
            plan.steps.push_back({instances[i], a});
            for (const auto& arg : instances[i].args) {
                if (const auto* var = std::get_if<VarRef>(&arg)) bound.insert(var->name);
            }
            progressed = true;
            break;
        }
        if (!progressed) break;
    }

    std::vector<std::string> stuck_constraints;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (!planned[i]) stuck_constraints.push_back(instances[i].constraint);
    }
    std::vector<std::string> unbound;
    for (const auto& v : plan.all_variables) {
        if (!bound.count(v)) unbound.push_back(v);
    }
    if (!stuck_constraints.empty() || !unbound.empty()) {
        std::ostringstream msg;
        msg << "CSP cannot be ordered;";
        if (!stuck_constraints.empty()) {
            msg << " no eligible adornment for:";
            for (const auto& c : stuck_constraints) msg << " " << c;
            msg << ";";
        }
        if (!unbound.empty()) {
            msg << " unbound variables:";
            for (const auto& v : unbound) msg << " " << v;
        }
        throw Error("csp-unsortable", msg.str());
    }
    return plan;
}

SolveResult solve_csp(const CspPlan& plan, const Bindings& initial,
                      const ConstraintRegistry& registry) {
    for (const auto& v : plan.initially_bound) {
        if (!initial.count(v)) {
            throw Error("missing-binding", "plan expects initial binding for " + v);
        }
    }
    for (const auto& [name, value] : initial) {
        if (!plan.initially_bound.count(name)) {
            throw Error("unexpected-binding", "variable not assumed bound by plan: " + name);
        }
    }

    SolveResult result;
    Bindings bindings = initial;

    auto run_step = [&](const ConstraintInstance& inst, const Adornment& adornment,
                        bool record_trace) -> bool {
        const ConstraintDef& def = registry.require(inst.constraint);
        std::vector<AttrValue> args(inst.args.size());
        for (std::size_t i = 0; i < inst.args.size(); ++i) {
            if (const auto* lit = std::get_if<AttrValue>(&inst.args[i])) {
                args[i] = *lit;
            } else if (adornment[i] == 'B') {
                args[i] = bindings.at(std::get<VarRef>(inst.args[i]).name);
            }
        }
        std::vector<AttrValue> in_args = args;
        bool ok = def.eval(adornment, args);
        if (!ok) {
            result.failure = CspFailure{inst.constraint, adornment, in_args,
                                        inst.constraint + "(" + adornment + ") failed"};
            return false;
        }
        std::ostringstream line;
        line << inst.constraint << "(";
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i) line << ", ";
            if (adornment[i] == 'B') {
                line << quoted(args[i]);
            } else {
                line << std::get<VarRef>(inst.args[i]).name;
            }
        }
        line << ")";
        std::vector<std::string> produced;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (adornment[i] == 'F') {
                const auto& name = std::get<VarRef>(inst.args[i]).name;
                auto it = bindings.find(name);
                if (it != bindings.end() && !(it->second == args[i])) {
                    result.failure = CspFailure{inst.constraint, adornment, in_args,
                                                "conflicting binding for " + name};
                    return false;
                }
                bindings[name] = args[i];
                produced.push_back(name + " = " + quoted(args[i]));
            }
        }
        if (record_trace) {
            line << " => ";
            if (produced.empty()) {
                line << "true";
            } else {
                for (std::size_t i = 0; i < produced.size(); ++i) {
                    if (i) line << ", ";
                    line << produced[i];
                }
            }
            result.trace.push_back(line.str());
        }
        return true;
    };

    for (const auto& step : plan.steps) {
        if (!run_step(step.instance, step.adornment, /*record_trace=*/true)) return result;
    }
    // final bindings must satisfy every instance as a pure check
    for (const auto& step : plan.steps) {
        Adornment all_b(step.instance.args.size(), 'B');
        if (!run_step(step.instance, all_b, /*record_trace=*/false)) return result;
    }
    result.bindings = std::move(bindings);
    return result;
}

}  // namespace tgg
