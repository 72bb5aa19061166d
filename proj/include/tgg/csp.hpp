#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tgg/core.hpp"

namespace tgg {

// Bound/free pattern over a constraint's arguments, e.g. "BBF". 'B' marks a
// bound argument, 'F' one the constraint must produce.
using Adornment = std::string;

inline bool adornment_all_bound(const Adornment& a) {
    return a.find('F') == Adornment::npos;
}

// Evaluates one constraint under one adornment. On entry args[i] holds every
// 'B' slot; the function fills 'F' slots and returns false on a failed check.
using ConstraintFn = std::function<bool(const Adornment&, std::vector<AttrValue>& args)>;

struct ConstraintDef {
    std::string name;
    std::size_t arity = 0;
    std::set<Adornment> allowed;  // the all-B adornment is always implied
    ConstraintFn eval;
};

class ConstraintRegistry {
public:
    // Code duplicate-name when the constraint is already registered.
    void register_constraint(ConstraintDef def);

    const ConstraintDef* find(const std::string& name) const;
    const ConstraintDef& require(const std::string& name) const;

private:
    std::map<std::string, ConstraintDef> defs_;
};

// A constraint argument: literal value or variable reference.
struct VarRef {
    std::string name;
    bool operator==(const VarRef&) const = default;
};
using CspArg = std::variant<AttrValue, VarRef>;

struct ConstraintInstance {
    std::string constraint;
    std::vector<CspArg> args;
};

struct PlanStep {
    ConstraintInstance instance;
    Adornment adornment;
};

// Replaying the steps over the initially bound variables binds every
// variable; each chosen adornment is allowed at its position.
struct CspPlan {
    std::vector<PlanStep> steps;
    std::set<std::string> initially_bound;
    std::set<std::string> all_variables;
};

// Greedy direction-aware ordering: among simultaneously eligible constraints
// declaration order wins. Code csp-unsortable reports the stuck variables.
CspPlan sort_csp(const std::vector<ConstraintInstance>& instances,
                 const std::set<std::string>& initially_bound,
                 const ConstraintRegistry& registry);

using Bindings = std::map<std::string, AttrValue>;

// A constraint failure is rule inapplicability, not a crash.
struct CspFailure {
    std::string constraint;
    Adornment adornment;
    std::vector<AttrValue> args;
    std::string message;
};

struct SolveResult {
    std::optional<Bindings> bindings;  // set on success
    std::optional<CspFailure> failure;
    // One entry per executed step, e.g.
    //   concat("=", "a", "b + 3", temp2) => temp2 = "a = b + 3"
    std::vector<std::string> trace;

    bool ok() const { return bindings.has_value(); }
};

// Executes a plan. Requires bindings for exactly the plan's initially bound
// variables; verifies every instance against its all-B check at the end.
SolveResult solve_csp(const CspPlan& plan, const Bindings& initial,
                      const ConstraintRegistry& registry);

}  // namespace tgg
