#include "tgg/rules.hpp"

#include <algorithm>
#include <set>

namespace tgg {

const char* domain_name(Domain d) {
    switch (d) {
        case Domain::Source: return "source";
        case Domain::Corr: return "corr";
        case Domain::Target: return "target";
    }
    return "?";
}

const char* modifier_name(Modifier m) {
    return m == Modifier::Context ? "context" : "create";
}

const RuleElement* TggRule::element(const std::string& id) const {
    for (const auto& e : elements) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

bool TggRule::is_axiom() const {
    return std::all_of(elements.begin(), elements.end(),
                       [](const RuleElement& e) { return e.modifier == Modifier::Create; }) &&
           std::all_of(edges.begin(), edges.end(),
                       [](const RuleEdge& e) { return e.modifier == Modifier::Create; });
}

std::string TggRule::assignment_variable(const std::string& element_id,
                                         const std::string& attr) {
    return element_id + "." + attr;
}

std::vector<ConstraintInstance> TggRule::compiled_csp() const {
    std::vector<ConstraintInstance> out = csp;
    for (const auto& el : elements) {
        for (const auto& [attr, literal] : el.assignments) {
            ConstraintInstance eq;
            eq.constraint = "eq";
            eq.args.push_back(VarRef{assignment_variable(el.id, attr)});
            eq.args.push_back(literal);
            out.push_back(std::move(eq));
        }
    }
    return out;
}

const TggRule& RuleSet::axiom() const {
    for (const auto& r : rules) {
        if (r.is_axiom()) return r;
    }
    throw Error("no-axiom", "rule set has no axiom");
}

const TggRule* RuleSet::rule(const std::string& name) const {
    for (const auto& r : rules) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

namespace {

const Metamodel* metamodel_for(Domain d, const TggSchema& schema) {
    switch (d) {
        case Domain::Source: return schema.source_mm.get();
        case Domain::Corr: return schema.corr_mm.get();
        case Domain::Target: return schema.target_mm.get();
    }
    return nullptr;
}

}  // namespace

std::vector<Diagnostic> validate_rule(const TggRule& rule, const TggSchema& schema) {
    std::vector<Diagnostic> diags;
    auto fail = [&](std::string code, std::string subject, std::string message) {
        diags.push_back({std::move(code), rule.name + "/" + subject, std::move(message)});
    };

    std::set<std::string> ids;
    std::set<std::string> housed_vars;
    for (const auto& el : rule.elements) {
        if (!ids.insert(el.id).second) {
            fail("duplicate-element", el.id, "element id reused");
            continue;
        }
        const Metamodel* mm = metamodel_for(el.domain, schema);
        if (el.domain == Domain::Corr) {
            const EdgeTypeDef* def = mm->edge_type(el.type);
            if (!def) {
                fail("unknown-type", el.id, "corr type not declared: " + el.type);
                continue;
            }
            if (el.src_element.empty() || el.tgt_element.empty()) {
                fail("corr-endpoints-missing", el.id,
                     "corr element must name src and tgt elements");
            }
            if (!el.assignments.empty() || !el.variables.empty()) {
                fail("corr-attributes", el.id, "corr elements carry no attributes");
            }
            continue;
        }
        const NodeTypeDef* def = mm->node_type(el.type);
        if (!def) {
            fail("unknown-type", el.id, "node type not declared: " + el.type);
            continue;
        }
        if (el.modifier == Modifier::Create && def->is_abstract) {
            fail("abstract-create", el.id, "created element has abstract type " + el.type);
        }
        for (const auto& [attr, literal] : el.assignments) {
            auto kind = mm->attribute_kind(el.type, attr);
            if (!kind) {
                fail("undeclared-attribute", el.id, "assigned attribute not declared: " + attr);
            } else if (*kind != kind_of(literal)) {
                fail("kind-mismatch", el.id, "assignment to '" + attr + "' has wrong kind");
            }
            if (el.variables.count(attr)) {
                fail("assign-and-bind", el.id,
                     "attribute '" + attr + "' both assigned and variable-bound");
            }
        }
        for (const auto& [attr, var] : el.variables) {
            if (!mm->attribute_kind(el.type, attr)) {
                fail("undeclared-attribute", el.id, "bound attribute not declared: " + attr);
            }
            housed_vars.insert(var);
        }
    }

    // corr endpoints resolve and conform after all element ids are known
    for (const auto& el : rule.elements) {
        if (el.domain != Domain::Corr) continue;
        const EdgeTypeDef* def = schema.corr_mm->edge_type(el.type);
        if (!def) continue;
        const RuleElement* src = rule.element(el.src_element);
        const RuleElement* tgt = rule.element(el.tgt_element);
        if (!src || src->domain != Domain::Source) {
            fail("corr-endpoint", el.id, "src must reference a source-domain element");
        } else if (!schema.source_mm->is_node_subtype(src->type, def->source)) {
            fail("endpoint-mismatch", el.id,
                 "corr src element type " + src->type + " is not a " + def->source);
        }
        if (!tgt || tgt->domain != Domain::Target) {
            fail("corr-endpoint", el.id, "tgt must reference a target-domain element");
        } else if (!schema.target_mm->is_node_subtype(tgt->type, def->target)) {
            fail("endpoint-mismatch", el.id,
                 "corr tgt element type " + tgt->type + " is not a " + def->target);
        }
    }

    std::set<std::string> edge_ids;
    std::map<Domain, int> created_per_domain;
    for (const auto& el : rule.elements) {
        if (el.modifier == Modifier::Create) created_per_domain[el.domain]++;
    }
    for (const auto& e : rule.edges) {
        if (!edge_ids.insert(e.id).second) {
            fail("duplicate-element", e.id, "edge id reused");
            continue;
        }
        const Metamodel* mm = metamodel_for(e.domain, schema);
        const EdgeTypeDef* def = mm->edge_type(e.type);
        if (!def) {
            fail("unknown-type", e.id, "edge type not declared: " + e.type);
            continue;
        }
        const RuleElement* src = rule.element(e.source_element);
        const RuleElement* tgt = rule.element(e.target_element);
        if (!src || !tgt) {
            fail("dangling-rule-edge", e.id, "edge endpoint element not found");
            continue;
        }
        if (src->domain != e.domain || tgt->domain != e.domain) {
            fail("domain-mismatch", e.id, "edge endpoints must share the edge's domain");
        }
        if (!mm->is_node_subtype(src->type, def->source)) {
            fail("endpoint-mismatch", e.id,
                 "edge source type " + src->type + " is not a " + def->source);
        }
        if (!mm->is_node_subtype(tgt->type, def->target)) {
            fail("endpoint-mismatch", e.id,
                 "edge target type " + tgt->type + " is not a " + def->target);
        }
        if (e.modifier == Modifier::Context &&
            (src->modifier == Modifier::Create || tgt->modifier == Modifier::Create)) {
            fail("context-edge-created-endpoint", e.id,
                 "context edge cannot touch created elements");
        }
        if (e.modifier == Modifier::Create && src->modifier == Modifier::Context &&
            tgt->modifier == Modifier::Context) {
            int created_things = created_per_domain[e.domain];
            int created_edges = 0;
            for (const auto& other : rule.edges) {
                if (other.domain == e.domain && other.modifier == Modifier::Create) {
                    ++created_edges;
                }
            }
            if (created_things > 0 || created_edges > 1) {
                fail("created-edge-context-endpoints", e.id,
                     "created edge joins two context elements but is not the only "
                     "created item in its domain");
            }
        }
        if (def->ordered) {
            if (!e.position && !e.position_var) {
                fail("position-required", e.id, "ordered edge needs pos or posVar");
            }
            if (e.position && e.position_var) {
                fail("position-conflict", e.id, "edge has both pos and posVar");
            }
        } else if (e.position || e.position_var) {
            fail("position-forbidden", e.id, "unordered edge carries an ordinal");
        }
        if (e.position_var) housed_vars.insert(*e.position_var);
    }

    for (const auto& b : rule.bindings) {
        const RuleElement* from = rule.element(b.from_element);
        const RuleElement* to = rule.element(b.to_element);
        if (!from || !to) {
            fail("dangling-binding", b.from_element + "->" + b.to_element,
                 "binding endpoint element not found");
            continue;
        }
        if (from->domain != to->domain) {
            fail("binding-domain", b.from_element + "->" + b.to_element,
                 "binding endpoints must share a domain");
        }
        if (to->modifier != Modifier::Context) {
            fail("binding-created-target", b.to_element,
                 "binding target must be a context element");
        }
        if (b.resolver.empty()) {
            fail("binding-resolver", b.from_element + "->" + b.to_element,
                 "binding names no resolver");
        }
    }

    std::set<std::string> temp_set(rule.temps.begin(), rule.temps.end());
    for (const auto& inst : rule.csp) {
        for (const auto& arg : inst.args) {
            const auto* var = std::get_if<VarRef>(&arg);
            if (!var) continue;
            if (!housed_vars.count(var->name) && !temp_set.count(var->name)) {
                fail("unhoused-variable", inst.constraint,
                     "variable '" + var->name + "' is neither element-housed nor a temp");
            }
        }
    }

    // axiom consistency is a set-level property but cheap to hint here
    return diags;
}

}  // namespace tgg
