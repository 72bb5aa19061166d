#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tgg/csp.hpp"
#include "tgg/triple.hpp"

namespace tgg {

enum class Domain { Source, Corr, Target };
enum class Modifier { Context, Create };

const char* domain_name(Domain d);
const char* modifier_name(Modifier m);

// One object of a rule pattern. Corr elements name the source/target rule
// elements they connect via src_element/tgt_element.
struct RuleElement {
    std::string id;
    Domain domain = Domain::Source;
    std::string type;
    Modifier modifier = Modifier::Context;
    std::map<std::string, AttrValue> assignments;   // attribute -> literal
    std::map<std::string, std::string> variables;   // attribute -> CSP variable
    std::string src_element;  // corr domain only
    std::string tgt_element;  // corr domain only
};

struct RuleEdge {
    std::string id;
    Domain domain = Domain::Source;
    std::string type;
    std::string source_element;
    std::string target_element;
    Modifier modifier = Modifier::Context;
    std::optional<int> position;         // literal ordinal for ordered types
    std::optional<std::string> position_var;  // or a CSP variable holding it
};

// Virtual link computed by a registered resolver instead of structural
// matching. Active only in the direction where from_element sits in the
// input domain; the to_element is always a context element.
struct BindingExpr {
    std::string from_element;
    std::string to_element;
    std::string resolver;
};

struct TggRule {
    std::string name;
    std::vector<RuleElement> elements;
    std::vector<RuleEdge> edges;
    std::vector<ConstraintInstance> csp;
    std::vector<std::string> temps;  // rule-local CSP variables
    std::vector<BindingExpr> bindings;
    std::optional<std::string> post_processor;

    const RuleElement* element(const std::string& id) const;
    bool is_axiom() const;

    // Compiled form of the CSP: attribute assignments become eq constraints
    // appended after the declared instances, so assertion semantics in the
    // non-creating direction falls out of the solver.
    std::vector<ConstraintInstance> compiled_csp() const;

    // Variable name synthesized for an assigned attribute.
    static std::string assignment_variable(const std::string& element_id,
                                           const std::string& attr);
};

struct RuleSet {
    TggSchema schema;
    std::vector<TggRule> rules;

    const TggRule& axiom() const;
    const TggRule* rule(const std::string& name) const;
};

// Static well-formedness of one rule against the schema; empty means clean.
std::vector<Diagnostic> validate_rule(const TggRule& rule, const TggSchema& schema);

// Ruleset document handling. load_ruleset throws Error("parse-error", ...)
// for malformed JSON and Error("invalid-ruleset", ...) carrying aggregated
// diagnostics for semantic violations.
RuleSet load_ruleset(const std::string& document);
std::string save_ruleset(const RuleSet& ruleset);

}  // namespace tgg
