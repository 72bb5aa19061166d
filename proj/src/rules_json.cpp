#include "tgg/model_json.hpp"
#include "tgg/rules.hpp"

namespace tgg {

namespace {

Domain domain_from(const std::string& s) {
    if (s == "source") return Domain::Source;
    if (s == "corr") return Domain::Corr;
    if (s == "target") return Domain::Target;
    throw Error("parse-error", "unknown domain: " + s);
}

Modifier modifier_from(const std::string& s) {
    if (s == "context") return Modifier::Context;
    if (s == "create") return Modifier::Create;
    throw Error("parse-error", "unknown modifier: " + s);
}

// "$x" is the variable x; "$$x" is the literal string "$x".
CspArg arg_from_json(const Json& j) {
    if (j.is_number_integer()) return AttrValue{j.get<std::int64_t>()};
    if (!j.is_string()) throw Error("parse-error", "csp argument must be int or string");
    std::string s = j.get<std::string>();
    if (s.rfind("$$", 0) == 0) return AttrValue{s.substr(1)};
    if (s.rfind("$", 0) == 0) return VarRef{s.substr(1)};
    return AttrValue{std::move(s)};
}

Json arg_to_json(const CspArg& arg) {
    if (const auto* var = std::get_if<VarRef>(&arg)) return "$" + var->name;
    const AttrValue& v = std::get<AttrValue>(arg);
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    const std::string& s = std::get<std::string>(v);
    if (!s.empty() && s[0] == '$') return "$" + s;
    return s;
}

AttrValue literal_from_json(const Json& j) {
    if (j.is_number_integer()) return AttrValue{j.get<std::int64_t>()};
    if (j.is_string()) return AttrValue{j.get<std::string>()};
    throw Error("parse-error", "attribute literal must be int or string");
}

Json literal_to_json(const AttrValue& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    return std::get<std::string>(v);
}

TggRule rule_from_json(const Json& j) {
    TggRule rule;
    rule.name = j.at("name").get<std::string>();
    for (const auto& e : j.at("elements")) {
        RuleElement el;
        el.id = e.at("id").get<std::string>();
        el.domain = domain_from(e.at("domain").get<std::string>());
        el.type = e.at("type").get<std::string>();
        el.modifier = modifier_from(e.at("mod").get<std::string>());
        if (e.contains("assign")) {
            for (auto it = e.at("assign").begin(); it != e.at("assign").end(); ++it) {
                el.assignments[it.key()] = literal_from_json(*it);
            }
        }
        if (e.contains("vars")) {
            for (auto it = e.at("vars").begin(); it != e.at("vars").end(); ++it) {
                std::string v = it->get<std::string>();
                if (v.rfind("$", 0) != 0) {
                    throw Error("parse-error", "vars entries must be $-prefixed variables");
                }
                el.variables[it.key()] = v.substr(1);
            }
        }
        if (e.contains("src")) el.src_element = e.at("src").get<std::string>();
        if (e.contains("tgt")) el.tgt_element = e.at("tgt").get<std::string>();
        rule.elements.push_back(std::move(el));
    }
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            RuleEdge edge;
            edge.id = e.at("id").get<std::string>();
            edge.domain = domain_from(e.at("domain").get<std::string>());
            edge.type = e.at("type").get<std::string>();
            edge.source_element = e.at("src").get<std::string>();
            edge.target_element = e.at("tgt").get<std::string>();
            edge.modifier = modifier_from(e.at("mod").get<std::string>());
            if (e.contains("pos")) edge.position = e.at("pos").get<int>();
            if (e.contains("posVar")) {
                std::string v = e.at("posVar").get<std::string>();
                if (v.rfind("$", 0) != 0) {
                    throw Error("parse-error", "posVar must be a $-prefixed variable");
                }
                edge.position_var = v.substr(1);
            }
            rule.edges.push_back(std::move(edge));
        }
    }
    if (j.contains("csp")) {
        for (const auto& c : j.at("csp")) {
            ConstraintInstance inst;
            inst.constraint = c.at("constraint").get<std::string>();
            for (const auto& a : c.at("args")) inst.args.push_back(arg_from_json(a));
            rule.csp.push_back(std::move(inst));
        }
    }
    if (j.contains("temps")) {
        for (const auto& t : j.at("temps")) rule.temps.push_back(t.get<std::string>());
    }
    if (j.contains("bindings")) {
        for (const auto& b : j.at("bindings")) {
            rule.bindings.push_back({b.at("from").get<std::string>(),
                                     b.at("to").get<std::string>(),
                                     b.at("resolver").get<std::string>()});
        }
    }
    if (j.contains("post")) rule.post_processor = j.at("post").get<std::string>();
    return rule;
}

Json rule_to_json(const TggRule& rule) {
    Json j;
    j["name"] = rule.name;
    Json elements = Json::array();
    for (const auto& el : rule.elements) {
        Json e;
        e["id"] = el.id;
        e["domain"] = domain_name(el.domain);
        e["type"] = el.type;
        e["mod"] = modifier_name(el.modifier);
        if (!el.assignments.empty()) {
            Json assign = Json::object();
            for (const auto& [attr, lit] : el.assignments) assign[attr] = literal_to_json(lit);
            e["assign"] = assign;
        }
        if (!el.variables.empty()) {
            Json vars = Json::object();
            for (const auto& [attr, var] : el.variables) vars[attr] = "$" + var;
            e["vars"] = vars;
        }
        if (!el.src_element.empty()) e["src"] = el.src_element;
        if (!el.tgt_element.empty()) e["tgt"] = el.tgt_element;
        elements.push_back(e);
    }
    j["elements"] = elements;
    Json edges = Json::array();
    for (const auto& edge : rule.edges) {
        Json e;
        e["id"] = edge.id;
        e["domain"] = domain_name(edge.domain);
        e["type"] = edge.type;
        e["src"] = edge.source_element;
        e["tgt"] = edge.target_element;
        e["mod"] = modifier_name(edge.modifier);
        if (edge.position) e["pos"] = *edge.position;
        if (edge.position_var) e["posVar"] = "$" + *edge.position_var;
        edges.push_back(e);
    }
    j["edges"] = edges;
    Json csp = Json::array();
    for (const auto& inst : rule.csp) {
        Json c;
        c["constraint"] = inst.constraint;
        Json args = Json::array();
        for (const auto& a : inst.args) args.push_back(arg_to_json(a));
        c["args"] = args;
        csp.push_back(c);
    }
    j["csp"] = csp;
    if (!rule.temps.empty()) j["temps"] = rule.temps;
    if (!rule.bindings.empty()) {
        Json bindings = Json::array();
        for (const auto& b : rule.bindings) {
            Json e;
            e["from"] = b.from_element;
            e["to"] = b.to_element;
            e["resolver"] = b.resolver;
            bindings.push_back(e);
        }
        j["bindings"] = bindings;
    }
    if (rule.post_processor) j["post"] = *rule.post_processor;
    return j;
}

}  // namespace

RuleSet load_ruleset(const std::string& document) {
    Json j = parse_json_text(document);
    RuleSet rs;
    rs.schema.source_mm = metamodel_from_json(j.at("schema").at("source"));
    rs.schema.corr_mm = metamodel_from_json(j.at("schema").at("corr"));
    rs.schema.target_mm = metamodel_from_json(j.at("schema").at("target"));

    std::vector<Diagnostic> diags = rs.schema.validate();
    for (const auto& r : j.at("rules")) rs.rules.push_back(rule_from_json(r));

    std::set<std::string> names;
    int axioms = 0;
    for (const auto& rule : rs.rules) {
        if (!names.insert(rule.name).second) {
            diags.push_back({"duplicate-name", rule.name, "rule name reused"});
        }
        if (rule.is_axiom()) ++axioms;
        auto more = validate_rule(rule, rs.schema);
        diags.insert(diags.end(), more.begin(), more.end());
    }
    if (axioms == 0) {
        diags.push_back({"no-axiom", "ruleset", "rule set declares no axiom"});
    } else if (axioms > 1) {
        diags.push_back({"multiple-axioms", "ruleset", "rule set declares several axioms"});
    }
    if (!diags.empty()) {
        throw Error("invalid-ruleset", format_diagnostics(diags));
    }
    return rs;
}

std::string save_ruleset(const RuleSet& ruleset) {
    Json j;
    Json schema;
    schema["source"] = metamodel_to_json(*ruleset.schema.source_mm);
    schema["corr"] = metamodel_to_json(*ruleset.schema.corr_mm);
    schema["target"] = metamodel_to_json(*ruleset.schema.target_mm);
    j["schema"] = schema;
    Json rules = Json::array();
    for (const auto& rule : ruleset.rules) rules.push_back(rule_to_json(rule));
    j["rules"] = rules;
    return to_text(j);
}

}  // namespace tgg
