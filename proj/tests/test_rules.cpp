#include "doctest.h"

#include <fstream>
#include <sstream>

#include "tgg/flowgraphs.hpp"
#include "tgg/model_json.hpp"
#include "tgg/rules.hpp"

using namespace tgg;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const RuleSet& flowgraphs_rules() { return flowgraphs::default_ruleset(); }

// Smallest loadable document: schema plus a one-corr axiom.
Json minimal_document() {
    Json j = parse_json_text(read_file(TGG_RULES_PATH));
    Json rule;
    rule["name"] = "Axiom";
    rule["elements"] = Json::array(
        {Json{{"id", "b"}, {"domain", "source"}, {"type", "Block"}, {"mod", "create"}},
         Json{{"id", "m"}, {"domain", "target"}, {"type", "Method"}, {"mod", "create"}},
         Json{{"id", "c"},
              {"domain", "corr"},
              {"type", "AstToFlow"},
              {"mod", "create"},
              {"src", "b"},
              {"tgt", "m"}}});
    rule["edges"] = Json::array();
    rule["csp"] = Json::array();
    j["rules"] = Json::array({rule});
    return j;
}

}  // namespace

TEST_CASE("the shipped ruleset file loads with eight rules and one axiom") {
    RuleSet rules = load_ruleset(read_file(TGG_RULES_PATH));
    REQUIRE(rules.rules.size() == 8);
    CHECK(rules.axiom().name == "MethodRule");
    int axioms = 0;
    for (const auto& rule : rules.rules) {
        if (rule.is_axiom()) ++axioms;
    }
    CHECK(axioms == 1);
    const char* expected[] = {"MethodRule",  "AssignmentWithExpRule", "AssignmentSimpleRule",
                              "DeclarationRule", "IfElseRule",        "WhileRule",
                              "ReturnRule",  "BreakRule"};
    for (std::size_t i = 0; i < 8; ++i) CHECK(rules.rules[i].name == expected[i]);
}

TEST_CASE("the embedded ruleset equals the shipped file") {
    CHECK(flowgraphs::embedded_ruleset_text() == read_file(TGG_RULES_PATH));
}

TEST_CASE("every shipped rule validates cleanly") {
    const RuleSet& rules = flowgraphs_rules();
    for (const auto& rule : rules.rules) {
        auto diags = validate_rule(rule, rules.schema);
        CHECK_MESSAGE(diags.empty(), rule.name, ": ", format_diagnostics(diags));
    }
}

TEST_CASE("load then serialize then load is the identity") {
    RuleSet once = load_ruleset(read_file(TGG_RULES_PATH));
    std::string first = save_ruleset(once);
    RuleSet twice = load_ruleset(first);
    CHECK(save_ruleset(twice) == first);
}

TEST_CASE("an empty rules array is rejected as having no axiom") {
    Json j = minimal_document();
    j["rules"] = Json::array();
    try {
        load_ruleset(to_text(j));
        FAIL("empty ruleset loaded");
    } catch (const Error& e) {
        CHECK(e.code() == "invalid-ruleset");
        CHECK(std::string(e.what()).find("no-axiom") != std::string::npos);
    }
}

TEST_CASE("a created edge referencing an unknown element is rejected") {
    Json j = minimal_document();
    j["rules"][0]["edges"] = Json::array({Json{{"id", "e"},
                                               {"domain", "source"},
                                               {"type", "child"},
                                               {"src", "b"},
                                               {"tgt", "ghost"},
                                               {"mod", "create"},
                                               {"pos", 0}}});
    try {
        load_ruleset(to_text(j));
        FAIL("dangling rule edge loaded");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("dangling-rule-edge") != std::string::npos);
    }
}

TEST_CASE("malformed JSON reports line and column") {
    try {
        load_ruleset("{\n  \"schema\": oops\n}");
        FAIL("malformed JSON loaded");
    } catch (const Error& e) {
        CHECK(e.code() == "parse-error");
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("binding expressions must target context elements") {
    const RuleSet& rules = flowgraphs_rules();
    TggRule rule = *rules.rule("AssignmentWithExpRule");
    rule.bindings[0].to_element = "declStm";  // created element
    auto diags = validate_rule(rule, rules.schema);
    bool found = false;
    for (const auto& d : diags) found |= d.code == "binding-created-target";
    CHECK(found);
}

TEST_CASE("assigning and variable-binding the same attribute is rejected") {
    const RuleSet& rules = flowgraphs_rules();
    TggRule rule = *rules.rule("MethodRule");
    for (auto& el : rule.elements) {
        if (el.id == "exit") el.variables["txt"] = "etxt";
    }
    auto diags = validate_rule(rule, rules.schema);
    bool found = false;
    for (const auto& d : diags) found |= d.code == "assign-and-bind";
    CHECK(found);
}

TEST_CASE("CSP variables must be element-housed or declared temps") {
    const RuleSet& rules = flowgraphs_rules();
    TggRule rule = *rules.rule("AssignmentWithExpRule");
    rule.temps.clear();  // temp1/temp2 now undeclared
    auto diags = validate_rule(rule, rules.schema);
    bool found = false;
    for (const auto& d : diags) found |= d.code == "unhoused-variable";
    CHECK(found);
}

TEST_CASE("context edges cannot touch created elements") {
    const RuleSet& rules = flowgraphs_rules();
    TggRule rule = *rules.rule("AssignmentWithExpRule");
    for (auto& e : rule.edges) {
        if (e.id == "eStmt") e.modifier = Modifier::Context;
    }
    auto diags = validate_rule(rule, rules.schema);
    bool found = false;
    for (const auto& d : diags) found |= d.code == "context-edge-created-endpoint";
    CHECK(found);
}

TEST_CASE("MethodRule carries the documented suffix constraint") {
    const TggRule& rule = *flowgraphs_rules().rule("MethodRule");
    REQUIRE(rule.csp.size() == 1);
    const ConstraintInstance& inst = rule.csp[0];
    CHECK(inst.constraint == "addSuffix");
    REQUIRE(inst.args.size() == 3);
    CHECK(std::get<VarRef>(inst.args[0]).name == "mname");
    CHECK(std::get<AttrValue>(inst.args[1]) == AttrValue{std::string("()")});
    CHECK(std::get<VarRef>(inst.args[2]).name == "mtxt");
}

TEST_CASE("AssignmentWithExpRule's declared CSP is exactly the four constraints") {
    const TggRule& rule = *flowgraphs_rules().rule("AssignmentWithExpRule");
    REQUIRE(rule.csp.size() == 4);
    CHECK(rule.csp[0].constraint == "isAnIdentifier");
    CHECK(rule.csp[1].constraint == "concatWithOperatorSymbol");
    CHECK(rule.csp[2].constraint == "concat");
    CHECK(rule.csp[3].constraint == "addSuffix");
    // no attribute assignments, so compilation adds no eq constraints
    CHECK(rule.compiled_csp().size() == 4);
    CHECK(rule.temps == std::vector<std::string>{"temp1", "temp2"});
}

TEST_CASE("assignments compile to appended eq constraints") {
    const TggRule& rule = *flowgraphs_rules().rule("MethodRule");
    auto compiled = rule.compiled_csp();
    REQUIRE(compiled.size() == 3);
    CHECK(compiled[0].constraint == "addSuffix");
    CHECK(compiled[1].constraint == "eq");
    CHECK(std::get<VarRef>(compiled[1].args[0]).name == "methodAst.rtype");
    CHECK(std::get<AttrValue>(compiled[1].args[1]) == AttrValue{std::string("void")});
    CHECK(compiled[2].constraint == "eq");
    CHECK(std::get<VarRef>(compiled[2].args[0]).name == "exit.txt");
    CHECK(std::get<AttrValue>(compiled[2].args[1]) == AttrValue{std::string("Exit")});
}

TEST_CASE("schema validation spans corr endpoints across the metamodels") {
    TggSchema schema = flowgraphs_rules().schema;
    CHECK(schema.validate().empty());

    auto corr = std::make_shared<Metamodel>("broken-corr");
    corr->add_edge_type({"Dangling", "NoSuchAst", "NoSuchFlow", false, std::nullopt});
    TggSchema broken{schema.source_mm, corr, schema.target_mm};
    auto diags = broken.validate();
    CHECK(diags.size() == 2);
}
