#include "doctest.h"

#include "tgg/flowgraphs.hpp"
#include "tgg/graph.hpp"
#include "tgg/model_json.hpp"
#include "tgg/triple.hpp"

using namespace tgg;

namespace {

MetamodelPtr flow_mm() { return flowgraphs::flow_metamodel(); }
MetamodelPtr ast_mm() { return flowgraphs::ast_metamodel(); }

TggSchema schema() { return flowgraphs::default_ruleset().schema; }

std::string code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("add_node stores declared attributes") {
    Graph flow(flow_mm());
    NodeId exit = flow.add_node("Exit", {{"txt", std::string("Exit")}});
    REQUIRE(flow.has_node(exit));
    CHECK(*flow.attribute(exit, "txt") == AttrValue{std::string("Exit")});
}

TEST_CASE("add_node accepts an empty attribute map") {
    Graph flow(flow_mm());
    NodeId exit = flow.add_node("Exit");
    CHECK(flow.node(exit).attributes.empty());
}

TEST_CASE("add_node rejects bad input with distinct codes") {
    Graph flow(flow_mm());
    CHECK(code_of([&] { flow.add_node("Bogus"); }) == "unknown-type");
    CHECK(code_of([&] { flow.add_node("Exit", {{"txt", std::int64_t{42}}}); }) ==
          "kind-mismatch");
    CHECK(code_of([&] { flow.add_node("Exit", {{"nope", std::string("x")}}); }) ==
          "undeclared-attribute");
    CHECK(code_of([&] { flow.add_node("FlowNode"); }) == "abstract-type");
}

TEST_CASE("attributes are inherited through the supertype chain") {
    Graph flow(flow_mm());
    NodeId stmt = flow.add_node("SimpleStmt", {{"txt", std::string("a = b;")}});
    CHECK(flow.node(stmt).type == "SimpleStmt");
    CHECK(flow_mm()->attribute_kind("SimpleStmt", "txt") == AttrKind::String);
    CHECK(flow_mm()->is_node_subtype("SimpleStmt", "FlowTarget"));
    CHECK(flow_mm()->is_node_subtype("SimpleStmt", "FlowNode"));
    CHECK(flow_mm()->is_node_subtype("Method", "Block"));
    CHECK(!flow_mm()->is_node_subtype("Method", "FlowTarget"));
}

TEST_CASE("add_edge orders and validates") {
    Graph ast(ast_mm());
    NodeId method = ast.add_node("Method", {{"rtype", std::string("void")}});
    NodeId name = ast.add_node("Name", {{"value", std::string("m")}});
    NodeId block = ast.add_node("Block");

    EdgeId first = ast.add_edge("child", method, name, 0);
    CHECK(ast.edge(first).position == 0);

    SUBCASE("gap in ordinals is rejected at insert") {
        CHECK(code_of([&] { ast.add_edge("child", method, block, 2); }) == "gap-in-ordinals");
    }
    SUBCASE("duplicate ordinal is rejected") {
        ast.add_edge("child", method, block, 1);
        NodeId extra = ast.add_node("Block");
        CHECK(code_of([&] { ast.add_edge("child", method, extra, 1); }) == "duplicate-ordinal");
    }
    SUBCASE("ordinal required for ordered types and forbidden otherwise") {
        CHECK(code_of([&] { ast.add_edge("child", method, block); }) == "position-required");
        Graph flow(flow_mm());
        NodeId stmt = flow.add_node("SimpleStmt");
        NodeId exit = flow.add_node("Exit");
        EdgeId next = flow.add_edge("cfNext", stmt, exit);
        CHECK(!flow.edge(next).position);
        CHECK(code_of([&] { flow.add_edge("cfNext", stmt, exit, 0); }) == "position-forbidden");
    }
    SUBCASE("dangling and mistyped endpoints are rejected") {
        CHECK(code_of([&] { ast.add_edge("child", method, NodeId{999}, 1); }) ==
              "dangling-endpoint");
        Graph flow(flow_mm());
        NodeId stmt = flow.add_node("SimpleStmt");
        NodeId exit = flow.add_node("Exit");
        CHECK(code_of([&] { flow.add_edge("body", stmt, exit); }) == "endpoint-mismatch");
    }
}

TEST_CASE("conforms is empty on valid graphs and locates violations") {
    Graph flow(flow_mm());
    CHECK(flow.conforms().empty());

    NodeId method = flow.add_node("Method", {{"txt", std::string("m()")}});
    NodeId stmt = flow.add_node("SimpleStmt", {{"txt", std::string("a = b;")}});
    flow.add_edge("stmts", method, stmt, 0);
    CHECK(flow.conforms().empty());

    // deferred insertion may leave a gap until validation
    NodeId stmt2 = flow.add_node("SimpleStmt");
    flow.add_edge_deferred("stmts", method, stmt2, 5);
    auto diags = flow.conforms();
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "gap-in-ordinals");
    CHECK(diags[0].subject.find(method.str()) != std::string::npos);
}

TEST_CASE("conforms reports undeclared node types from foreign documents") {
    Json j;
    j["metamodel"] = "flowgraph";
    j["nodes"] = Json::array({Json{{"id", "1"}, {"type", "Bogus"}, {"attrs", Json::object()}}});
    j["edges"] = Json::array();
    try {
        graph_from_json(j, flow_mm());
        FAIL("nonconformant model loaded");
    } catch (const Error& e) {
        CHECK(e.code() == "unknown-type");
        CHECK(std::string(e.what()).find("Bogus") != std::string::npos);
    }
}

TEST_CASE("add_corr validates endpoints against the corr metamodel") {
    TripleModel triple(schema());
    NodeId body = triple.source().add_node("Block");
    NodeId method_ast = triple.source().add_node("Method", {{"rtype", std::string("void")}});
    NodeId method = triple.target().add_node("Method", {{"txt", std::string("m()")}});
    NodeId exit = triple.target().add_node("Exit", {{"txt", std::string("Exit")}});

    CorrId link = triple.add_corr("AstToFlow", body, method);
    CHECK(triple.corr(link).type == "AstToFlow");

    CorrId exit_link = triple.add_corr("AstToExit", method_ast, exit);
    CHECK(triple.corr(exit_link).target_node == exit);
    CHECK(schema().corr_mm->is_edge_subtype("AstToExit", "AstToFlow"));

    CHECK(code_of([&] { triple.add_corr("AstToExit", body, exit); }) == "endpoint-mismatch");
    CHECK(code_of([&] { triple.add_corr("NoSuchCorr", body, method); }) == "unknown-corr-type");
}

TEST_CASE("nodes with corr links or edges cannot be removed") {
    TripleModel triple(schema());
    NodeId body = triple.source().add_node("Block");
    NodeId method = triple.target().add_node("Method");
    CorrId link = triple.add_corr("AstToFlow", body, method);

    CHECK_THROWS_AS(triple.remove_source_node(body), Error);
    triple.remove_corr(link);
    triple.remove_source_node(body);
    CHECK(!triple.source().has_node(body));

    Graph ast(ast_mm());
    NodeId a = ast.add_node("Block");
    NodeId b = ast.add_node("Break", {{"index", std::int64_t{0}}});
    EdgeId e = ast.add_edge("child", a, b, 0);
    CHECK_THROWS_AS(ast.remove_node(a), Error);
    ast.remove_edge(e);
    ast.remove_node(a);
    CHECK(!ast.has_node(a));
}

TEST_CASE("graph JSON round-trips byte-stably") {
    Graph flow(flow_mm());
    NodeId method = flow.add_node("Method", {{"txt", std::string("m()")}});
    NodeId exit = flow.add_node("Exit", {{"txt", std::string("Exit")}});
    NodeId stmt = flow.add_node("SimpleStmt", {{"txt", std::string("a = b + 3;")}});
    flow.add_edge("stmts", method, stmt, 0);
    flow.add_edge("cfNext", stmt, exit);

    std::string once = to_text(graph_to_json(flow));
    Graph reloaded = graph_from_json(parse_json_text(once), flow_mm());
    CHECK(to_text(graph_to_json(reloaded)) == once);
}

TEST_CASE("triple JSON round-trips byte-stably") {
    TripleModel triple(schema());
    NodeId body = triple.source().add_node("Block");
    NodeId method = triple.target().add_node("Method", {{"txt", std::string("m()")}});
    triple.add_corr("AstToFlow", body, method);

    std::string once = to_text(triple_to_json(triple));
    TripleModel reloaded = triple_from_json(parse_json_text(once), schema());
    CHECK(to_text(triple_to_json(reloaded)) == once);
}

TEST_CASE("ordered children iterate in ordinal order") {
    Graph ast(ast_mm());
    NodeId block = ast.add_node("Block");
    NodeId s1 = ast.add_node("Break", {{"index", std::int64_t{0}}});
    NodeId s2 = ast.add_node("Return", {{"index", std::int64_t{1}}});
    NodeId s3 = ast.add_node("Break", {{"index", std::int64_t{2}}});
    // inserted out of order through the deferred path
    ast.add_edge_deferred("child", block, s3, 2);
    ast.add_edge_deferred("child", block, s1, 0);
    ast.add_edge_deferred("child", block, s2, 1);
    CHECK(ast.conforms().empty());
    auto children = ast.ordered_children(block, "child");
    REQUIRE(children.size() == 3);
    CHECK(children[0] == s1);
    CHECK(children[1] == s2);
    CHECK(children[2] == s3);
}

TEST_CASE("metamodel validation flags cycles and unknown endpoints") {
    Metamodel mm("broken");
    mm.add_node_type({"A", {}, std::string("B"), false});
    mm.add_node_type({"B", {}, std::string("A"), false});
    mm.add_edge_type({"e", "A", "Missing", false, std::nullopt});
    auto diags = mm.validate();
    bool cycle = false, unknown = false;
    for (const auto& d : diags) {
        if (d.code == "cyclic-supertype") cycle = true;
        if (d.code == "unknown-endpoint-type") unknown = true;
    }
    CHECK(cycle);
    CHECK(unknown);
}
