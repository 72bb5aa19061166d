#include "doctest.h"

#include "program_gen.hpp"
#include "test_util.hpp"
#include "tgg/minijava.hpp"
#include "tgg/operators.hpp"

using namespace tgg;
using minijava::parse_program;
using minijava::normalize;
using minijava::unparse_program;

namespace {

NodeId sole(const Graph& g, const std::string& type) {
    NodeId found{};
    int count = 0;
    for (const auto& [id, n] : g.nodes()) {
        if (n.type == type) {
            found = id;
            ++count;
        }
    }
    REQUIRE(count == 1);
    return found;
}

std::string value(const Graph& g, NodeId n) {
    return attr_to_string(*g.attribute(n, "value"));
}

}  // namespace

TEST_CASE("an assignment with expression parses into the documented shape") {
    Graph ast = parse_program("void m() { a = b + 3; }");
    NodeId assign = sole(ast, "Assign");
    auto kids = ast.ordered_children(assign, "child");
    REQUIRE(kids.size() == 2);
    CHECK(ast.node(kids[0]).type == "Ident");
    CHECK(value(ast, kids[0]) == "a");
    CHECK(ast.node(kids[1]).type == "BinOp");
    CHECK(value(ast, kids[1]) == "+");
    auto operands = ast.ordered_children(kids[1], "child");
    REQUIRE(operands.size() == 2);
    CHECK(ast.node(operands[0]).type == "Ident");
    CHECK(value(ast, operands[0]) == "b");
    CHECK(ast.node(operands[1]).type == "IntLit");
    CHECK(value(ast, operands[1]) == "3");
    CHECK(*ast.attribute(assign, "index") == AttrValue{std::int64_t{0}});
}

TEST_CASE("an empty method parses into Program/Method/Name/Block") {
    Graph ast = parse_program("void m() { }");
    NodeId program = sole(ast, "Program");
    auto methods = ast.ordered_children(program, "child");
    REQUIRE(methods.size() == 1);
    CHECK(ast.node(methods[0]).type == "Method");
    CHECK(*ast.attribute(methods[0], "rtype") == AttrValue{std::string("void")});
    auto parts = ast.ordered_children(methods[0], "child");
    REQUIRE(parts.size() == 2);
    CHECK(ast.node(parts[0]).type == "Name");
    CHECK(value(ast, parts[0]) == "m");
    CHECK(ast.node(parts[1]).type == "Block");
    CHECK(ast.ordered_children(parts[1], "child").empty());
    CHECK(ast.conforms().empty());
}

TEST_CASE("statement indices count document order across nested blocks") {
    Graph ast = parse_program(
        "void m() { a = b; if (a < 1) { c = d; } else { e = f; } return; }");
    std::map<std::int64_t, std::string> by_index;
    for (const auto& [id, n] : ast.nodes()) {
        if (ast.metamodel()->is_node_subtype(n.type, "Stmt")) {
            by_index[std::get<std::int64_t>(*ast.attribute(id, "index"))] = n.type;
        }
    }
    REQUIRE(by_index.size() == 5);
    CHECK(by_index[0] == "Assign");
    CHECK(by_index[1] == "If");
    CHECK(by_index[2] == "Assign");
    CHECK(by_index[3] == "Assign");
    CHECK(by_index[4] == "Return");
}

TEST_CASE("syntax errors carry line, column, and the expected token") {
    try {
        parse_program("void m() {\n a = ;\n}");
        FAIL("bad program parsed");
    } catch (const minijava::ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("expected an expression") != std::string::npos);
        CHECK(std::string(e.what()).find("';'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_program(""), minijava::ParseError);
    CHECK_THROWS_AS(parse_program("void m() {"), minijava::ParseError);
    CHECK_THROWS_AS(parse_program("void m() { a = b + ; }"), minijava::ParseError);
    CHECK_THROWS_AS(parse_program("void m() { @ }"), minijava::ParseError);
    try {
        parse_program("int 3() { }");
        FAIL("bad method name parsed");
    } catch (const minijava::ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 5);
    }
}

TEST_CASE("unparse renders canonical text") {
    CHECK(unparse_program(parse_program("void m() { a = b + 3; }")) ==
          "void m() {\n    a = b + 3;\n}\n");
    CHECK(unparse_program(parse_program("void m() { }")) == "void m() {\n}\n");
    CHECK(unparse_program(parse_program("void m() { if (x < 1) { } else { } }")) ==
          "void m() {\n    if (x < 1) {\n    } else {\n    }\n}\n");
}

TEST_CASE("unparse rejects a structurally broken AST and names the node") {
    Graph ast(flowgraphs::ast_metamodel());
    NodeId program = ast.add_node("Program");
    NodeId method = ast.add_node("Method", {{"rtype", std::string("void")}});
    ast.add_edge("child", program, method, 0);  // Method lacks Name and Block
    try {
        unparse_program(ast);
        FAIL("broken AST unparsed");
    } catch (const Error& e) {
        CHECK(e.code() == "nonconformant-model");
        CHECK(std::string(e.what()).find(method.str()) != std::string::npos);
    }
}

TEST_CASE("normalize canonicalizes spacing and layout") {
    CHECK(normalize("void m(){a=b+3 ;}") == "void m() {\n    a = b + 3;\n}\n");
    CHECK(normalize("void m(){while(x<3){break;}}") ==
          "void m() {\n    while (x < 3) {\n        break;\n    }\n}\n");
    std::string canonical = "void m() {\n    a = b;\n}\n";
    CHECK(normalize(canonical) == canonical);
}

TEST_CASE("normalize is idempotent on generated programs") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        std::string text = proggen::random_program(seed, {6, 3, true});
        std::string once = normalize(text);
        CHECK(normalize(once) == once);
    }
}

TEST_CASE("parse of unparse is isomorphic to the original AST") {
    for (std::uint64_t seed = 100; seed < 150; ++seed) {
        std::string text = proggen::random_program(seed, {6, 3, true});
        Graph ast = parse_program(text);
        Graph again = parse_program(unparse_program(ast));
        CHECK_MESSAGE(testutil::ast_isomorphic(ast, again), "seed ", seed, ":\n", text);
    }
}

TEST_CASE("precedence and associativity follow the shared operator table") {
    // higher precedence binds tighter on the right
    Graph ast = parse_program("void m() { a = b + 3 * c; }");
    NodeId assign = sole(ast, "Assign");
    auto kids = ast.ordered_children(assign, "child");
    NodeId plus = kids[1];
    CHECK(value(ast, plus) == "+");
    auto operands = ast.ordered_children(plus, "child");
    CHECK(ast.node(operands[1]).type == "BinOp");
    CHECK(value(ast, operands[1]) == "*");

    // equal precedence associates left
    Graph left = parse_program("void m() { a = b - c - d; }");
    NodeId outer = left.ordered_children(sole(left, "Assign"), "child")[1];
    auto ops = left.ordered_children(outer, "child");
    CHECK(left.node(ops[0]).type == "BinOp");
    CHECK(left.node(ops[1]).type != "BinOp");

    // parentheses survive round trips when they matter
    CHECK(normalize("void m() { a = (b + 3) * c; }") ==
          "void m() {\n    a = (b + 3) * c;\n}\n");
    CHECK(normalize("void m() { a = b + (3 * c); }") ==
          "void m() {\n    a = b + 3 * c;\n}\n");

    // every supported operator parses and unparses
    for (const auto& op : supported_operators()) {
        std::string text = "void m() { a = b " + op.symbol + " 3; }";
        CHECK(normalize(text) == "void m() {\n    a = b " + op.symbol + " 3;\n}\n");
    }
}

TEST_CASE("comments and blank lines are skipped") {
    std::string text = "// header\nvoid m() {\n  // inner\n  a = b;\n\n}\n";
    CHECK(normalize(text) == "void m() {\n    a = b;\n}\n");
}

TEST_CASE("multiple methods parse and unparse in order") {
    std::string text = "void m() { a = b; } int n() { return c; }";
    CHECK(normalize(text) == "void m() {\n    a = b;\n}\nint n() {\n    return c;\n}\n");
}
