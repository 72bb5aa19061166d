#include "tgg/minijava.hpp"

#include <cctype>
#include <sstream>

#include "tgg/flowgraphs.hpp"
#include "tgg/operators.hpp"

namespace tgg::minijava {

namespace {

const char* kKeywords[] = {"void", "int", "if", "else", "while", "return", "break"};

bool is_keyword(const std::string& s) {
    for (const char* k : kKeywords) {
        if (s == k) return true;
    }
    return false;
}

}  // namespace

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> tokens;
    int line = 1, column = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        int tok_line = line, tok_column = column;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_')) {
                ++j;
            }
            std::string word = text.substr(i, j - i);
            tokens.push_back({is_keyword(word) ? TokenKind::Keyword : TokenKind::Ident,
                              word, tok_line, tok_column});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            tokens.push_back({TokenKind::IntLit, text.substr(i, j - i), tok_line, tok_column});
            advance(j - i);
            continue;
        }
        // operators first, maximal munch, so "==" beats the "=" punct
        const OperatorInfo* longest = nullptr;
        for (const auto& op : supported_operators()) {
            if (text.compare(i, op.symbol.size(), op.symbol) != 0) continue;
            if (!longest || op.symbol.size() > longest->symbol.size()) longest = &op;
        }
        if (longest && !(longest->symbol == "=")) {
            tokens.push_back({TokenKind::Operator, longest->symbol, tok_line, tok_column});
            advance(longest->symbol.size());
            continue;
        }
        if (c == '{' || c == '}' || c == '(' || c == ')' || c == ';' || c == '=') {
            tokens.push_back({TokenKind::Punct, std::string(1, c), tok_line, tok_column});
            advance(1);
            continue;
        }
        throw ParseError(tok_line, tok_column, "a token", "'" + std::string(1, c) + "'");
    }
    tokens.push_back({TokenKind::End, "", line, column});
    return tokens;
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& text)
        : tokens_(lex(text)), ast_(flowgraphs::ast_metamodel()) {}

    Graph run() {
        NodeId program = ast_.add_node("Program");
        int method_ordinal = 0;
        while (!at(TokenKind::End)) {
            NodeId method = parse_method();
            ast_.add_edge("child", program, method, method_ordinal++);
        }
        if (method_ordinal == 0) {
            throw ParseError(peek().line, peek().column, "a method declaration", describe(peek()));
        }
        return std::move(ast_);
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    bool at(TokenKind kind) const { return peek().kind == kind; }
    bool at(TokenKind kind, const std::string& lexeme) const {
        return peek().kind == kind && peek().lexeme == lexeme;
    }

    static std::string describe(const Token& t) {
        if (t.kind == TokenKind::End) return "end of input";
        return "'" + t.lexeme + "'";
    }

    Token expect(TokenKind kind, const std::string& lexeme) {
        if (!at(kind, lexeme)) {
            throw ParseError(peek().line, peek().column, "'" + lexeme + "'", describe(peek()));
        }
        return tokens_[pos_++];
    }

    Token expect_ident() {
        if (!at(TokenKind::Ident)) {
            throw ParseError(peek().line, peek().column, "an identifier", describe(peek()));
        }
        return tokens_[pos_++];
    }

    NodeId parse_method() {
        std::string rtype;
        if (at(TokenKind::Keyword, "void") || at(TokenKind::Keyword, "int")) {
            rtype = tokens_[pos_++].lexeme;
        } else {
            throw ParseError(peek().line, peek().column, "'void' or 'int'", describe(peek()));
        }
        Token name = expect_ident();
        expect(TokenKind::Punct, "(");
        expect(TokenKind::Punct, ")");
        NodeId method = ast_.add_node("Method", {{"rtype", rtype}});
        NodeId name_node = ast_.add_node("Name", {{"value", name.lexeme}});
        ast_.add_edge("child", method, name_node, 0);
        NodeId body = parse_block();
        ast_.add_edge("child", method, body, 1);
        return method;
    }

    NodeId parse_block() {
        expect(TokenKind::Punct, "{");
        NodeId block = ast_.add_node("Block");
        int ordinal = 0;
        while (!at(TokenKind::Punct, "}")) {
            if (at(TokenKind::End)) {
                throw ParseError(peek().line, peek().column, "'}'", describe(peek()));
            }
            NodeId stmt = parse_statement();
            ast_.add_edge("child", block, stmt, ordinal++);
        }
        expect(TokenKind::Punct, "}");
        return block;
    }

    NodeId new_statement(const std::string& type) {
        return ast_.add_node(type, {{"index", next_index_++}});
    }

    NodeId parse_statement() {
        if (at(TokenKind::Keyword, "int")) return parse_declaration();
        if (at(TokenKind::Keyword, "if")) return parse_if();
        if (at(TokenKind::Keyword, "while")) return parse_while();
        if (at(TokenKind::Keyword, "return")) return parse_return();
        if (at(TokenKind::Keyword, "break")) return parse_break();
        if (at(TokenKind::Ident)) return parse_assignment();
        throw ParseError(peek().line, peek().column, "a statement", describe(peek()));
    }

    NodeId parse_declaration() {
        expect(TokenKind::Keyword, "int");
        Token name = expect_ident();
        NodeId decl = new_statement("Decl");
        NodeId name_node = ast_.add_node("Ident", {{"value", name.lexeme}});
        ast_.add_edge("child", decl, name_node, 0);
        if (at(TokenKind::Punct, "=")) {
            ++pos_;
            NodeId init = parse_expression(0);
            ast_.add_edge("child", decl, init, 1);
        }
        expect(TokenKind::Punct, ";");
        return decl;
    }

    NodeId parse_assignment() {
        Token lhs = expect_ident();
        NodeId assign = new_statement("Assign");
        NodeId lhs_node = ast_.add_node("Ident", {{"value", lhs.lexeme}});
        ast_.add_edge("child", assign, lhs_node, 0);
        expect(TokenKind::Punct, "=");
        NodeId rhs = parse_expression(0);
        ast_.add_edge("child", assign, rhs, 1);
        expect(TokenKind::Punct, ";");
        return assign;
    }

    NodeId parse_if() {
        expect(TokenKind::Keyword, "if");
        NodeId node = new_statement("If");
        expect(TokenKind::Punct, "(");
        NodeId cond = parse_expression(0);
        ast_.add_edge("child", node, cond, 0);
        expect(TokenKind::Punct, ")");
        NodeId then_block = parse_block();
        ast_.add_edge("child", node, then_block, 1);
        if (at(TokenKind::Keyword, "else")) {
            ++pos_;
            NodeId else_block = parse_block();
            ast_.add_edge("child", node, else_block, 2);
        }
        return node;
    }

    NodeId parse_while() {
        expect(TokenKind::Keyword, "while");
        NodeId node = new_statement("While");
        expect(TokenKind::Punct, "(");
        NodeId cond = parse_expression(0);
        ast_.add_edge("child", node, cond, 0);
        expect(TokenKind::Punct, ")");
        NodeId body = parse_block();
        ast_.add_edge("child", node, body, 1);
        return node;
    }

    NodeId parse_return() {
        expect(TokenKind::Keyword, "return");
        NodeId node = new_statement("Return");
        if (!at(TokenKind::Punct, ";")) {
            NodeId value = parse_expression(0);
            ast_.add_edge("child", node, value, 0);
        }
        expect(TokenKind::Punct, ";");
        return node;
    }

    NodeId parse_break() {
        expect(TokenKind::Keyword, "break");
        NodeId node = new_statement("Break");
        expect(TokenKind::Punct, ";");
        return node;
    }

    // precedence climbing; all operators left-associative
    NodeId parse_expression(int min_precedence) {
        NodeId left = parse_atom();
        while (at(TokenKind::Operator)) {
            auto precedence = operator_precedence(peek().lexeme);
            if (!precedence || *precedence < min_precedence) break;
            std::string op = tokens_[pos_++].lexeme;
            NodeId right = parse_expression(*precedence + 1);
            NodeId parent = ast_.add_node("BinOp", {{"value", op}});
            ast_.add_edge("child", parent, left, 0);
            ast_.add_edge("child", parent, right, 1);
            left = parent;
        }
        return left;
    }

    NodeId parse_atom() {
        if (at(TokenKind::Ident)) {
            return ast_.add_node("Ident", {{"value", tokens_[pos_++].lexeme}});
        }
        if (at(TokenKind::IntLit)) {
            return ast_.add_node("IntLit", {{"value", tokens_[pos_++].lexeme}});
        }
        if (at(TokenKind::Punct, "(")) {
            ++pos_;
            NodeId inner = parse_expression(0);
            expect(TokenKind::Punct, ")");
            return inner;
        }
        throw ParseError(peek().line, peek().column, "an expression", describe(peek()));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    Graph ast_;
    std::int64_t next_index_ = 0;
};

// ---- unparser ---------------------------------------------------------------

class Unparser {
public:
    explicit Unparser(const Graph& ast) : ast_(ast) {}

    std::string run() {
        auto diags = ast_.conforms();
        if (!diags.empty()) {
            throw Error("nonconformant-model", format_diagnostics(diags));
        }
        std::ostringstream out;
        for (const auto& [id, node] : ast_.nodes()) {
            if (node.type != "Program") continue;
            for (NodeId method : ast_.ordered_children(id, "child")) {
                emit_method(out, method);
            }
        }
        return out.str();
    }

private:
    std::string attr(NodeId id, const std::string& name) const {
        auto value = ast_.attribute(id, name);
        if (!value) {
            throw Error("nonconformant-model",
                        "node " + id.str() + " (" + ast_.node(id).type + ") lacks attribute '" +
                            name + "'");
        }
        return attr_to_string(*value);
    }

    void emit_method(std::ostringstream& out, NodeId method) {
        auto parts = ast_.ordered_children(method, "child");
        if (parts.size() != 2 || ast_.node(parts[0]).type != "Name" ||
            ast_.node(parts[1]).type != "Block") {
            throw Error("nonconformant-model",
                        "node " + method.str() + " is not a well-formed Method");
        }
        out << attr(method, "rtype") << " " << attr(parts[0], "value") << "() ";
        emit_block(out, parts[1], 0);
        out << "\n";
    }

    void emit_block(std::ostringstream& out, NodeId block, int depth) {
        out << "{\n";
        for (NodeId stmt : ast_.ordered_children(block, "child")) {
            emit_statement(out, stmt, depth + 1);
        }
        indent(out, depth);
        out << "}";
    }

    void indent(std::ostringstream& out, int depth) {
        for (int i = 0; i < depth; ++i) out << "    ";
    }

    void emit_statement(std::ostringstream& out, NodeId stmt, int depth) {
        const std::string& type = ast_.node(stmt).type;
        auto children = ast_.ordered_children(stmt, "child");
        indent(out, depth);
        if (type == "Decl") {
            if (children.empty()) {
                throw Error("nonconformant-model", "node " + stmt.str() + " Decl lacks a name");
            }
            out << "int " << attr(children[0], "value");
            if (children.size() > 1) out << " = " << expression(children[1]);
            out << ";\n";
        } else if (type == "Assign") {
            if (children.size() != 2) {
                throw Error("nonconformant-model",
                            "node " + stmt.str() + " Assign needs lhs and rhs");
            }
            out << attr(children[0], "value") << " = " << expression(children[1]) << ";\n";
        } else if (type == "If") {
            if (children.size() < 2) {
                throw Error("nonconformant-model",
                            "node " + stmt.str() + " If lacks condition or branch");
            }
            out << "if (" << expression(children[0]) << ") ";
            emit_block(out, children[1], depth);
            if (children.size() > 2) {
                out << " else ";
                emit_block(out, children[2], depth);
            }
            out << "\n";
        } else if (type == "While") {
            if (children.size() != 2) {
                throw Error("nonconformant-model",
                            "node " + stmt.str() + " While lacks condition or body");
            }
            out << "while (" << expression(children[0]) << ") ";
            emit_block(out, children[1], depth);
            out << "\n";
        } else if (type == "Return") {
            if (children.empty()) {
                out << "return;\n";
            } else {
                out << "return " << expression(children[0]) << ";\n";
            }
        } else if (type == "Break") {
            out << "break;\n";
        } else {
            throw Error("nonconformant-model",
                        "node " + stmt.str() + " (" + type + ") is not a statement");
        }
    }

    // minimal parentheses: wrap a child when its precedence is lower, or
    // equal on the right operand (everything is left-associative)
    std::string expression(NodeId node) {
        const std::string& type = ast_.node(node).type;
        if (type == "Ident" || type == "IntLit" || type == "Expr") {
            return attr(node, "value");
        }
        if (type != "BinOp") {
            throw Error("nonconformant-model",
                        "node " + node.str() + " (" + type + ") is not an expression");
        }
        auto children = ast_.ordered_children(node, "child");
        if (children.size() != 2) {
            throw Error("nonconformant-model", "node " + node.str() + " BinOp needs 2 operands");
        }
        std::string op = attr(node, "value");
        auto my_precedence = operator_precedence(op);
        if (!my_precedence) {
            throw Error("nonconformant-model",
                        "node " + node.str() + " uses unsupported operator '" + op + "'");
        }
        std::string left = operand(children[0], *my_precedence, false);
        std::string right = operand(children[1], *my_precedence, true);
        return left + " " + op + " " + right;
    }

    std::string operand(NodeId node, int parent_precedence, bool right_side) {
        std::string text = expression(node);
        if (ast_.node(node).type == "BinOp") {
            int precedence = *operator_precedence(attr(node, "value"));
            if (precedence < parent_precedence ||
                (precedence == parent_precedence && right_side)) {
                return "(" + text + ")";
            }
        }
        return text;
    }

    const Graph& ast_;
};

}  // namespace

Graph parse_program(const std::string& text) {
    Parser parser(text);
    return parser.run();
}

std::string unparse_program(const Graph& ast) {
    Unparser unparser(ast);
    return unparser.run();
}

std::string normalize(const std::string& text) { return unparse_program(parse_program(text)); }

}  // namespace tgg::minijava
