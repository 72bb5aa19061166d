#include "tgg/flowgraphs.hpp"

#include "tgg/builtins.hpp"

namespace tgg::detail {
const char* embedded_flowgraphs_ruleset();
}

namespace tgg::flowgraphs {

const std::string& embedded_ruleset_text() {
    static const std::string text = tgg::detail::embedded_flowgraphs_ruleset();
    return text;
}

const RuleSet& default_ruleset() {
    static const RuleSet ruleset = load_ruleset(embedded_ruleset_text());
    return ruleset;
}

MetamodelPtr ast_metamodel() { return default_ruleset().schema.source_mm; }
MetamodelPtr flow_metamodel() { return default_ruleset().schema.target_mm; }
MetamodelPtr corr_metamodel() { return default_ruleset().schema.corr_mm; }

namespace {

std::optional<NodeId> parent_of(const Graph& ast, NodeId node) {
    for (EdgeId eid : ast.in_edges(node)) {
        const Edge& e = ast.edge(eid);
        if (e.type == "child") return e.source;
    }
    return std::nullopt;
}

bool is_statement(const Graph& ast, NodeId node) {
    return ast.metamodel()->is_node_subtype(ast.node(node).type, "Stmt");
}

// Document-order successor of a statement, climbing out of nested blocks.
std::optional<NodeId> fall_through_successor(const Graph& ast, NodeId stmt) {
    auto block = parent_of(ast, stmt);
    if (!block || ast.node(*block).type != "Block") return std::nullopt;
    auto siblings = ast.ordered_children(*block, "child");
    for (std::size_t i = 0; i < siblings.size(); ++i) {
        if (siblings[i] != stmt) continue;
        if (i + 1 < siblings.size()) return siblings[i + 1];
        break;
    }
    auto owner = parent_of(ast, *block);
    if (!owner) return std::nullopt;
    const std::string& owner_type = ast.node(*owner).type;
    if (owner_type == "Method") return owner;
    if (owner_type == "If") return fall_through_successor(ast, *owner);
    if (owner_type == "While") return owner;
    return std::nullopt;
}

std::optional<NodeId> enclosing_while(const Graph& ast, NodeId stmt) {
    auto cursor = parent_of(ast, stmt);
    while (cursor) {
        if (ast.node(*cursor).type == "While") return cursor;
        cursor = parent_of(ast, *cursor);
    }
    return std::nullopt;
}

}  // namespace

std::optional<NodeId> resolve_next_flow_node(NodeId ast_node, const Graph& ast) {
    if (!ast.has_node(ast_node) || !is_statement(ast, ast_node)) return std::nullopt;
    const std::string& type = ast.node(ast_node).type;
    if (type == "Return") {
        auto cursor = parent_of(ast, ast_node);
        while (cursor) {
            if (ast.node(*cursor).type == "Method") return cursor;
            cursor = parent_of(ast, *cursor);
        }
        return std::nullopt;
    }
    if (type == "Break") {
        auto loop = enclosing_while(ast, ast_node);
        if (!loop) return std::nullopt;
        return fall_through_successor(ast, *loop);
    }
    return fall_through_successor(ast, ast_node);
}

void postprocess_set_index(const Match& match, TripleModel& triple, Direction dir) {
    (void)match;
    if (dir != Direction::Backward) return;
    Graph& ast = triple.source();

    auto renumber_block = [&ast](auto&& self, NodeId block, std::int64_t& counter) -> void {
        for (NodeId stmt : ast.ordered_children(block, "child")) {
            if (!ast.metamodel()->is_node_subtype(ast.node(stmt).type, "Stmt")) continue;
            ast.set_attribute(stmt, "index", counter++);
            const std::string& type = ast.node(stmt).type;
            auto children = ast.ordered_children(stmt, "child");
            if (type == "If") {
                if (children.size() > 1) self(self, children[1], counter);
                if (children.size() > 2) self(self, children[2], counter);
            } else if (type == "While") {
                if (children.size() > 1) self(self, children[1], counter);
            }
        }
    };

    std::int64_t counter = 0;
    for (const auto& [id, node] : ast.nodes()) {
        if (node.type != "Program") continue;
        for (NodeId method : ast.ordered_children(id, "child")) {
            if (ast.node(method).type != "Method") continue;
            auto parts = ast.ordered_children(method, "child");
            if (parts.size() > 1 && ast.node(parts[1]).type == "Block") {
                renumber_block(renumber_block, parts[1], counter);
            }
        }
    }
}

Registries make_registries() {
    Registries regs;
    regs.constraints = make_builtin_registry();
    register_resolver(regs, "findNextFlowNode",
                      [](const Match&, const TripleModel& triple, Direction,
                         NodeId from) { return resolve_next_flow_node(from, triple.source()); });
    register_post_processor(regs, "setIndex", postprocess_set_index);
    return regs;
}

FlowgraphsCase build_flowgraphs_ruleset() {
    return FlowgraphsCase{default_ruleset(), make_registries()};
}

}  // namespace tgg::flowgraphs
