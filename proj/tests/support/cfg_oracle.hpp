#pragma once

// Brute-force control-flow oracle built directly from the AST, written as a
// top-down walk with explicit continuations. Kept independent of the
// engine's successor resolver on purpose: the two must agree only in their
// results.

#include <optional>
#include <set>
#include <utility>

#include "tgg/graph.hpp"
#include "tgg/triple.hpp"

namespace oracle {

using tgg::Graph;
using tgg::NodeId;

// nullopt target = the method's Exit
using CfgEdge = std::pair<NodeId, std::optional<NodeId>>;
using CfgSet = std::set<CfgEdge>;

namespace detail {

inline bool is_stmt(const Graph& ast, NodeId n) {
    return ast.metamodel()->is_node_subtype(ast.node(n).type, "Stmt");
}

// `cont` is where control goes after the block falls through; `brk` where a
// break lands; both nullopt = Exit.
inline void walk_block(const Graph& ast, NodeId block, std::optional<NodeId> cont,
                       std::optional<std::optional<NodeId>> brk, CfgSet& out) {
    auto stmts = ast.ordered_children(block, "child");
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        NodeId s = stmts[i];
        if (!is_stmt(ast, s)) continue;
        std::optional<NodeId> follow =
            (i + 1 < stmts.size()) ? std::optional<NodeId>(stmts[i + 1]) : cont;
        const std::string& type = ast.node(s).type;
        auto kids = ast.ordered_children(s, "child");
        if (type == "Return") {
            out.insert({s, std::nullopt});
        } else if (type == "Break") {
            if (brk) out.insert({s, *brk});
        } else if (type == "If") {
            out.insert({s, follow});
            if (kids.size() > 1) walk_block(ast, kids[1], follow, brk, out);
            if (kids.size() > 2) walk_block(ast, kids[2], follow, brk, out);
        } else if (type == "While") {
            out.insert({s, follow});
            // the body falls through back to the loop head; break exits it
            if (kids.size() > 1) {
                walk_block(ast, kids[1], s, std::optional<std::optional<NodeId>>(follow), out);
            }
        } else {
            out.insert({s, follow});
        }
    }
}

}  // namespace detail

inline CfgSet cfg_of_ast(const Graph& ast) {
    CfgSet out;
    for (const auto& [id, node] : ast.nodes()) {
        if (node.type != "Program") continue;
        for (NodeId method : ast.ordered_children(id, "child")) {
            if (ast.node(method).type != "Method") continue;
            auto parts = ast.ordered_children(method, "child");
            if (parts.size() > 1) {
                detail::walk_block(ast, parts[1], std::nullopt, std::nullopt, out);
            }
        }
    }
    return out;
}

// The engine's cfNext relation, mapped back onto AST nodes through the corr
// links (Exit targets become nullopt).
inline CfgSet cfg_of_triple(const tgg::TripleModel& triple) {
    CfgSet out;
    const Graph& flow = triple.target();
    auto ast_of_flow = [&triple](NodeId flow_node) -> std::optional<NodeId> {
        const auto& corrs = triple.corrs_of_target(flow_node);
        if (corrs.size() != 1) return std::nullopt;
        return triple.corr(*corrs.begin()).source_node;
    };
    for (const auto& [eid, edge] : flow.edges()) {
        if (edge.type != "cfNext") continue;
        auto from_ast = ast_of_flow(edge.source);
        if (!from_ast) continue;
        if (flow.node(edge.target).type == "Exit") {
            out.insert({*from_ast, std::nullopt});
        } else {
            out.insert({*from_ast, ast_of_flow(edge.target)});
        }
    }
    return out;
}

}  // namespace oracle
