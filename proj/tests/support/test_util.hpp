#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tgg/engine.hpp"
#include "tgg/flowgraphs.hpp"
#include "tgg/minijava.hpp"
#include "tgg/model_json.hpp"

namespace testutil {

using namespace tgg;

inline TransformResult forward_of(const std::string& source_text,
                                  const TransformOptions& options = {}) {
    auto fg = flowgraphs::build_flowgraphs_ruleset();
    Graph ast = minijava::parse_program(source_text);
    return forward_transform(ast, fg.ruleset, fg.registries, options);
}

inline TransformResult backward_of(const Graph& flow, const TransformOptions& options = {}) {
    auto fg = flowgraphs::build_flowgraphs_ruleset();
    return backward_transform(flow, fg.ruleset, fg.registries, options);
}

inline CheckResult check_of(const TripleModel& triple) {
    auto fg = flowgraphs::build_flowgraphs_ruleset();
    return check_consistency(triple, fg.ruleset, fg.registries);
}

// Tree isomorphism over AST graphs, ids ignored: equal types, attributes and
// ordinal-ordered children all the way down.
inline bool ast_isomorphic(const Graph& a, const Graph& b) {
    std::vector<NodeId> roots_a, roots_b;
    for (const auto& [id, n] : a.nodes()) {
        if (n.type == "Program") roots_a.push_back(id);
    }
    for (const auto& [id, n] : b.nodes()) {
        if (n.type == "Program") roots_b.push_back(id);
    }
    if (roots_a.size() != 1 || roots_b.size() != 1) return false;
    auto equal = [&](auto&& self, NodeId na, NodeId nb) -> bool {
        const Node& va = a.node(na);
        const Node& vb = b.node(nb);
        if (va.type != vb.type || va.attributes != vb.attributes) return false;
        auto ca = a.ordered_children(na, "child");
        auto cb = b.ordered_children(nb, "child");
        if (ca.size() != cb.size()) return false;
        for (std::size_t i = 0; i < ca.size(); ++i) {
            if (!self(self, ca[i], cb[i])) return false;
        }
        return true;
    };
    return equal(equal, roots_a[0], roots_b[0]);
}

// Canonical fingerprint of a triple whose flow nodes each carry exactly one
// corr: flow identity is replaced by the corr'd AST node id, making the
// fingerprint stable across match orders.
inline std::string triple_fingerprint(const TripleModel& triple) {
    std::map<NodeId, std::string> flow_name;
    for (const auto& [cid, link] : triple.corrs()) {
        (void)cid;
        flow_name[link.target_node] = "a" + link.source_node.str() + "/" + link.type;
    }
    std::vector<std::string> lines;
    for (const auto& [id, n] : triple.target().nodes()) {
        auto it = flow_name.find(id);
        std::string name = it == flow_name.end() ? ("?" + id.str()) : it->second;
        std::string attrs;
        for (const auto& [k, v] : n.attributes) attrs += k + "=" + attr_to_string(v) + ";";
        lines.push_back("node " + name + " " + n.type + " " + attrs);
    }
    for (const auto& [id, e] : triple.target().edges()) {
        (void)id;
        std::string from = flow_name.count(e.source) ? flow_name[e.source] : "?";
        std::string to = flow_name.count(e.target) ? flow_name[e.target] : "?";
        std::string pos = e.position ? std::to_string(*e.position) : "-";
        lines.push_back("edge " + e.type + " " + from + " -> " + to + " @" + pos);
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& line : lines) out += line + "\n";
    return out;
}

inline std::string flow_txt(const TripleModel& triple, const std::string& type) {
    for (const auto& [id, n] : triple.target().nodes()) {
        if (n.type == type) {
            auto v = triple.target().attribute(id, "txt");
            return v ? attr_to_string(*v) : "";
        }
    }
    return "<missing>";
}

inline int count_nodes_of_type(const Graph& g, const std::string& type) {
    int count = 0;
    for (const auto& [id, n] : g.nodes()) {
        (void)id;
        if (n.type == type) ++count;
    }
    return count;
}

}  // namespace testutil
