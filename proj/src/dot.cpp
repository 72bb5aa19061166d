#include "tgg/dot.hpp"

#include <map>
#include <sstream>
#include <vector>

namespace tgg {

namespace {

std::string escape_label(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

const char* shape_for(const std::string& type) {
    if (type == "Method") return "box3d";
    if (type == "Exit") return "doublecircle";
    if (type == "If") return "diamond";
    if (type == "Loop") return "oval";
    if (type == "Block") return "folder";
    return "box";
}

}  // namespace

std::string export_dot(const TripleModel& triple, const DotOptions& options) {
    std::ostringstream out;
    out << "digraph flowgraph {\n";
    const Graph& flow = triple.target();
    if (!flow.nodes().empty()) {
        out << "  rankdir=TB;\n";
        for (const auto& [id, node] : flow.nodes()) {
            auto txt = flow.attribute(id, "txt");
            std::string label = txt ? attr_to_string(*txt) : node.type;
            out << "  n" << id.str() << " [label=\"" << escape_label(label) << "\" shape="
                << shape_for(node.type) << "];\n";
        }
        std::map<std::string, std::vector<const Edge*>> by_type;
        for (const auto& [id, edge] : flow.edges()) by_type[edge.type].push_back(&edge);
        for (const auto& [type, edges] : by_type) {
            for (const Edge* e : edges) {
                out << "  n" << e->source.str() << " -> n" << e->target.str();
                if (type == "cfNext") {
                    out << " [style=solid]";
                } else if (type == "branchTrue") {
                    out << " [style=dotted label=\"T\"]";
                } else if (type == "branchFalse") {
                    out << " [style=dotted label=\"F\"]";
                } else if (type == "body") {
                    out << " [style=dotted label=\"body\"]";
                } else {
                    out << " [style=dotted color=gray]";
                }
                out << ";\n";
            }
        }
    }
    if (options.with_corrs) {
        for (const auto& [id, link] : triple.corrs()) {
            out << "  s" << link.source_node.str() << " [label=\"ast "
                << link.source_node.str() << "\" shape=plaintext];\n";
            out << "  s" << link.source_node.str() << " -> n" << link.target_node.str()
                << " [style=dashed arrowhead=none];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace tgg
