#include "tgg/graph.hpp"

#include <algorithm>

namespace tgg {

namespace {
const std::set<EdgeId> kNoEdges;
}

NodeId Graph::add_node(const std::string& type, std::map<std::string, AttrValue> attrs) {
    const NodeTypeDef* def = metamodel_ ? metamodel_->node_type(type) : nullptr;
    if (!def) throw Error("unknown-type", "node type not declared: " + type);
    if (def->is_abstract) {
        throw Error("abstract-type", "cannot instantiate abstract type: " + type);
    }
    for (const auto& [attr, value] : attrs) {
        auto kind = metamodel_->attribute_kind(type, attr);
        if (!kind) {
            throw Error("undeclared-attribute",
                        "attribute '" + attr + "' not declared for type " + type);
        }
        if (*kind != kind_of(value)) {
            throw Error("kind-mismatch", "attribute '" + attr + "' of " + type +
                                             " expects " + kind_name(*kind) + ", got " +
                                             kind_name(kind_of(value)));
        }
    }
    NodeId id{next_node_++};
    nodes_.emplace(id, Node{id, type, std::move(attrs)});
    out_.emplace(id, std::set<EdgeId>{});
    in_.emplace(id, std::set<EdgeId>{});
    return id;
}

EdgeId Graph::insert_edge(const std::string& type, NodeId source, NodeId target,
                          std::optional<int> position, bool strict_ordinals) {
    const EdgeTypeDef* def = metamodel_ ? metamodel_->edge_type(type) : nullptr;
    if (!def) throw Error("unknown-type", "edge type not declared: " + type);
    if (!has_node(source) || !has_node(target)) {
        throw Error("dangling-endpoint", "edge " + type + " endpoint does not exist");
    }
    if (!metamodel_->is_node_subtype(node(source).type, def->source)) {
        throw Error("endpoint-mismatch", "edge " + type + " source must be " + def->source +
                                             ", got " + node(source).type);
    }
    if (!metamodel_->is_node_subtype(node(target).type, def->target)) {
        throw Error("endpoint-mismatch", "edge " + type + " target must be " + def->target +
                                             ", got " + node(target).type);
    }
    if (def->ordered && !position) {
        throw Error("position-required", "ordered edge type " + type + " needs an ordinal");
    }
    if (!def->ordered && position) {
        throw Error("position-forbidden", "unordered edge type " + type + " took an ordinal");
    }
    if (def->ordered) {
        int group_size = 0;
        for (EdgeId eid : out_edges(source)) {
            const Edge& e = edge(eid);
            if (e.type != type) continue;
            ++group_size;
            if (e.position == position) {
                throw Error("duplicate-ordinal",
                            "ordinal " + std::to_string(*position) + " already used on " +
                                type + " out of node " + source.str());
            }
        }
        if (*position < 0 || (strict_ordinals && *position != group_size)) {
            throw Error("gap-in-ordinals",
                        "ordinal " + std::to_string(*position) + " would leave a gap in " +
                            type + " out of node " + source.str());
        }
    }
    EdgeId id{next_edge_++};
    edges_.emplace(id, Edge{id, type, source, target, position});
    out_[source].insert(id);
    in_[target].insert(id);
    return id;
}

EdgeId Graph::add_edge(const std::string& type, NodeId source, NodeId target,
                       std::optional<int> position) {
    return insert_edge(type, source, target, position, /*strict_ordinals=*/true);
}

EdgeId Graph::add_edge_deferred(const std::string& type, NodeId source, NodeId target,
                                std::optional<int> position) {
    return insert_edge(type, source, target, position, /*strict_ordinals=*/false);
}

void Graph::set_attribute(NodeId id, const std::string& attr, AttrValue value) {
    Node& n = node_mut(id);
    auto kind = metamodel_->attribute_kind(n.type, attr);
    if (!kind) {
        throw Error("undeclared-attribute",
                    "attribute '" + attr + "' not declared for type " + n.type);
    }
    if (*kind != kind_of(value)) {
        throw Error("kind-mismatch", "attribute '" + attr + "' of " + n.type + " expects " +
                                         kind_name(*kind));
    }
    n.attributes[attr] = std::move(value);
}

void Graph::remove_edge(EdgeId id) {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw Error("unknown-edge", "no edge " + id.str());
    out_[it->second.source].erase(id);
    in_[it->second.target].erase(id);
    edges_.erase(it);
}

void Graph::remove_node(NodeId id) {
    if (!has_node(id)) throw Error("unknown-node", "no node " + id.str());
    if (!out_edges(id).empty() || !in_edges(id).empty()) {
        throw Error("node-in-use", "node " + id.str() + " still has incident edges");
    }
    nodes_.erase(id);
    out_.erase(id);
    in_.erase(id);
}

const Node& Graph::node(NodeId id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw Error("unknown-node", "no node " + id.str());
    return it->second;
}

Node& Graph::node_mut(NodeId id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw Error("unknown-node", "no node " + id.str());
    return it->second;
}

const Edge& Graph::edge(EdgeId id) const {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw Error("unknown-edge", "no edge " + id.str());
    return it->second;
}

const std::set<EdgeId>& Graph::out_edges(NodeId id) const {
    auto it = out_.find(id);
    return it == out_.end() ? kNoEdges : it->second;
}

const std::set<EdgeId>& Graph::in_edges(NodeId id) const {
    auto it = in_.find(id);
    return it == in_.end() ? kNoEdges : it->second;
}

std::vector<NodeId> Graph::ordered_children(NodeId id, const std::string& edge_type) const {
    std::vector<const Edge*> group;
    for (EdgeId eid : out_edges(id)) {
        const Edge& e = edge(eid);
        if (e.type == edge_type) group.push_back(&e);
    }
    std::sort(group.begin(), group.end(), [](const Edge* a, const Edge* b) {
        if (a->position != b->position) return a->position < b->position;
        return a->id < b->id;
    });
    std::vector<NodeId> result;
    result.reserve(group.size());
    for (const Edge* e : group) result.push_back(e->target);
    return result;
}

std::optional<AttrValue> Graph::attribute(NodeId id, const std::string& attr) const {
    const Node& n = node(id);
    auto it = n.attributes.find(attr);
    if (it == n.attributes.end()) return std::nullopt;
    return it->second;
}

std::vector<Diagnostic> Graph::conforms() const {
    std::vector<Diagnostic> diags;
    if (!metamodel_) {
        diags.push_back({"no-metamodel", "", "graph has no metamodel"});
        return diags;
    }
    for (const auto& [id, n] : nodes_) {
        const NodeTypeDef* def = metamodel_->node_type(n.type);
        if (!def) {
            diags.push_back({"unknown-type", "node " + id.str(),
                             "node type not declared: " + n.type});
            continue;
        }
        if (def->is_abstract) {
            diags.push_back({"abstract-type", "node " + id.str(),
                             "node instantiates abstract type " + n.type});
        }
        for (const auto& [attr, value] : n.attributes) {
            auto kind = metamodel_->attribute_kind(n.type, attr);
            if (!kind) {
                diags.push_back({"undeclared-attribute", "node " + id.str(),
                                 "attribute '" + attr + "' not declared for " + n.type});
            } else if (*kind != kind_of(value)) {
                diags.push_back({"kind-mismatch", "node " + id.str(),
                                 "attribute '" + attr + "' expects " + kind_name(*kind)});
            }
        }
    }
    // edge typing plus per-(source, type) ordinal contiguity
    std::map<std::pair<NodeId, std::string>, std::vector<int>> ordinals;
    for (const auto& [id, e] : edges_) {
        const EdgeTypeDef* def = metamodel_->edge_type(e.type);
        if (!def) {
            diags.push_back({"unknown-type", "edge " + id.str(),
                             "edge type not declared: " + e.type});
            continue;
        }
        if (!has_node(e.source) || !has_node(e.target)) {
            diags.push_back({"dangling-endpoint", "edge " + id.str(),
                             "edge endpoint missing"});
            continue;
        }
        if (!metamodel_->is_node_subtype(node(e.source).type, def->source)) {
            diags.push_back({"endpoint-mismatch", "edge " + id.str(),
                             "source type " + node(e.source).type + " not a " + def->source});
        }
        if (!metamodel_->is_node_subtype(node(e.target).type, def->target)) {
            diags.push_back({"endpoint-mismatch", "edge " + id.str(),
                             "target type " + node(e.target).type + " not a " + def->target});
        }
        if (def->ordered) {
            if (!e.position) {
                diags.push_back({"position-required", "edge " + id.str(),
                                 "ordered edge lacks ordinal"});
            } else {
                ordinals[{e.source, e.type}].push_back(*e.position);
            }
        } else if (e.position) {
            diags.push_back({"position-forbidden", "edge " + id.str(),
                             "unordered edge carries ordinal"});
        }
    }
    for (auto& [key, group] : ordinals) {
        std::sort(group.begin(), group.end());
        for (std::size_t i = 0; i < group.size(); ++i) {
            if (group[i] != static_cast<int>(i)) {
                diags.push_back({"gap-in-ordinals",
                                 "node " + key.first.str() + " / " + key.second,
                                 "ordinals are not a contiguous 0-based sequence"});
                break;
            }
        }
    }
    return diags;
}

}  // namespace tgg
