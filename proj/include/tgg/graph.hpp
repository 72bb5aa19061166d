#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tgg/core.hpp"
#include "tgg/metamodel.hpp"

namespace tgg {

struct Node {
    NodeId id;
    std::string type;
    std::map<std::string, AttrValue> attributes;
};

struct Edge {
    EdgeId id;
    std::string type;
    NodeId source;
    NodeId target;
    std::optional<int> position;  // only for ordered edge types
};

// A mutable typed attributed graph conforming to a metamodel. Single-writer;
// iteration order is id order and therefore allocation order.
class Graph {
public:
    Graph() = default;
    explicit Graph(MetamodelPtr mm) : metamodel_(std::move(mm)) {}

    const MetamodelPtr& metamodel() const { return metamodel_; }

    // Throws Error with codes unknown-type / abstract-type /
    // undeclared-attribute / kind-mismatch.
    NodeId add_node(const std::string& type, std::map<std::string, AttrValue> attrs = {});

    // Strict insertion: an ordinal must extend its (source, type) group
    // contiguously. Codes: unknown-type, dangling-endpoint,
    // endpoint-mismatch, position-required, position-forbidden,
    // duplicate-ordinal, gap-in-ordinals.
    EdgeId add_edge(const std::string& type, NodeId source, NodeId target,
                    std::optional<int> position = std::nullopt);

    // Positioned insertion used during rule application, where creation order
    // does not follow ordinal order. Duplicate ordinals still fail eagerly;
    // contiguity is re-checked by conforms() once the transformation ends.
    EdgeId add_edge_deferred(const std::string& type, NodeId source, NodeId target,
                             std::optional<int> position);

    void set_attribute(NodeId node, const std::string& attr, AttrValue value);

    // Removal guards: a node with incident edges cannot be removed.
    void remove_edge(EdgeId id);
    void remove_node(NodeId id);

    bool has_node(NodeId id) const { return nodes_.count(id) != 0; }
    bool has_edge(EdgeId id) const { return edges_.count(id) != 0; }
    const Node& node(NodeId id) const;
    const Edge& edge(EdgeId id) const;
    Node& node_mut(NodeId id);

    const std::map<NodeId, Node>& nodes() const { return nodes_; }
    const std::map<EdgeId, Edge>& edges() const { return edges_; }

    const std::set<EdgeId>& out_edges(NodeId id) const;
    const std::set<EdgeId>& in_edges(NodeId id) const;

    // Targets of ordered `edge_type` edges out of `id`, in ordinal order.
    std::vector<NodeId> ordered_children(NodeId id, const std::string& edge_type) const;

    std::optional<AttrValue> attribute(NodeId id, const std::string& attr) const;

    // Full conformance re-validation; empty result means conformant.
    std::vector<Diagnostic> conforms() const;

private:
    EdgeId insert_edge(const std::string& type, NodeId source, NodeId target,
                       std::optional<int> position, bool strict_ordinals);

    MetamodelPtr metamodel_;
    std::map<NodeId, Node> nodes_;
    std::map<EdgeId, Edge> edges_;
    std::map<NodeId, std::set<EdgeId>> out_;
    std::map<NodeId, std::set<EdgeId>> in_;
    std::uint32_t next_node_ = 1;
    std::uint32_t next_edge_ = 1;
};

}  // namespace tgg
