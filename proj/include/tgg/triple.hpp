#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tgg/core.hpp"
#include "tgg/graph.hpp"
#include "tgg/metamodel.hpp"

namespace tgg {

// The triple of source, correspondence, and target metamodels.
struct TggSchema {
    MetamodelPtr source_mm;
    MetamodelPtr corr_mm;
    MetamodelPtr target_mm;

    // Corr edge types span source and target node types (subtype-aware).
    std::vector<Diagnostic> validate() const;
};

// A correspondence link pairing one source node with one target node, typed
// by an edge type of the correspondence metamodel.
struct CorrLink {
    CorrId id;
    std::string type;
    NodeId source_node;
    NodeId target_node;
};

class TripleModel {
public:
    TripleModel() = default;
    explicit TripleModel(const TggSchema& schema)
        : schema_(schema), source_(schema.source_mm), target_(schema.target_mm) {}
    TripleModel(const TggSchema& schema, Graph source)
        : schema_(schema), source_(std::move(source)), target_(schema.target_mm) {}

    const TggSchema& schema() const { return schema_; }
    Graph& source() { return source_; }
    Graph& target() { return target_; }
    const Graph& source() const { return source_; }
    const Graph& target() const { return target_; }

    // Codes: unknown-corr-type, dangling-endpoint, endpoint-mismatch.
    CorrId add_corr(const std::string& type, NodeId source_node, NodeId target_node);
    void remove_corr(CorrId id);

    // Removing a node is only legal once its corr links (and edges) are gone.
    void remove_source_node(NodeId id);
    void remove_target_node(NodeId id);

    const CorrLink& corr(CorrId id) const;
    const std::map<CorrId, CorrLink>& corrs() const { return corrs_; }
    const std::set<CorrId>& corrs_of_source(NodeId id) const;
    const std::set<CorrId>& corrs_of_target(NodeId id) const;

    // Graph conformance of both sides plus corr endpoint/type validity.
    std::vector<Diagnostic> conforms() const;

private:
    TggSchema schema_;
    Graph source_;
    Graph target_;
    std::map<CorrId, CorrLink> corrs_;
    std::map<NodeId, std::set<CorrId>> by_source_;
    std::map<NodeId, std::set<CorrId>> by_target_;
    std::uint32_t next_corr_ = 1;
};

}  // namespace tgg
