#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tgg/core.hpp"

namespace tgg {

struct NodeTypeDef {
    std::string name;
    std::map<std::string, AttrKind> attributes;
    std::optional<std::string> supertype;
    bool is_abstract = false;
};

struct EdgeTypeDef {
    std::string name;
    std::string source;  // node type name
    std::string target;  // node type name
    bool ordered = false;
    std::optional<std::string> supertype;
};

// A typed-graph metamodel: node types with single-inheritance supertypes and
// declared attributes, plus edge types with typed endpoints.
class Metamodel {
public:
    Metamodel() = default;
    explicit Metamodel(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    void add_node_type(NodeTypeDef def);
    void add_edge_type(EdgeTypeDef def);

    const NodeTypeDef* node_type(const std::string& name) const;
    const EdgeTypeDef* edge_type(const std::string& name) const;
    const std::map<std::string, NodeTypeDef>& node_types() const { return node_types_; }
    const std::map<std::string, EdgeTypeDef>& edge_types() const { return edge_types_; }

    // True when `sub` equals `super` or reaches it along the supertype chain.
    bool is_node_subtype(const std::string& sub, const std::string& super) const;
    bool is_edge_subtype(const std::string& sub, const std::string& super) const;

    // Kind of a declared attribute, searching the supertype chain.
    std::optional<AttrKind> attribute_kind(const std::string& node_type,
                                           const std::string& attr) const;

    // Structural self-checks: unique names (by construction), acyclic
    // supertype chains, endpoints declared. Correspondence metamodels skip
    // the endpoint check; the schema validates their endpoints instead.
    std::vector<Diagnostic> validate(bool endpoints_local = true) const;

private:
    std::string name_;
    std::map<std::string, NodeTypeDef> node_types_;
    std::map<std::string, EdgeTypeDef> edge_types_;
};

using MetamodelPtr = std::shared_ptr<const Metamodel>;

}  // namespace tgg
