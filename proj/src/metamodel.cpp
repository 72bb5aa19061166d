#include "tgg/metamodel.hpp"

#include <set>

namespace tgg {

void Metamodel::add_node_type(NodeTypeDef def) {
    if (node_types_.count(def.name)) {
        throw Error("duplicate-name", "node type already declared: " + def.name);
    }
    node_types_.emplace(def.name, std::move(def));
}

void Metamodel::add_edge_type(EdgeTypeDef def) {
    if (edge_types_.count(def.name)) {
        throw Error("duplicate-name", "edge type already declared: " + def.name);
    }
    edge_types_.emplace(def.name, std::move(def));
}

const NodeTypeDef* Metamodel::node_type(const std::string& name) const {
    auto it = node_types_.find(name);
    return it == node_types_.end() ? nullptr : &it->second;
}

const EdgeTypeDef* Metamodel::edge_type(const std::string& name) const {
    auto it = edge_types_.find(name);
    return it == edge_types_.end() ? nullptr : &it->second;
}

bool Metamodel::is_node_subtype(const std::string& sub, const std::string& super) const {
    const NodeTypeDef* def = node_type(sub);
    std::set<std::string> seen;
    while (def) {
        if (def->name == super) return true;
        if (!def->supertype || !seen.insert(def->name).second) return false;
        def = node_type(*def->supertype);
    }
    return false;
}

bool Metamodel::is_edge_subtype(const std::string& sub, const std::string& super) const {
    const EdgeTypeDef* def = edge_type(sub);
    std::set<std::string> seen;
    while (def) {
        if (def->name == super) return true;
        if (!def->supertype || !seen.insert(def->name).second) return false;
        def = edge_type(*def->supertype);
    }
    return false;
}

std::optional<AttrKind> Metamodel::attribute_kind(const std::string& node_type_name,
                                                  const std::string& attr) const {
    const NodeTypeDef* def = node_type(node_type_name);
    std::set<std::string> seen;
    while (def) {
        auto it = def->attributes.find(attr);
        if (it != def->attributes.end()) return it->second;
        if (!def->supertype || !seen.insert(def->name).second) return std::nullopt;
        def = node_type(*def->supertype);
    }
    return std::nullopt;
}

std::vector<Diagnostic> Metamodel::validate(bool endpoints_local) const {
    std::vector<Diagnostic> diags;
    for (const auto& [name, def] : node_types_) {
        // supertype chain must terminate without revisiting a type
        std::set<std::string> seen{name};
        const NodeTypeDef* cur = &def;
        while (cur->supertype) {
            const NodeTypeDef* up = node_type(*cur->supertype);
            if (!up) {
                diags.push_back({"unknown-supertype", name,
                                 "supertype not declared: " + *cur->supertype});
                break;
            }
            if (!seen.insert(up->name).second) {
                diags.push_back({"cyclic-supertype", name,
                                 "supertype chain revisits " + up->name});
                break;
            }
            cur = up;
        }
    }
    for (const auto& [name, def] : edge_types_) {
        if (endpoints_local) {
            if (!node_type(def.source)) {
                diags.push_back({"unknown-endpoint-type", name,
                                 "source type not declared: " + def.source});
            }
            if (!node_type(def.target)) {
                diags.push_back({"unknown-endpoint-type", name,
                                 "target type not declared: " + def.target});
            }
        }
        if (def.supertype && !edge_type(*def.supertype)) {
            diags.push_back({"unknown-supertype", name,
                             "edge supertype not declared: " + *def.supertype});
        }
    }
    return diags;
}

}  // namespace tgg
