#include "tgg/triple.hpp"

namespace tgg {

namespace {
const std::set<CorrId> kNoCorrs;
}

std::vector<Diagnostic> TggSchema::validate() const {
    std::vector<Diagnostic> diags;
    if (!source_mm || !corr_mm || !target_mm) {
        diags.push_back({"missing-metamodel", "schema", "schema needs all three metamodels"});
        return diags;
    }
    auto append = [&diags](std::vector<Diagnostic> more) {
        diags.insert(diags.end(), more.begin(), more.end());
    };
    append(source_mm->validate());
    append(target_mm->validate());
    append(corr_mm->validate(/*endpoints_local=*/false));
    for (const auto& [name, def] : corr_mm->edge_types()) {
        if (!source_mm->node_type(def.source)) {
            diags.push_back({"unknown-endpoint-type", name,
                             "corr source type not in source metamodel: " + def.source});
        }
        if (!target_mm->node_type(def.target)) {
            diags.push_back({"unknown-endpoint-type", name,
                             "corr target type not in target metamodel: " + def.target});
        }
    }
    return diags;
}

CorrId TripleModel::add_corr(const std::string& type, NodeId source_node, NodeId target_node) {
    const EdgeTypeDef* def = schema_.corr_mm ? schema_.corr_mm->edge_type(type) : nullptr;
    if (!def) throw Error("unknown-corr-type", "corr type not declared: " + type);
    if (!source_.has_node(source_node) || !target_.has_node(target_node)) {
        throw Error("dangling-endpoint", "corr " + type + " endpoint does not exist");
    }
    if (!schema_.source_mm->is_node_subtype(source_.node(source_node).type, def->source)) {
        throw Error("endpoint-mismatch", "corr " + type + " source must be " + def->source +
                                             ", got " + source_.node(source_node).type);
    }
    if (!schema_.target_mm->is_node_subtype(target_.node(target_node).type, def->target)) {
        throw Error("endpoint-mismatch", "corr " + type + " target must be " + def->target +
                                             ", got " + target_.node(target_node).type);
    }
    CorrId id{next_corr_++};
    corrs_.emplace(id, CorrLink{id, type, source_node, target_node});
    by_source_[source_node].insert(id);
    by_target_[target_node].insert(id);
    return id;
}

void TripleModel::remove_corr(CorrId id) {
    auto it = corrs_.find(id);
    if (it == corrs_.end()) throw Error("unknown-corr", "no corr " + id.str());
    by_source_[it->second.source_node].erase(id);
    by_target_[it->second.target_node].erase(id);
    corrs_.erase(it);
}

void TripleModel::remove_source_node(NodeId id) {
    if (!corrs_of_source(id).empty()) {
        throw Error("node-in-use", "source node " + id.str() + " still has corr links");
    }
    source_.remove_node(id);
}

void TripleModel::remove_target_node(NodeId id) {
    if (!corrs_of_target(id).empty()) {
        throw Error("node-in-use", "target node " + id.str() + " still has corr links");
    }
    target_.remove_node(id);
}

const CorrLink& TripleModel::corr(CorrId id) const {
    auto it = corrs_.find(id);
    if (it == corrs_.end()) throw Error("unknown-corr", "no corr " + id.str());
    return it->second;
}

const std::set<CorrId>& TripleModel::corrs_of_source(NodeId id) const {
    auto it = by_source_.find(id);
    return it == by_source_.end() ? kNoCorrs : it->second;
}

const std::set<CorrId>& TripleModel::corrs_of_target(NodeId id) const {
    auto it = by_target_.find(id);
    return it == by_target_.end() ? kNoCorrs : it->second;
}

std::vector<Diagnostic> TripleModel::conforms() const {
    std::vector<Diagnostic> diags = source_.conforms();
    auto more = target_.conforms();
    diags.insert(diags.end(), more.begin(), more.end());
    for (const auto& [id, link] : corrs_) {
        const EdgeTypeDef* def = schema_.corr_mm->edge_type(link.type);
        if (!def) {
            diags.push_back({"unknown-corr-type", "corr " + id.str(),
                             "corr type not declared: " + link.type});
            continue;
        }
        if (!source_.has_node(link.source_node) || !target_.has_node(link.target_node)) {
            diags.push_back({"dangling-endpoint", "corr " + id.str(), "corr endpoint missing"});
            continue;
        }
        if (!schema_.source_mm->is_node_subtype(source_.node(link.source_node).type,
                                                def->source) ||
            !schema_.target_mm->is_node_subtype(target_.node(link.target_node).type,
                                                def->target)) {
            diags.push_back({"endpoint-mismatch", "corr " + id.str(),
                             "corr endpoints do not conform to " + link.type});
        }
    }
    return diags;
}

}  // namespace tgg
