#pragma once

#include <optional>
#include <string>

#include "tgg/engine.hpp"
#include "tgg/rules.hpp"

namespace tgg::flowgraphs {

// The complete Flowgraphs case: metamodels and rule set (shipped as
// rules/flowgraphs.json and embedded at build time) plus the two host-code
// plugins the rules name.
struct FlowgraphsCase {
    RuleSet ruleset;
    Registries registries;
};

FlowgraphsCase build_flowgraphs_ruleset();

// Cached copy of the embedded rule set.
const RuleSet& default_ruleset();
const std::string& embedded_ruleset_text();

Registries make_registries();

MetamodelPtr ast_metamodel();
MetamodelPtr flow_metamodel();
MetamodelPtr corr_metamodel();

// Control-flow successor of a statement, as an AST node: the next sibling if
// any; after the last statement of an If branch, whatever follows the If;
// after the last statement of a While body, the While itself; after the last
// statement of the method body, the Method node (whose exit correspondence
// yields the Exit). Return statements jump to the Method node, break
// statements to the successor of the innermost enclosing While. nullopt when
// the node sits outside a method body (the match is discarded).
std::optional<NodeId> resolve_next_flow_node(NodeId ast_node, const Graph& ast);

// Backward post-processing: renumbers every statement index in document
// order across nested blocks. Forward and check applications are no-ops.
void postprocess_set_index(const Match& match, TripleModel& triple, Direction dir);

}  // namespace tgg::flowgraphs
