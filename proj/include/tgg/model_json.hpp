#pragma once

#include <string>

#include "json.hpp"
#include "tgg/graph.hpp"
#include "tgg/metamodel.hpp"
#include "tgg/triple.hpp"

namespace tgg {

// Stable key order everywhere: golden files diff cleanly.
using Json = nlohmann::ordered_json;

Json metamodel_to_json(const Metamodel& mm);
MetamodelPtr metamodel_from_json(const Json& j);

// {metamodel: name, nodes: [{id, type, attrs}], edges: [{id, type, src, tgt, pos?}]}
Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j, MetamodelPtr mm);

// {source: {...}, target: {...}, corrs: [{id, type, src, tgt}]}
Json triple_to_json(const TripleModel& t);
TripleModel triple_from_json(const Json& j, const TggSchema& schema);

std::string to_text(const Json& j);

// Wraps nlohmann parse errors as Error("parse-error", ...) with line/column.
Json parse_json_text(const std::string& text);

}  // namespace tgg
