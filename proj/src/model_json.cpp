#include "tgg/model_json.hpp"

namespace tgg {

namespace {

Json attrs_to_json(const std::map<std::string, AttrValue>& attrs) {
    Json out = Json::object();
    for (const auto& [name, value] : attrs) {
        if (const auto* i = std::get_if<std::int64_t>(&value)) {
            out[name] = *i;
        } else {
            out[name] = std::get<std::string>(value);
        }
    }
    return out;
}

std::map<std::string, AttrValue> attrs_from_json(const Json& j) {
    std::map<std::string, AttrValue> attrs;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it->is_number_integer()) {
            attrs[it.key()] = it->get<std::int64_t>();
        } else if (it->is_string()) {
            attrs[it.key()] = it->get<std::string>();
        } else {
            throw Error("parse-error", "attribute '" + it.key() + "' must be int or string");
        }
    }
    return attrs;
}

NodeId node_id_from(const Json& j, const char* field) {
    if (!j.contains(field)) throw Error("parse-error", std::string("missing field ") + field);
    return NodeId{static_cast<std::uint32_t>(std::stoul(j.at(field).get<std::string>()))};
}

}  // namespace

Json metamodel_to_json(const Metamodel& mm) {
    Json j;
    j["name"] = mm.name();
    Json nodes = Json::array();
    for (const auto& [name, def] : mm.node_types()) {
        Json n;
        n["name"] = name;
        Json attrs = Json::object();
        for (const auto& [attr, kind] : def.attributes) attrs[attr] = kind_name(kind);
        n["attrs"] = attrs;
        if (def.supertype) n["super"] = *def.supertype;
        if (def.is_abstract) n["abstract"] = true;
        nodes.push_back(n);
    }
    j["nodeTypes"] = nodes;
    Json edges = Json::array();
    for (const auto& [name, def] : mm.edge_types()) {
        Json e;
        e["name"] = name;
        e["src"] = def.source;
        e["tgt"] = def.target;
        e["ordered"] = def.ordered;
        if (def.supertype) e["super"] = *def.supertype;
        edges.push_back(e);
    }
    j["edgeTypes"] = edges;
    return j;
}

MetamodelPtr metamodel_from_json(const Json& j) {
    auto mm = std::make_shared<Metamodel>(j.at("name").get<std::string>());
    for (const auto& n : j.at("nodeTypes")) {
        NodeTypeDef def;
        def.name = n.at("name").get<std::string>();
        if (n.contains("attrs")) {
            for (auto it = n.at("attrs").begin(); it != n.at("attrs").end(); ++it) {
                const std::string kind = it->get<std::string>();
                if (kind != "int" && kind != "string") {
                    throw Error("parse-error", "attribute kind must be int or string");
                }
                def.attributes[it.key()] = kind == "int" ? AttrKind::Int : AttrKind::String;
            }
        }
        if (n.contains("super")) def.supertype = n.at("super").get<std::string>();
        if (n.contains("abstract")) def.is_abstract = n.at("abstract").get<bool>();
        mm->add_node_type(std::move(def));
    }
    for (const auto& e : j.at("edgeTypes")) {
        EdgeTypeDef def;
        def.name = e.at("name").get<std::string>();
        def.source = e.at("src").get<std::string>();
        def.target = e.at("tgt").get<std::string>();
        def.ordered = e.value("ordered", false);
        if (e.contains("super")) def.supertype = e.at("super").get<std::string>();
        mm->add_edge_type(std::move(def));
    }
    return mm;
}

Json graph_to_json(const Graph& g) {
    Json j;
    j["metamodel"] = g.metamodel() ? g.metamodel()->name() : "";
    Json nodes = Json::array();
    for (const auto& [id, n] : g.nodes()) {
        Json entry;
        entry["id"] = id.str();
        entry["type"] = n.type;
        entry["attrs"] = attrs_to_json(n.attributes);
        nodes.push_back(entry);
    }
    j["nodes"] = nodes;
    Json edges = Json::array();
    for (const auto& [id, e] : g.edges()) {
        Json entry;
        entry["id"] = id.str();
        entry["type"] = e.type;
        entry["src"] = e.source.str();
        entry["tgt"] = e.target.str();
        if (e.position) entry["pos"] = *e.position;
        edges.push_back(entry);
    }
    j["edges"] = edges;
    return j;
}

Graph graph_from_json(const Json& j, MetamodelPtr mm) {
    if (j.at("metamodel").get<std::string>() != mm->name()) {
        throw Error("metamodel-mismatch", "graph document expects metamodel '" +
                                              j.at("metamodel").get<std::string>() +
                                              "', loader provided '" + mm->name() + "'");
    }
    Graph g(std::move(mm));
    // ids are re-issued in document order; documents written by this library
    // list nodes/edges in ascending id order, so round-trips preserve ids.
    std::map<std::string, NodeId> node_ids;
    for (const auto& n : j.at("nodes")) {
        NodeId id = g.add_node(n.at("type").get<std::string>(),
                               attrs_from_json(n.value("attrs", Json::object())));
        node_ids[n.at("id").get<std::string>()] = id;
    }
    for (const auto& e : j.at("edges")) {
        auto src = node_ids.find(e.at("src").get<std::string>());
        auto tgt = node_ids.find(e.at("tgt").get<std::string>());
        if (src == node_ids.end() || tgt == node_ids.end()) {
            throw Error("dangling-endpoint", "edge references unknown node id");
        }
        std::optional<int> pos;
        if (e.contains("pos")) pos = e.at("pos").get<int>();
        g.add_edge_deferred(e.at("type").get<std::string>(), src->second, tgt->second, pos);
    }
    auto diags = g.conforms();
    if (!diags.empty()) {
        throw Error("nonconformant-model", format_diagnostics(diags));
    }
    return g;
}

Json triple_to_json(const TripleModel& t) {
    Json j;
    j["source"] = graph_to_json(t.source());
    j["target"] = graph_to_json(t.target());
    Json corrs = Json::array();
    for (const auto& [id, link] : t.corrs()) {
        Json entry;
        entry["id"] = id.str();
        entry["type"] = link.type;
        entry["src"] = link.source_node.str();
        entry["tgt"] = link.target_node.str();
        corrs.push_back(entry);
    }
    j["corrs"] = corrs;
    return j;
}

TripleModel triple_from_json(const Json& j, const TggSchema& schema) {
    TripleModel t(schema, graph_from_json(j.at("source"), schema.source_mm));
    t.target() = graph_from_json(j.at("target"), schema.target_mm);
    for (const auto& c : j.at("corrs")) {
        t.add_corr(c.at("type").get<std::string>(), node_id_from(c, "src"),
                   node_id_from(c, "tgt"));
    }
    return t;
}

std::string to_text(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // byte offset -> line/column for the diagnostic
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error("parse-error", "JSON parse error at line " + std::to_string(line) +
                                       ", column " + std::to_string(col) + ": " + e.what());
    }
}

}  // namespace tgg
