#include "tgg/engine.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace tgg {

const char* direction_name(Direction d) {
    switch (d) {
        case Direction::Forward: return "forward";
        case Direction::Backward: return "backward";
        case Direction::Check: return "check";
    }
    return "?";
}

std::string trace_line(const ApplicationRecord& record) {
    std::ostringstream out;
    out << record.rule << " " << direction_name(record.direction) << " anchor="
        << record.anchor.str() << " created=";
    for (std::size_t i = 0; i < record.created.size(); ++i) {
        if (i) out << ",";
        out << record.created[i];
    }
    if (record.created.empty()) out << "-";
    return out.str();
}

void register_resolver(Registries& regs, const std::string& name, Resolver resolver) {
    if (regs.resolvers.count(name)) {
        throw Error("duplicate-name", "resolver already registered: " + name);
    }
    regs.resolvers.emplace(name, std::move(resolver));
}

void register_post_processor(Registries& regs, const std::string& name, PostProcessor hook) {
    if (regs.post_processors.count(name)) {
        throw Error("duplicate-name", "post-processor already registered: " + name);
    }
    regs.post_processors.emplace(name, std::move(hook));
}

namespace {

bool domain_is_input(Domain d, Direction dir) {
    if (dir == Direction::Check) return d != Domain::Corr;
    if (dir == Direction::Forward) return d == Domain::Source;
    return d == Domain::Target;
}

// Effective variables of an element: declared variable bindings plus the
// synthesized variable behind each attribute assignment (assignments compile
// to eq constraints over these).
std::map<std::string, std::string> effective_variables(const RuleElement& el) {
    std::map<std::string, std::string> vars = el.variables;
    for (const auto& [attr, lit] : el.assignments) {
        (void)lit;
        vars.emplace(attr, TggRule::assignment_variable(el.id, attr));
    }
    return vars;
}

const Graph& graph_for(const TripleModel& triple, Domain d) {
    return d == Domain::Source ? triple.source() : triple.target();
}

const Metamodel& metamodel_for(const TggSchema& schema, Domain d) {
    switch (d) {
        case Domain::Source: return *schema.source_mm;
        case Domain::Corr: return *schema.corr_mm;
        case Domain::Target: return *schema.target_mm;
    }
    return *schema.source_mm;
}

const GraphMarks& marks_for(const Marks& marks, Domain d) {
    return d == Domain::Source ? marks.source : marks.target;
}

GraphMarks& marks_for(Marks& marks, Domain d) {
    return d == Domain::Source ? marks.source : marks.target;
}

// ---- match plan ------------------------------------------------------------

struct Step {
    enum Kind {
        Anchor,
        NodeViaEdge,   // bind the far end of a rule edge (plus the edge)
        VerifyEdge,    // both ends bound: locate the edge itself
        CorrExtend,    // bind a corr element (and its unbound endpoint if any)
        ResolveBinding,
        AssertBinding,
        GlobalNode,    // unanchored element: scan all typed nodes
    };
    Kind kind = Anchor;
    int edge_index = -1;
    int element_index = -1;
    int binding_index = -1;
    bool from_source_end = false;  // NodeViaEdge: the bound end is the edge source
};

struct MatchPlan {
    std::vector<Step> steps;
};

int element_index_of(const TggRule& rule, const std::string& id) {
    for (std::size_t i = 0; i < rule.elements.size(); ++i) {
        if (rule.elements[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

MatchPlan build_match_plan(const OperationalRule& op) {
    const TggRule& rule = op.rule;
    MatchPlan plan;
    std::set<std::string> bound;
    std::set<int> done_edges, done_corrs, done_bindings;

    auto element_matchable = [&](const RuleElement& el) {
        return op.element_roles.at(el.id) != ElementRole::Create;
    };
    auto edge_matchable = [&](const RuleEdge& e) {
        return op.edge_roles.at(e.id) != ElementRole::Create;
    };

    plan.steps.push_back({Step::Anchor, -1, element_index_of(rule, op.anchor_element), -1, false});
    bound.insert(op.anchor_element);

    bool progress = true;
    while (progress) {
        progress = false;
        // 1. verify edges with both endpoints bound
        for (std::size_t i = 0; i < rule.edges.size(); ++i) {
            const RuleEdge& e = rule.edges[i];
            if (done_edges.count(static_cast<int>(i)) || !edge_matchable(e)) continue;
            if (bound.count(e.source_element) && bound.count(e.target_element)) {
                plan.steps.push_back({Step::VerifyEdge, static_cast<int>(i), -1, -1, false});
                done_edges.insert(static_cast<int>(i));
                progress = true;
            }
        }
        if (progress) continue;
        // 2. extend along an edge with one bound endpoint
        for (std::size_t i = 0; i < rule.edges.size(); ++i) {
            const RuleEdge& e = rule.edges[i];
            if (done_edges.count(static_cast<int>(i)) || !edge_matchable(e)) continue;
            bool src_bound = bound.count(e.source_element) != 0;
            bool tgt_bound = bound.count(e.target_element) != 0;
            if (src_bound == tgt_bound) continue;
            plan.steps.push_back(
                {Step::NodeViaEdge, static_cast<int>(i), -1, -1, src_bound});
            bound.insert(src_bound ? e.target_element : e.source_element);
            done_edges.insert(static_cast<int>(i));
            progress = true;
            break;
        }
        if (progress) continue;
        // 3. extend across a corr element with at least one bound endpoint
        for (std::size_t i = 0; i < rule.elements.size(); ++i) {
            const RuleElement& el = rule.elements[i];
            if (el.domain != Domain::Corr || done_corrs.count(static_cast<int>(i))) continue;
            if (!element_matchable(el)) continue;
            if (!bound.count(el.src_element) && !bound.count(el.tgt_element)) continue;
            plan.steps.push_back({Step::CorrExtend, -1, static_cast<int>(i), -1, false});
            bound.insert(el.id);
            bound.insert(el.src_element);
            bound.insert(el.tgt_element);
            done_corrs.insert(static_cast<int>(i));
            progress = true;
            break;
        }
        if (progress) continue;
        // 4. active binding expressions resolve their target on the fly
        for (std::size_t i = 0; i < rule.bindings.size(); ++i) {
            if (done_bindings.count(static_cast<int>(i)) || !op.binding_active[i]) continue;
            const BindingExpr& b = rule.bindings[i];
            if (!bound.count(b.from_element) || bound.count(b.to_element)) continue;
            plan.steps.push_back({Step::ResolveBinding, -1, -1, static_cast<int>(i), false});
            bound.insert(b.to_element);
            done_bindings.insert(static_cast<int>(i));
            progress = true;
            break;
        }
        if (progress) continue;
        // 5. disconnected matchable element: global scan
        for (std::size_t i = 0; i < rule.elements.size(); ++i) {
            const RuleElement& el = rule.elements[i];
            if (el.domain == Domain::Corr || bound.count(el.id)) continue;
            if (!element_matchable(el)) continue;
            plan.steps.push_back({Step::GlobalNode, -1, static_cast<int>(i), -1, false});
            bound.insert(el.id);
            progress = true;
            break;
        }
    }

    // bindings not consumed structurally run as assertions once both ends are
    // bound (check direction re-runs resolvers this way)
    for (std::size_t i = 0; i < rule.bindings.size(); ++i) {
        if (done_bindings.count(static_cast<int>(i)) || !op.binding_active[i]) continue;
        const BindingExpr& b = rule.bindings[i];
        if (bound.count(b.from_element) && bound.count(b.to_element)) {
            plan.steps.push_back({Step::AssertBinding, -1, -1, static_cast<int>(i), false});
        }
    }
    return plan;
}

// ---- match search ----------------------------------------------------------

struct SearchState {
    std::map<std::string, NodeId> nodes;
    std::map<std::string, CorrId> corrs;
    std::map<std::string, EdgeId> edges;
    Bindings vars;
    std::set<NodeId> used_source_nodes, used_target_nodes;
    std::set<EdgeId> used_source_edges, used_target_edges;
    std::set<CorrId> used_corrs;
};

class Matcher {
public:
    Matcher(const OperationalRule& op, const TripleModel& triple, const Marks& marks,
            const Registries& regs, std::optional<NodeId> forced_anchor)
        : op_(op),
          triple_(triple),
          marks_(marks),
          regs_(regs),
          forced_anchor_(forced_anchor),
          plan_(build_match_plan(op)) {}

    std::vector<Match> run() {
        results_.clear();
        SearchState state;
        descend(0, state);
        std::stable_sort(results_.begin(), results_.end(),
                         [](const Match& a, const Match& b) { return a.anchor < b.anchor; });
        return results_;
    }

private:
    bool node_candidate_ok(const RuleElement& el, NodeId id, SearchState& state) const {
        const Graph& g = graph_for(triple_, el.domain);
        if (!g.has_node(id)) return false;
        const Metamodel& mm = metamodel_for(triple_.schema(), el.domain);
        if (!mm.is_node_subtype(g.node(id).type, el.type)) return false;
        ElementRole role = op_.element_roles.at(el.id);
        const GraphMarks& gm = marks_for(marks_, el.domain);
        if (role == ElementRole::MatchMarked && !gm.nodes.count(id)) return false;
        if (role == ElementRole::MatchAndMark && gm.nodes.count(id)) return false;
        const auto& used = el.domain == Domain::Source ? state.used_source_nodes
                                                       : state.used_target_nodes;
        if (used.count(id)) return false;
        return true;
    }

    // Harvest the element's variables that the plan assumes initially bound.
    bool harvest_node(const RuleElement& el, NodeId id, SearchState& state,
                      std::vector<std::string>& added) const {
        const Graph& g = graph_for(triple_, el.domain);
        for (const auto& [attr, var] : effective_variables(el)) {
            if (!op_.plan.initially_bound.count(var)) continue;
            auto value = g.attribute(id, attr);
            if (!value) return false;
            auto it = state.vars.find(var);
            if (it != state.vars.end()) {
                if (!(it->second == *value)) return false;
                continue;
            }
            state.vars.emplace(var, *value);
            added.push_back(var);
        }
        return true;
    }

    void bind_node(const RuleElement& el, NodeId id, SearchState& state,
                   std::size_t step_index) {
        std::vector<std::string> added_vars;
        if (!harvest_node(el, id, state, added_vars)) {
            for (const auto& v : added_vars) state.vars.erase(v);
            return;
        }
        state.nodes[el.id] = id;
        auto& used = el.domain == Domain::Source ? state.used_source_nodes
                                                 : state.used_target_nodes;
        used.insert(id);
        descend(step_index + 1, state);
        used.erase(id);
        state.nodes.erase(el.id);
        for (const auto& v : added_vars) state.vars.erase(v);
    }

    bool edge_candidate_ok(const RuleEdge& re, const Edge& e, SearchState& state) const {
        const Metamodel& mm = metamodel_for(triple_.schema(), re.domain);
        if (!mm.is_edge_subtype(e.type, re.type)) return false;
        ElementRole role = op_.edge_roles.at(re.id);
        const GraphMarks& gm = marks_for(marks_, re.domain);
        if (role == ElementRole::MatchMarked && !gm.edges.count(e.id)) return false;
        if (role == ElementRole::MatchAndMark && gm.edges.count(e.id)) return false;
        const auto& used = re.domain == Domain::Source ? state.used_source_edges
                                                       : state.used_target_edges;
        if (used.count(e.id)) return false;
        if (re.position && (!e.position || *e.position != *re.position)) return false;
        if (re.position_var && !e.position) return false;
        return true;
    }

    // Returns false when a position variable conflicts.
    bool harvest_edge(const RuleEdge& re, const Edge& e, SearchState& state,
                      std::vector<std::string>& added) const {
        if (!re.position_var || !op_.plan.initially_bound.count(*re.position_var)) return true;
        AttrValue value{static_cast<std::int64_t>(*e.position)};
        auto it = state.vars.find(*re.position_var);
        if (it != state.vars.end()) return it->second == value;
        state.vars.emplace(*re.position_var, value);
        added.push_back(*re.position_var);
        return true;
    }

    void bind_edge_and_descend(const RuleEdge& re, const Edge& e, SearchState& state,
                               std::size_t step_index, const RuleElement* far_element,
                               NodeId far_node) {
        std::vector<std::string> added_vars;
        if (!harvest_edge(re, e, state, added_vars)) {
            for (const auto& v : added_vars) state.vars.erase(v);
            return;
        }
        state.edges[re.id] = e.id;
        auto& used = re.domain == Domain::Source ? state.used_source_edges
                                                 : state.used_target_edges;
        used.insert(e.id);
        if (far_element) {
            bind_node(*far_element, far_node, state, step_index);
        } else {
            descend(step_index + 1, state);
        }
        used.erase(e.id);
        state.edges.erase(re.id);
        for (const auto& v : added_vars) state.vars.erase(v);
    }

    Match to_match(const SearchState& state) const {
        Match m;
        m.nodes = state.nodes;
        m.corrs = state.corrs;
        m.edges = state.edges;
        m.bindings = state.vars;
        m.anchor = state.nodes.at(op_.anchor_element);
        return m;
    }

    void finalize(SearchState& state) {
        // the CSP must be solvable on the harvested bindings
        Bindings initial;
        for (const auto& v : op_.plan.initially_bound) {
            auto it = state.vars.find(v);
            if (it == state.vars.end()) return;
            initial.emplace(v, it->second);
        }
        SolveResult solved = solve_csp(op_.plan, initial, regs_.constraints);
        if (!solved.ok()) return;
        // output-side context attributes must agree with computed values
        for (const auto& el : op_.rule.elements) {
            if (el.domain == Domain::Corr) continue;
            if (op_.element_roles.at(el.id) != ElementRole::MatchExisting) continue;
            const Graph& g = graph_for(triple_, el.domain);
            NodeId id = state.nodes.at(el.id);
            for (const auto& [attr, var] : effective_variables(el)) {
                if (op_.plan.initially_bound.count(var)) continue;
                auto actual = g.attribute(id, attr);
                auto computed = solved.bindings->find(var);
                if (computed == solved.bindings->end()) continue;
                if (!actual || !(*actual == computed->second)) return;
            }
        }
        results_.push_back(to_match(state));
    }

    void descend(std::size_t step_index, SearchState& state) {
        if (step_index >= plan_.steps.size()) {
            finalize(state);
            return;
        }
        const Step& step = plan_.steps[step_index];
        switch (step.kind) {
            case Step::Anchor: {
                const RuleElement& el = op_.rule.elements[step.element_index];
                if (forced_anchor_) {
                    if (node_candidate_ok(el, *forced_anchor_, state)) {
                        bind_node(el, *forced_anchor_, state, step_index);
                    }
                    return;
                }
                const Graph& g = graph_for(triple_, el.domain);
                for (const auto& [id, node] : g.nodes()) {
                    (void)node;
                    if (node_candidate_ok(el, id, state)) bind_node(el, id, state, step_index);
                }
                return;
            }
            case Step::GlobalNode: {
                const RuleElement& el = op_.rule.elements[step.element_index];
                const Graph& g = graph_for(triple_, el.domain);
                for (const auto& [id, node] : g.nodes()) {
                    (void)node;
                    if (node_candidate_ok(el, id, state)) bind_node(el, id, state, step_index);
                }
                return;
            }
            case Step::NodeViaEdge: {
                const RuleEdge& re = op_.rule.edges[step.edge_index];
                const Graph& g = graph_for(triple_, re.domain);
                const RuleElement* far =
                    op_.rule.element(step.from_source_end ? re.target_element
                                                          : re.source_element);
                NodeId bound_node = state.nodes.at(step.from_source_end ? re.source_element
                                                                        : re.target_element);
                const auto& incident =
                    step.from_source_end ? g.out_edges(bound_node) : g.in_edges(bound_node);
                for (EdgeId eid : incident) {
                    const Edge& e = g.edge(eid);
                    if (!edge_candidate_ok(re, e, state)) continue;
                    NodeId far_node = step.from_source_end ? e.target : e.source;
                    if (!node_candidate_ok(*far, far_node, state)) continue;
                    bind_edge_and_descend(re, e, state, step_index, far, far_node);
                }
                return;
            }
            case Step::VerifyEdge: {
                const RuleEdge& re = op_.rule.edges[step.edge_index];
                const Graph& g = graph_for(triple_, re.domain);
                NodeId src = state.nodes.at(re.source_element);
                NodeId tgt = state.nodes.at(re.target_element);
                for (EdgeId eid : g.out_edges(src)) {
                    const Edge& e = g.edge(eid);
                    if (e.target != tgt) continue;
                    if (!edge_candidate_ok(re, e, state)) continue;
                    bind_edge_and_descend(re, e, state, step_index, nullptr, NodeId{});
                }
                return;
            }
            case Step::CorrExtend: {
                const RuleElement& el = op_.rule.elements[step.element_index];
                ElementRole role = op_.element_roles.at(el.id);
                auto src_it = state.nodes.find(el.src_element);
                auto tgt_it = state.nodes.find(el.tgt_element);
                const auto& candidates = src_it != state.nodes.end()
                                             ? triple_.corrs_of_source(src_it->second)
                                             : triple_.corrs_of_target(tgt_it->second);
                for (CorrId cid : candidates) {
                    const CorrLink& link = triple_.corr(cid);
                    if (!triple_.schema().corr_mm->is_edge_subtype(link.type, el.type)) continue;
                    if (state.used_corrs.count(cid)) continue;
                    if (role == ElementRole::MatchAndMark && marks_.corrs.count(cid)) continue;
                    if (src_it != state.nodes.end() && link.source_node != src_it->second) continue;
                    if (tgt_it != state.nodes.end() && link.target_node != tgt_it->second) continue;
                    state.corrs[el.id] = cid;
                    state.used_corrs.insert(cid);
                    const RuleElement* src_el = op_.rule.element(el.src_element);
                    const RuleElement* tgt_el = op_.rule.element(el.tgt_element);
                    if (src_it == state.nodes.end()) {
                        if (node_candidate_ok(*src_el, link.source_node, state)) {
                            bind_node(*src_el, link.source_node, state, step_index);
                        }
                    } else if (tgt_it == state.nodes.end()) {
                        if (node_candidate_ok(*tgt_el, link.target_node, state)) {
                            bind_node(*tgt_el, link.target_node, state, step_index);
                        }
                    } else {
                        descend(step_index + 1, state);
                    }
                    state.used_corrs.erase(cid);
                    state.corrs.erase(el.id);
                }
                return;
            }
            case Step::ResolveBinding: {
                const BindingExpr& b = op_.rule.bindings[step.binding_index];
                auto resolver_it = regs_.resolvers.find(b.resolver);
                if (resolver_it == regs_.resolvers.end()) {
                    throw Error("unknown-resolver", "resolver not registered: " + b.resolver);
                }
                Match partial = to_partial(state);
                auto resolved = resolver_it->second(partial, triple_, op_.direction,
                                                    state.nodes.at(b.from_element));
                if (!resolved) return;  // candidate discarded, not an error
                const RuleElement* to = op_.rule.element(b.to_element);
                if (!node_candidate_ok(*to, *resolved, state)) return;
                bind_node(*to, *resolved, state, step_index);
                return;
            }
            case Step::AssertBinding: {
                const BindingExpr& b = op_.rule.bindings[step.binding_index];
                auto resolver_it = regs_.resolvers.find(b.resolver);
                if (resolver_it == regs_.resolvers.end()) {
                    throw Error("unknown-resolver", "resolver not registered: " + b.resolver);
                }
                Match partial = to_partial(state);
                auto resolved = resolver_it->second(partial, triple_, op_.direction,
                                                    state.nodes.at(b.from_element));
                if (!resolved || *resolved != state.nodes.at(b.to_element)) return;
                descend(step_index + 1, state);
                return;
            }
        }
    }

    Match to_partial(const SearchState& state) const {
        Match m;
        m.nodes = state.nodes;
        m.corrs = state.corrs;
        m.edges = state.edges;
        m.bindings = state.vars;
        auto it = state.nodes.find(op_.anchor_element);
        if (it != state.nodes.end()) m.anchor = it->second;
        return m;
    }

    const OperationalRule& op_;
    const TripleModel& triple_;
    const Marks& marks_;
    const Registries& regs_;
    std::optional<NodeId> forced_anchor_;
    MatchPlan plan_;
    std::vector<Match> results_;
};

}  // namespace

// ---- operationalize --------------------------------------------------------

OperationalRule operationalize(const TggRule& rule, Direction direction,
                               const TggSchema& schema,
                               const ConstraintRegistry& constraints) {
    auto diags = validate_rule(rule, schema);
    if (!diags.empty()) {
        throw Error("rule-rejected", rule.name + ": " + format_diagnostics(diags));
    }
    OperationalRule op;
    op.rule = rule;
    op.direction = direction;

    for (const auto& el : rule.elements) {
        ElementRole role;
        if (el.domain == Domain::Corr) {
            if (direction == Direction::Check) {
                role = el.modifier == Modifier::Create ? ElementRole::MatchAndMark
                                                       : ElementRole::MatchExisting;
            } else {
                role = el.modifier == Modifier::Create ? ElementRole::Create
                                                       : ElementRole::MatchExisting;
            }
        } else if (domain_is_input(el.domain, direction)) {
            role = el.modifier == Modifier::Create ? ElementRole::MatchAndMark
                                                   : ElementRole::MatchMarked;
        } else {
            role = el.modifier == Modifier::Create ? ElementRole::Create
                                                   : ElementRole::MatchExisting;
        }
        op.element_roles[el.id] = role;
    }
    for (const auto& e : rule.edges) {
        ElementRole role;
        if (domain_is_input(e.domain, direction)) {
            role = e.modifier == Modifier::Create ? ElementRole::MatchAndMark
                                                  : ElementRole::MatchMarked;
        } else {
            role = e.modifier == Modifier::Create ? ElementRole::Create
                                                  : ElementRole::MatchExisting;
        }
        op.edge_roles[e.id] = role;
    }

    for (const auto& b : rule.bindings) {
        const RuleElement* from = rule.element(b.from_element);
        op.binding_active.push_back(from && domain_is_input(from->domain, direction));
    }

    // anchor: first input-domain node element to be marked, then any input
    // node element, then any node element
    for (const auto& el : rule.elements) {
        if (el.domain == Domain::Corr) continue;
        if (op.element_roles.at(el.id) == ElementRole::MatchAndMark) {
            op.anchor_element = el.id;
            break;
        }
    }
    if (op.anchor_element.empty()) {
        for (const auto& el : rule.elements) {
            if (el.domain == Domain::Corr) continue;
            if (domain_is_input(el.domain, direction)) {
                op.anchor_element = el.id;
                break;
            }
        }
    }
    if (op.anchor_element.empty()) {
        for (const auto& el : rule.elements) {
            if (el.domain != Domain::Corr) {
                op.anchor_element = el.id;
                break;
            }
        }
    }
    if (op.anchor_element.empty()) {
        throw Error("rule-rejected", rule.name + ": rule has no node elements");
    }

    std::set<std::string> initially_bound;
    for (const auto& el : rule.elements) {
        bool harvestable = el.domain != Domain::Corr &&
                           (direction == Direction::Check ||
                            domain_is_input(el.domain, direction));
        if (!harvestable) continue;
        for (const auto& [attr, var] : effective_variables(el)) {
            (void)attr;
            initially_bound.insert(var);
        }
    }
    for (const auto& e : rule.edges) {
        if (!e.position_var) continue;
        if (direction == Direction::Check || domain_is_input(e.domain, direction)) {
            initially_bound.insert(*e.position_var);
        }
    }

    // The declared constraint order reads in the creating direction of the
    // source-to-target pipeline; backward solving walks the same chain from
    // the other end, so ties break in reverse declaration order there.
    std::vector<ConstraintInstance> instances = rule.compiled_csp();
    if (direction == Direction::Backward) {
        std::reverse(instances.begin(), instances.end());
    }
    try {
        op.plan = sort_csp(instances, initially_bound, constraints);
    } catch (const Error& e) {
        throw Error("rule-rejected", rule.name + " (" + direction_name(direction) +
                                         "): " + e.what());
    }
    return op;
}

// ---- matching and application ----------------------------------------------

std::vector<Match> find_matches(const OperationalRule& op, const TripleModel& triple,
                                const Marks& marks, const Registries& regs) {
    Matcher matcher(op, triple, marks, regs, std::nullopt);
    return matcher.run();
}

std::vector<Match> find_matches_anchored(const OperationalRule& op, const TripleModel& triple,
                                         const Marks& marks, const Registries& regs,
                                         NodeId anchor) {
    Matcher matcher(op, triple, marks, regs, anchor);
    return matcher.run();
}

namespace {

bool match_is_fresh(const OperationalRule& op, const Match& match, const TripleModel& triple,
                    const Marks& marks) {
    for (const auto& el : op.rule.elements) {
        if (el.domain == Domain::Corr) {
            if (op.element_roles.at(el.id) == ElementRole::Create) continue;
            auto it = match.corrs.find(el.id);
            if (it == match.corrs.end()) return false;
            if (op.element_roles.at(el.id) == ElementRole::MatchAndMark &&
                marks.corrs.count(it->second)) {
                return false;
            }
            continue;
        }
        ElementRole role = op.element_roles.at(el.id);
        if (role == ElementRole::Create) continue;
        auto it = match.nodes.find(el.id);
        if (it == match.nodes.end()) return false;
        const Graph& g = graph_for(triple, el.domain);
        if (!g.has_node(it->second)) return false;
        const GraphMarks& gm = marks_for(marks, el.domain);
        if (role == ElementRole::MatchAndMark && gm.nodes.count(it->second)) return false;
        if (role == ElementRole::MatchMarked && !gm.nodes.count(it->second)) return false;
    }
    for (const auto& e : op.rule.edges) {
        ElementRole role = op.edge_roles.at(e.id);
        if (role == ElementRole::Create) continue;
        auto it = match.edges.find(e.id);
        if (it == match.edges.end()) return false;
        const Graph& g = graph_for(triple, e.domain);
        if (!g.has_edge(it->second)) return false;
        const GraphMarks& gm = marks_for(marks, e.domain);
        if (role == ElementRole::MatchAndMark && gm.edges.count(it->second)) return false;
        if (role == ElementRole::MatchMarked && !gm.edges.count(it->second)) return false;
    }
    return true;
}

void enforce_post_processor_contract(const Graph& input_before, const Graph& input_after,
                                     const Graph& output_before, const Graph& output_after,
                                     std::size_t corrs_before, std::size_t corrs_after,
                                     const std::string& hook) {
    auto violation = [&hook](const std::string& what) {
        throw Error("post-processor-violation", hook + " " + what);
    };
    if (corrs_before != corrs_after) violation("changed corr links");
    if (input_before.nodes().size() != input_after.nodes().size() ||
        input_before.edges().size() != input_after.edges().size()) {
        violation("changed input-domain structure");
    }
    for (const auto& [id, n] : input_before.nodes()) {
        if (!input_after.has_node(id) || !(input_after.node(id).type == n.type) ||
            !(input_after.node(id).attributes == n.attributes)) {
            violation("mutated the input domain");
        }
    }
    for (const auto& [id, e] : input_before.edges()) {
        if (!input_after.has_edge(id)) violation("mutated input-domain edges");
        const Edge& after = input_after.edge(id);
        if (after.type != e.type || after.source != e.source || after.target != e.target ||
            after.position != e.position) {
            violation("mutated input-domain edges");
        }
    }
    if (output_before.nodes().size() != output_after.nodes().size() ||
        output_before.edges().size() != output_after.edges().size()) {
        violation("changed output-domain structure");
    }
    for (const auto& [id, n] : output_before.nodes()) {
        if (!output_after.has_node(id) || output_after.node(id).type != n.type) {
            violation("retyped or removed output nodes");
        }
    }
    for (const auto& [id, e] : output_before.edges()) {
        if (!output_after.has_edge(id)) violation("mutated output-domain edges");
        const Edge& after = output_after.edge(id);
        if (after.type != e.type || after.source != e.source || after.target != e.target ||
            after.position != e.position) {
            violation("mutated output-domain edges");
        }
    }
}

}  // namespace

std::optional<ApplicationRecord> apply_rule(const OperationalRule& op, const Match& match,
                                            TripleModel& triple, Marks& marks,
                                            const Registries& regs) {
    if (!match_is_fresh(op, match, triple, marks)) return std::nullopt;

    Bindings initial;
    for (const auto& v : op.plan.initially_bound) {
        auto it = match.bindings.find(v);
        if (it == match.bindings.end()) return std::nullopt;
        initial.emplace(v, it->second);
    }
    SolveResult solved = solve_csp(op.plan, initial, regs.constraints);
    if (!solved.ok()) return std::nullopt;
    const Bindings& values = *solved.bindings;

    ApplicationRecord record;
    record.rule = op.rule.name;
    record.direction = op.direction;
    record.anchor = match.anchor;

    std::map<std::string, NodeId> element_nodes = match.nodes;

    // output-domain nodes, in declaration order
    for (const auto& el : op.rule.elements) {
        if (el.domain == Domain::Corr) continue;
        if (op.element_roles.at(el.id) != ElementRole::Create) continue;
        Graph& g = el.domain == Domain::Source ? triple.source() : triple.target();
        std::map<std::string, AttrValue> attrs;
        for (const auto& [attr, var] : effective_variables(el)) {
            auto it = values.find(var);
            if (it == values.end()) {
                throw Error("unbound-variable", op.rule.name + ": variable " + var +
                                                    " left unbound for attribute " + attr);
            }
            attrs[attr] = it->second;
        }
        NodeId id = g.add_node(el.type, std::move(attrs));
        element_nodes[el.id] = id;
        record.created_nodes[el.id] = id;
        record.created.push_back((el.domain == Domain::Source ? "s" : "t") + id.str());
    }

    // output-domain edges
    for (const auto& e : op.rule.edges) {
        if (op.edge_roles.at(e.id) != ElementRole::Create) continue;
        Graph& g = e.domain == Domain::Source ? triple.source() : triple.target();
        std::optional<int> pos = e.position;
        if (e.position_var) {
            auto it = values.find(*e.position_var);
            if (it == values.end() || !std::holds_alternative<std::int64_t>(it->second)) {
                throw Error("unbound-variable",
                            op.rule.name + ": ordinal variable " + *e.position_var +
                                " is not an int binding");
            }
            pos = static_cast<int>(std::get<std::int64_t>(it->second));
        }
        EdgeId id = g.add_edge_deferred(e.type, element_nodes.at(e.source_element),
                                        element_nodes.at(e.target_element), pos);
        record.created_edges[e.id] = id;
        record.created.push_back((e.domain == Domain::Source ? "se" : "te") + id.str());
    }

    // corr links; every created corr must touch something this application
    // created or marked
    std::set<NodeId> touched_source, touched_target;
    for (const auto& [el_id, node_id] : record.created_nodes) {
        const RuleElement* el = op.rule.element(el_id);
        (el->domain == Domain::Source ? touched_source : touched_target).insert(node_id);
    }
    for (const auto& el : op.rule.elements) {
        if (el.domain != Domain::Corr) continue;
        if (op.element_roles.at(el.id) == ElementRole::MatchAndMark) {
            marks.corrs.insert(match.corrs.at(el.id));
            continue;
        }
        if (op.element_roles.at(el.id) != ElementRole::Create) continue;
        NodeId src = element_nodes.at(el.src_element);
        NodeId tgt = element_nodes.at(el.tgt_element);
        ElementRole src_role = op.element_roles.at(el.src_element);
        ElementRole tgt_role = op.element_roles.at(el.tgt_element);
        bool src_new = touched_source.count(src) || src_role == ElementRole::MatchAndMark;
        bool tgt_new = touched_target.count(tgt) || tgt_role == ElementRole::MatchAndMark;
        if (!src_new && !tgt_new) {
            throw Error("corr-wellformedness",
                        op.rule.name + ": corr " + el.id +
                            " connects only elements untouched by this application");
        }
        CorrId id = triple.add_corr(el.type, src, tgt);
        record.created_corrs[el.id] = id;
        record.created.push_back("c" + id.str());
    }

    // translation marks
    for (const auto& el : op.rule.elements) {
        if (el.domain == Domain::Corr) continue;
        if (op.element_roles.at(el.id) != ElementRole::MatchAndMark) continue;
        GraphMarks& gm = marks_for(marks, el.domain);
        if (!gm.nodes.insert(match.nodes.at(el.id)).second) {
            throw Error("double-mark", op.rule.name + ": node marked twice");
        }
    }
    for (const auto& e : op.rule.edges) {
        if (op.edge_roles.at(e.id) != ElementRole::MatchAndMark) continue;
        GraphMarks& gm = marks_for(marks, e.domain);
        if (!gm.edges.insert(match.edges.at(e.id)).second) {
            throw Error("double-mark", op.rule.name + ": edge marked twice");
        }
    }

    // post-processing, fenced to output-domain attribute mutation
    if (op.rule.post_processor) {
        auto hook = regs.post_processors.find(*op.rule.post_processor);
        if (hook == regs.post_processors.end()) {
            throw Error("unknown-post-processor",
                        "post-processor not registered: " + *op.rule.post_processor);
        }
        bool source_is_input = op.direction != Direction::Backward;
        Graph input_before = source_is_input ? triple.source() : triple.target();
        Graph output_before = source_is_input ? triple.target() : triple.source();
        std::size_t corrs_before = triple.corrs().size();

        Match full = match;
        full.nodes = element_nodes;
        hook->second(full, triple, op.direction);

        const Graph& input_after = source_is_input ? triple.source() : triple.target();
        const Graph& output_after = source_is_input ? triple.target() : triple.source();
        enforce_post_processor_contract(input_before, input_after, output_before, output_after,
                                        corrs_before, triple.corrs().size(),
                                        *op.rule.post_processor);
    }

    // corr endpoints must resolve after every application
    for (const auto& [cid, link] : triple.corrs()) {
        if (!triple.source().has_node(link.source_node) ||
            !triple.target().has_node(link.target_node)) {
            throw Error("corr-wellformedness",
                        "corr " + cid.str() + " has dangling endpoints after " + op.rule.name);
        }
    }
    return record;
}

// ---- control algorithm -----------------------------------------------------

std::vector<NodeId> containment_preorder(const Graph& g) {
    std::vector<NodeId> order;
    std::set<NodeId> visited;
    auto visit = [&](auto&& self, NodeId id) -> void {
        if (!visited.insert(id).second) return;
        order.push_back(id);
        std::vector<const Edge*> outs;
        for (EdgeId eid : g.out_edges(id)) outs.push_back(&g.edge(eid));
        std::sort(outs.begin(), outs.end(), [](const Edge* a, const Edge* b) {
            if (a->type != b->type) return a->type < b->type;
            if (a->position != b->position) {
                if (!a->position) return false;
                if (!b->position) return true;
                return *a->position < *b->position;
            }
            return a->id < b->id;
        });
        for (const Edge* e : outs) self(self, e->target);
    };
    for (const auto& [id, node] : g.nodes()) {
        (void)node;
        if (g.in_edges(id).empty()) visit(visit, id);
    }
    for (const auto& [id, node] : g.nodes()) {
        (void)node;
        visit(visit, id);
    }
    return order;
}

namespace {

struct WorklistOutcome {
    std::vector<ApplicationRecord> trace;
};

WorklistOutcome run_worklist(Direction dir, TripleModel& triple, Marks& marks,
                             const RuleSet& rules, const Registries& regs,
                             const TransformOptions& options) {
    std::vector<OperationalRule> ops;
    ops.reserve(rules.rules.size());
    for (const auto& rule : rules.rules) {
        ops.push_back(operationalize(rule, dir, rules.schema, regs.constraints));
    }

    const Graph& input = dir == Direction::Backward ? triple.target() : triple.source();
    std::optional<std::mt19937_64> rng;
    if (options.scramble_seed) rng.emplace(*options.scramble_seed);

    WorklistOutcome outcome;
    while (true) {
        std::vector<NodeId> scan = containment_preorder(input);
        std::vector<std::size_t> rule_order(ops.size());
        for (std::size_t i = 0; i < ops.size(); ++i) rule_order[i] = i;
        if (rng) {
            std::shuffle(scan.begin(), scan.end(), *rng);
            std::shuffle(rule_order.begin(), rule_order.end(), *rng);
        }
        const GraphMarks& input_marks =
            dir == Direction::Backward ? marks.target : marks.source;

        bool applied = false;
        for (NodeId n : scan) {
            if (input_marks.nodes.count(n)) continue;
            for (std::size_t ri : rule_order) {
                auto matches = find_matches_anchored(ops[ri], triple, marks, regs, n);
                if (matches.empty()) continue;
                auto record = apply_rule(ops[ri], matches.front(), triple, marks, regs);
                if (!record) continue;
                outcome.trace.push_back(std::move(*record));
                applied = true;
                break;
            }
            if (applied) break;
        }
        if (!applied) break;
    }
    return outcome;
}

std::vector<std::string> untranslated_inventory(const Graph& g, const GraphMarks& gm) {
    std::vector<std::string> items;
    for (const auto& [id, n] : g.nodes()) {
        if (!gm.nodes.count(id)) items.push_back("node " + id.str() + " (" + n.type + ")");
    }
    for (const auto& [id, e] : g.edges()) {
        if (!gm.edges.count(id)) items.push_back("edge " + id.str() + " (" + e.type + ")");
    }
    return items;
}

void require_complete(Direction dir, const TripleModel& triple, const Marks& marks,
                      const std::vector<ApplicationRecord>& trace, const RuleSet& rules) {
    const Graph& input = dir == Direction::Backward ? triple.target() : triple.source();
    const GraphMarks& gm = dir == Direction::Backward ? marks.target : marks.source;
    const std::string axiom_name = rules.axiom().name;
    std::size_t axiom_applications = 0;
    for (const auto& rec : trace) {
        if (rec.rule == axiom_name) ++axiom_applications;
    }
    auto leftovers = untranslated_inventory(input, gm);
    if (axiom_applications == 0) {
        std::ostringstream msg;
        msg << direction_name(dir) << " transformation stuck; axiom " << axiom_name
            << " unmatched";
        leftovers.insert(leftovers.begin(), "axiom " + axiom_name + " unmatched");
        throw TransformStuck(msg.str(), leftovers);
    }
    if (!leftovers.empty()) {
        std::ostringstream msg;
        msg << direction_name(dir) << " transformation stuck; untranslated:";
        for (const auto& item : leftovers) msg << " [" << item << "]";
        throw TransformStuck(msg.str(), leftovers);
    }
    if (axiom_applications != 1) {
        throw Error("axiom-applications",
                    "expected exactly one axiom application, saw " +
                        std::to_string(axiom_applications));
    }
    auto diags = triple.conforms();
    if (!diags.empty()) {
        throw Error("nonconformant-model", format_diagnostics(diags));
    }
}

}  // namespace

TransformResult forward_transform(const Graph& source, const RuleSet& rules,
                                  const Registries& regs, const TransformOptions& options) {
    auto diags = source.conforms();
    if (!diags.empty()) throw Error("nonconformant-model", format_diagnostics(diags));
    TransformResult result{TripleModel(rules.schema, source), Marks{}, {}};
    auto outcome =
        run_worklist(Direction::Forward, result.triple, result.marks, rules, regs, options);
    result.trace = std::move(outcome.trace);
    require_complete(Direction::Forward, result.triple, result.marks, result.trace, rules);
    return result;
}

TransformResult backward_transform(const Graph& target, const RuleSet& rules,
                                   const Registries& regs, const TransformOptions& options) {
    auto diags = target.conforms();
    if (!diags.empty()) throw Error("nonconformant-model", format_diagnostics(diags));
    TransformResult result{TripleModel(rules.schema), Marks{}, {}};
    result.triple.target() = target;
    auto outcome =
        run_worklist(Direction::Backward, result.triple, result.marks, rules, regs, options);
    result.trace = std::move(outcome.trace);
    require_complete(Direction::Backward, result.triple, result.marks, result.trace, rules);
    return result;
}

CheckResult check_consistency(const TripleModel& triple, const RuleSet& rules,
                              const Registries& regs) {
    CheckResult result;
    TripleModel work = triple;
    Marks marks;
    auto outcome = run_worklist(Direction::Check, work, marks, rules, regs, {});
    result.trace = std::move(outcome.trace);

    const std::string axiom_name = rules.axiom().name;
    std::size_t axiom_applications = 0;
    for (const auto& rec : result.trace) {
        if (rec.rule == axiom_name) ++axiom_applications;
    }
    if (axiom_applications != 1) {
        result.report.push_back("axiom " + axiom_name + " matched " +
                                std::to_string(axiom_applications) + " times, expected 1");
    }
    for (const auto& item : untranslated_inventory(work.source(), marks.source)) {
        result.report.push_back("source " + item);
    }
    for (const auto& item : untranslated_inventory(work.target(), marks.target)) {
        result.report.push_back("target " + item);
    }
    for (const auto& [cid, link] : work.corrs()) {
        if (!marks.corrs.count(cid)) {
            result.report.push_back("corr " + cid.str() + " (" + link.type + ") unmatched");
        }
    }
    result.accepted = result.report.empty();
    return result;
}

}  // namespace tgg
