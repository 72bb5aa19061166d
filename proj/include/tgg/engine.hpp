#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tgg/csp.hpp"
#include "tgg/rules.hpp"
#include "tgg/triple.hpp"

namespace tgg {

enum class Direction { Forward, Backward, Check };

const char* direction_name(Direction d);

// Translation bookkeeping: which input elements have been consumed by a rule
// application. Check mode additionally consumes corr links.
struct GraphMarks {
    std::set<NodeId> nodes;
    std::set<EdgeId> edges;
};

struct Marks {
    GraphMarks source;
    GraphMarks target;
    std::set<CorrId> corrs;
};

// How one rule element behaves once the rule is compiled for a direction.
enum class ElementRole {
    MatchMarked,    // input context: must exist and already be marked
    MatchAndMark,   // input created: matched unmarked, marked on application
    MatchExisting,  // output context / corr context: matched, no bookkeeping
    Create,         // output created / corr created
};

struct OperationalRule {
    TggRule rule;
    Direction direction = Direction::Forward;
    CspPlan plan;
    std::map<std::string, ElementRole> element_roles;  // element id ->
    std::map<std::string, ElementRole> edge_roles;     // rule edge id ->
    std::vector<bool> binding_active;                  // parallel to rule.bindings
    std::string anchor_element;
};

struct Match {
    std::map<std::string, NodeId> nodes;  // element id -> model node
    std::map<std::string, CorrId> corrs;  // corr element id -> corr link
    std::map<std::string, EdgeId> edges;  // rule edge id -> model edge
    Bindings bindings;                    // harvested attribute variables
    NodeId anchor;
};

struct ApplicationRecord {
    std::string rule;
    Direction direction = Direction::Forward;
    NodeId anchor;
    std::map<std::string, NodeId> created_nodes;  // element id ->
    std::map<std::string, EdgeId> created_edges;
    std::map<std::string, CorrId> created_corrs;
    // formatted ids in creation order: s3/t4 nodes, se5/te6 edges, c7 corrs
    std::vector<std::string> created;
};

// One line per application: rule, direction, anchor, created ids.
std::string trace_line(const ApplicationRecord& record);

// Host-code plugins. A resolver computes the node a binding expression points
// at from the partial match; none discards the candidate. A post-processor
// may only mutate attributes of output-domain nodes.
using Resolver = std::function<std::optional<NodeId>(
    const Match&, const TripleModel&, Direction, NodeId from_node)>;
using PostProcessor = std::function<void(const Match&, TripleModel&, Direction)>;

struct Registries {
    ConstraintRegistry constraints;
    std::map<std::string, Resolver> resolvers;
    std::map<std::string, PostProcessor> post_processors;
};

void register_resolver(Registries& regs, const std::string& name, Resolver resolver);
void register_post_processor(Registries& regs, const std::string& name, PostProcessor hook);

// Compiles a rule for one direction: input-domain created elements become
// match-and-mark obligations, the CSP is ordered from input-bound variables,
// binding expressions outside the input domain are flagged inactive.
// Code rule-rejected when the CSP cannot be ordered for the direction.
OperationalRule operationalize(const TggRule& rule, Direction direction,
                               const TggSchema& schema,
                               const ConstraintRegistry& constraints);

// All maximal matches, ordered by matched anchor node id. A resolver failure
// discards the candidate silently.
std::vector<Match> find_matches(const OperationalRule& op, const TripleModel& triple,
                                const Marks& marks, const Registries& regs);
std::vector<Match> find_matches_anchored(const OperationalRule& op, const TripleModel& triple,
                                         const Marks& marks, const Registries& regs,
                                         NodeId anchor);

// Applies one match; returns nothing (and mutates nothing) when the match
// went stale or its CSP fails on re-solve.
std::optional<ApplicationRecord> apply_rule(const OperationalRule& op, const Match& match,
                                            TripleModel& triple, Marks& marks,
                                            const Registries& regs);

class TransformStuck : public Error {
public:
    TransformStuck(std::string message, std::vector<std::string> untranslated)
        : Error("stuck", std::move(message)), untranslated_(std::move(untranslated)) {}
    const std::vector<std::string>& untranslated() const { return untranslated_; }

private:
    std::vector<std::string> untranslated_;
};

struct TransformOptions {
    // Test hook: shuffles worklist scan order and rule preference with a
    // seeded RNG to exercise confluence. Production runs leave it unset.
    std::optional<std::uint64_t> scramble_seed;
};

struct TransformResult {
    TripleModel triple;
    Marks marks;
    std::vector<ApplicationRecord> trace;
};

TransformResult forward_transform(const Graph& source, const RuleSet& rules,
                                  const Registries& regs,
                                  const TransformOptions& options = {});
TransformResult backward_transform(const Graph& target, const RuleSet& rules,
                                   const Registries& regs,
                                   const TransformOptions& options = {});

struct CheckResult {
    bool accepted = false;
    std::vector<std::string> report;  // unmarked / unmatched inventory on reject
    std::vector<ApplicationRecord> trace;
};

CheckResult check_consistency(const TripleModel& triple, const RuleSet& rules,
                              const Registries& regs);

// Deterministic containment preorder used by the worklists: roots first,
// children along ordered edges by (type, ordinal, id), stragglers by id.
std::vector<NodeId> containment_preorder(const Graph& g);

}  // namespace tgg
