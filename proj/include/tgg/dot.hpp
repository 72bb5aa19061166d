#pragma once

#include <string>

#include "tgg/triple.hpp"

namespace tgg {

struct DotOptions {
    bool with_corrs = false;  // dashed correspondence edges (--trace)
};

// Deterministic DOT rendering of a triple's flowgraph side: nodes labelled by
// txt (type name when unset), solid cfNext edges, containment and branch
// edges dotted/labelled, corr edges dashed on request.
std::string export_dot(const TripleModel& triple, const DotOptions& options = {});

}  // namespace tgg
