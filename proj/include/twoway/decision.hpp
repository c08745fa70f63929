// Practitioner guidance: a 16-row verdict table over four degeneracy
// booleans (usable in every configuration except the fully degenerate
// few-factor one) and a three-gate decision tree with named gates.
#pragma once

#include <optional>
#include <string>

#include "twoway/dgp.hpp"

namespace twoway {

// ---- types ----

struct DgpCharacterization {
    // Table inputs.
    bool j_small = false;
    bool alpha0_degenerate = false;
    bool gamma0_degenerate = false;
    bool eps_degenerate = false;
    // Tree inputs; queries through tree_verdict require all three.
    std::optional<bool> nondegenerate_assumed;
    std::optional<bool> sparse_network;
    std::optional<bool> very_few_factors;
};

enum class TableVerdict { CanUse, CannotUse };
enum class TreeVerdict { TwcrValid, TwcrNotValid };

struct TreeDecision {
    TreeVerdict verdict;
    // Which gate fired: "nondegenerate", "sparse_network",
    // "very_few_factors", or "default".
    std::string gate;
};

// ---- operations ----

// CannotUse only when all four degeneracy booleans hold at once.
TableVerdict table_verdict(const DgpCharacterization& c);

// Gates in order: nondegenerate -> Valid; sparse_network -> Valid;
// very_few_factors -> NotValid; otherwise Valid. Throws
// std::invalid_argument when a tree boolean is missing.
TreeDecision tree_verdict(const DgpCharacterization& c);

// Bridges a generating spec to the verdict inputs: j_small and
// very_few_factors when n_factors <= threshold, additive degeneracy when
// delta is zero, noise degeneracy when phi is zero, nondegenerate when
// delta is nonzero. sparse_network is always false (the generated panels
// are dense).
DgpCharacterization characterize_spec(const DgpSpec& spec, int j_small_threshold = 10);

std::string table_verdict_name(TableVerdict v);
std::string tree_verdict_name(TreeVerdict v);

}  // namespace twoway
