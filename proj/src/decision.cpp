#include "twoway/decision.hpp"

#include <stdexcept>

namespace twoway {

TableVerdict table_verdict(const DgpCharacterization& c) {
    const bool fully_degenerate =
        c.j_small && c.alpha0_degenerate && c.gamma0_degenerate && c.eps_degenerate;
    return fully_degenerate ? TableVerdict::CannotUse : TableVerdict::CanUse;
}

TreeDecision tree_verdict(const DgpCharacterization& c) {
    if (!c.nondegenerate_assumed || !c.sparse_network || !c.very_few_factors)
        throw std::invalid_argument(
            "tree_verdict: nondegenerate_assumed, sparse_network, and very_few_factors "
            "must all be set");
    if (*c.nondegenerate_assumed)
        return {TreeVerdict::TwcrValid, "nondegenerate"};
    if (*c.sparse_network)
        return {TreeVerdict::TwcrValid, "sparse_network"};
    if (*c.very_few_factors)
        return {TreeVerdict::TwcrNotValid, "very_few_factors"};
    return {TreeVerdict::TwcrValid, "default"};
}

DgpCharacterization characterize_spec(const DgpSpec& spec, int j_small_threshold) {
    spec.validate();
    if (j_small_threshold < 1)
        throw std::invalid_argument("characterize_spec: j_small_threshold must be >= 1");
    DgpCharacterization c;
    c.j_small = spec.n_factors <= static_cast<std::size_t>(j_small_threshold);
    c.alpha0_degenerate = spec.delta == 0.0;
    c.gamma0_degenerate = spec.delta == 0.0;
    c.eps_degenerate = spec.phi == 0.0;
    c.nondegenerate_assumed = spec.delta != 0.0;
    c.sparse_network = false;
    c.very_few_factors = c.j_small;
    return c;
}

std::string table_verdict_name(TableVerdict v) {
    return v == TableVerdict::CanUse ? "can_use" : "cannot_use";
}

std::string tree_verdict_name(TreeVerdict v) {
    return v == TreeVerdict::TwcrValid ? "valid" : "not_valid";
}

}  // namespace twoway
