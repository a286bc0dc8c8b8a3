// inference.hpp -- exact queries: posterior marginals (bel), best-explanation
// values (bel*), and most probable explanations, all by variable elimination.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "shipclass/evidence.hpp"
#include "shipclass/network.hpp"

namespace bbn {

/// p(query | evidence), normalized to sum 1.
/// Throws ZeroMassEvidence when the evidence contradicts the network.
Eigen::VectorXd posterior_bel(const Network& net, const EvidenceSet& evidence,
                              const std::string& query);

struct BelStar {
    Eigen::VectorXd dist;     // per-state maxima, normalized to sum 1
    Eigen::VectorXd raw_log;  // log of the unnormalized per-state maxima (-inf for zero)
};

/// For each state of `query`, the maximum evidence-weighted joint probability
/// over completions of all other variables, normalized across states.
BelStar bel_star(const Network& net, const EvidenceSet& evidence, const std::string& query);

struct MpeResult {
    std::vector<int> assignment;  // state index per VarId
    double probability = 0.0;     // evidence-weighted joint at the assignment
    double log_probability = 0.0;
};

/// A complete assignment maximizing the evidence-weighted joint. Ties resolve
/// to the lexicographically smallest assignment by (declaration order, state
/// index).
MpeResult mpe_assignment(const Network& net, const EvidenceSet& evidence);

}  // namespace bbn
