// outcomes.hpp -- enumeration and counting of observation explanations:
// ordered sequences of porthole indices (strictly increasing) interleaved with
// false detections (W), bounded by a slot count and a false-detection budget.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace obsnet {

/// One explanation token: porthole index 1..n, or kFalseDetection (W).
constexpr int kFalseDetection = 0;

/// An ordered explanation of 1..m observation slots. Trailing unused slots are
/// not part of the sequence (they are evidence-node states, not tokens).
using OutcomeSequence = std::vector<int>;

std::string outcome_label(const OutcomeSequence& seq);

/// All legal sequences for n portholes, m slots, false budget f, in
/// length-major lexicographic order (porthole tokens order before W).
std::vector<OutcomeSequence> enumerate_outcomes(int n, int m, int f);

struct OutcomeCount {
    std::int64_t total = 0;
    std::vector<std::int64_t> by_false_count;  // index j = sequences using j false detections
};

/// Closed-form count: sum over j <= f, k with 1 <= k+j <= m of C(k+j, j) * C(n, k).
/// Matches enumerate_outcomes (validated across the small grid in tests).
OutcomeCount count_outcomes(int n, int m, int f);

}  // namespace obsnet
