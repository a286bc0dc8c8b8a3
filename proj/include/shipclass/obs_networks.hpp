// obs_networks.hpp -- the two observation-network structures over a porthole
// problem: the exhaustive construction (one node enumerating every legal
// explanation of all slots jointly) and the sequential-decomposition chain
// (one compressed legitimate-outcome node per slot). Both expose a root
// "Class" {T, O} and evidence nodes "O1".."Om", and assign every legal
// explanation the same weight, so best-explanation values at the root agree
// exactly between the two structures.
#pragma once

#include <string>
#include <vector>

#include "shipclass/network.hpp"
#include "shipclass/obs_problem.hpp"

namespace obsnet {

constexpr const char* kRootName = "Class";
constexpr const char* kTargetState = "T";
constexpr const char* kOtherState = "O";
constexpr const char* kOutcomeName = "Outcome";
constexpr const char* kNoState = "NO";

std::string evidence_node_name(int slot);   // "O1", "O2", ...
std::string alts_node_name(int slot);       // "O1-Alts", ...

/// Per-slot hypothesis labels of the sequential-decomposition nodes. Track
/// states are labeled by (false detections consumed, last matched porthole):
/// "2" = porthole 2 with no false detection, "W2" = porthole 2 after one,
/// "W"/"WW" = only false detections so far; plus "NO" and "O" per slot.
struct SDStateSpace {
    std::vector<std::vector<std::string>> slot_labels;  // index 0 = slot 1
};

SDStateSpace sd_state_space(int portholes, int false_budget, int slots);

/// Root {T,O} -> Outcome node (every legal sequence under T, one catch-all
/// per observable length under O) -> evidence nodes. Refuses with
/// CapacityError when (number of sequences) x (joint evidence configurations)
/// exceeds model.exhaustive_cap; the error carries the computed counts.
bbn::Network build_exhaustive_net(const ObservationProblem& p, const ObservationModel& model = {});

/// Root {T,O} -> chain of per-slot alternative nodes, each evidence node
/// conditioned on its two adjacent chain nodes so the transition kind
/// (porthole match vs. false detection) selects the measurement row.
/// Transitions carry completion counts: every legal explanation path gets
/// weight 1/N, the exhaustive node's uniform weight.
bbn::Network build_sd_net(const ObservationProblem& p, const ObservationModel& model = {});

}  // namespace obsnet
