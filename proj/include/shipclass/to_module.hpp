// to_module.hpp -- the {T | O} modular evaluation scheme: one structural
// network with root {T, O} and one child per feature, re-instantiated per
// target with error-measure evidence. Porthole evidence routes through an
// observation subnetwork; categorical evidence enters as likelihood pairs
// computed against the database record. Per-target best-explanation scores
// combine by direct multiplication (in log space) into a ratio
// r = bel*(T)/bel*(O); ranking sorts by ratio and everything below 1 rejects.
#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shipclass/evidence.hpp"
#include "shipclass/network.hpp"
#include "shipclass/obs_networks.hpp"
#include "shipclass/shipdb.hpp"

namespace toeval {

/// Raw likelihood weights for one observation slot (over the evidence node's
/// states: location bins, plus NOT-OBS for slots past the first).
struct SlotFinding {
    int slot = 1;
    Eigen::VectorXd weights;
};

struct Observations {
    std::map<std::string, std::string> features;  // feature name -> observed state
    std::vector<double> sightings;                // percent locations, sorted ascending on use
    std::vector<SlotFinding> slot_findings;
    std::optional<int> slots;         // defaults to the number of observations
    std::optional<int> false_budget;  // defaults to 0
};

struct EvalConfig {
    enum class Structure { chain, exhaustive };
    Structure structure = Structure::chain;
    obsnet::ObservationModel model;
    double prior_t = 0.5;  // scenario prior odds on {T, O}
    double prior_o = 0.5;
    // Porthole explanations are weighted 1/count(reference_portholes, slots,
    // false_budget) regardless of the target, so targets with different
    // porthole counts stay comparable and db edits cannot shift survivors.
    int reference_portholes = 3;
    int jobs = 1;
};

struct TOModule {
    bbn::Network net;  // root {T,O} + one node per feature; T columns are placeholders
    std::vector<shipdb::FeatureSpec> features;
};

/// Findings on an observation network's evidence nodes: sightings sorted
/// ascending become one-hot bins on consecutive slots, raw per-slot vectors
/// enter as given. Rejects more sightings than slots.
bbn::EvidenceSet observation_evidence(const bbn::Network& net,
                                      const obsnet::ObservationProblem& problem,
                                      const Observations& obs);

TOModule build_to_module(const std::vector<shipdb::FeatureSpec>& features);

/// The module network with the target's expected feature distributions bound
/// into the T columns. The module itself is never modified.
bbn::Network bind_target(const TOModule& module, const shipdb::TargetRecord& target);

/// Likelihood weights over {T, O} for one categorical observation: the
/// target's expected probability of the observed state vs. the uniform
/// reference.
bbn::Finding error_evidence(const std::string& observed_state, const shipdb::TargetRecord& target,
                            const shipdb::FeatureSpec& feature);

struct EvaluationResult {
    std::string target_id;
    double bel_star_t = 0.0;  // normalized over {T, O}
    double bel_star_o = 0.0;
    double ratio = 0.0;  // bel*(T) / bel*(O)
    double log_score_t = 0.0;
    double log_score_o = 0.0;
    std::map<std::string, std::string> explanation;  // best T-side explanation of the sightings
};

/// Evaluates one target. An impossible target yields ratio 0, not an error;
/// self-contradictory evidence (zero mass on both hypotheses) throws
/// ZeroMassEvidence.
EvaluationResult evaluate_target(const TOModule& module, const shipdb::TargetRecord& target,
                                 const Observations& obs, const EvalConfig& config = {});

/// Componentwise product of per-feature (T, O) score pairs, renormalized;
/// accumulated in log space.
std::pair<double, double> combine_feature_scores(
    const std::vector<std::pair<double, double>>& scores);

struct Ranking {
    std::vector<EvaluationResult> results;  // descending ratio, ties by id
    bool rejected = false;                  // true iff every ratio < 1
};

Ranking rank_targets(const shipdb::Database& db, const Observations& obs,
                     const EvalConfig& config = {});

/// "accept" or the rejection statement when every ratio is below 1.
std::string reject_decision(const Ranking& ranking);

constexpr const char* kRejectStatement = "Target is something else.";

/// Diagnostic: the largest odds contribution each feature can make, per
/// target maximum. Reported so no evidence source silently dominates.
struct FeatureBalance {
    std::string feature;
    double max_odds = 0.0;
};
std::vector<FeatureBalance> evidence_balance(const shipdb::Database& db);

/// Evidence file schema:
///   {
///     "features": {"Bow": "<25%", ...},
///     "sightings": [30, ...],
///     "slot_findings": [{"slot": 1, "weights": [5,20,5,1,1,1,1,1,1]}, ...],
///     "slots": 3, "false_budget": 1            // both optional
///   }
Observations observations_from_json(const nlohmann::json& j);
Observations load_observations(const std::string& path);

}  // namespace toeval
