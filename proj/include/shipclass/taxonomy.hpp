// taxonomy.hpp -- coarse-to-fine hierarchical classification: per-level
// classifiers (a small network, or a {T|O} target set at the leaves),
// scenario priors, a conclusiveness rule that suspends on ambiguity, and an
// expected-entropy ordering for evidence acquisition.
//
// Taxonomy file schema:
//   {
//     "version": 1,
//     "thresholds": {"absolute": 0.6, "ratio": 2.0},   // optional global defaults
//     "root": {
//       "label": "...",
//       "thresholds": {...},                            // optional override
//       "classifier": {"type": "network", "hypothesis": "...", "network": {...}}
//                   | {"type": "target_set", "targets": ["id", ...]},
//       "children": [ <node>, ... ]
//     }
//   }
#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shipclass/network.hpp"
#include "shipclass/to_module.hpp"

namespace taxo {

struct Thresholds {
    double absolute = 0.6;  // winning belief must reach this
    double ratio = 2.0;     // and beat the runner-up by this factor
};

struct LevelClassifier {
    enum class Kind { network, target_set };
    Kind kind = Kind::network;
    bbn::Network net;        // kind == network
    std::string hypothesis;  // hypothesis variable (a root of `net`)
    std::vector<std::string> target_ids;          // kind == target_set
    std::map<std::string, double> target_priors;  // scenario prior weights, mean-normalized
};

struct TaxonomyNode {
    std::string label;
    Thresholds thresholds;
    std::optional<LevelClassifier> classifier;
    std::vector<TaxonomyNode> children;
};

struct ScenarioPriors {
    std::map<std::string, double> weights;  // hypothesis label -> prior weight
};

/// Returns the node with its classifier's priors replaced (renormalized;
/// labels not mentioned keep their current weight). Unknown labels and
/// all-zero weights are errors.
TaxonomyNode apply_scenario_priors(TaxonomyNode node, const ScenarioPriors& priors);

struct LevelDecision {
    std::string node_label;
    std::vector<std::pair<std::string, double>> beliefs;  // hypothesis -> belief
    bool conclusive = false;
    std::string winner;
};

struct ClassificationTrace {
    std::vector<LevelDecision> levels;
    std::string final_label;  // deepest conclusive label (a leaf class when complete)
    bool suspended = false;
};

/// Descends the taxonomy while each level's decision is conclusive; on an
/// inconclusive level the most specific conclusive label is returned with the
/// trace. Evidence features unknown at every level are an error.
ClassificationTrace classify_hierarchical(const TaxonomyNode& root, const toeval::Observations& obs,
                                          const shipdb::Database& db,
                                          const toeval::EvalConfig& config = {});

/// The unobserved candidate whose observation minimizes the expected Shannon
/// entropy of the hypothesis posterior; ties break lexicographically.
std::string next_informative_feature(const bbn::Network& net, const std::string& hypothesis,
                                     const bbn::EvidenceSet& evidence,
                                     const std::vector<std::string>& candidates);

TaxonomyNode taxonomy_from_json(const nlohmann::json& j);
nlohmann::ordered_json taxonomy_to_json(const TaxonomyNode& root);
TaxonomyNode load_taxonomy(const std::string& path);

}  // namespace taxo
