#include "shipclass/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "shipclass/inference.hpp"
#include "shipclass/io.hpp"

namespace taxo {

using bbn::ValidationError;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

double entropy(const Eigen::VectorXd& dist) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < dist.size(); ++i) {
        if (dist(i) > 0.0) h -= dist(i) * std::log(dist(i));
    }
    return h;
}

void collect_known_features(const TaxonomyNode& node, std::set<std::string>& known) {
    if (node.classifier) {
        if (node.classifier->kind == LevelClassifier::Kind::network) {
            const bbn::Network& net = node.classifier->net;
            for (bbn::VarId v = 0; v < net.num_vars(); ++v) {
                if (net.variable(v).name != node.classifier->hypothesis) {
                    known.insert(net.variable(v).name);
                }
            }
        }
    }
    for (const auto& child : node.children) collect_known_features(child, known);
}

LevelDecision decide_network(const TaxonomyNode& node, const toeval::Observations& obs) {
    const LevelClassifier& cls = *node.classifier;
    bbn::EvidenceSet evidence;
    for (const auto& [name, state] : obs.features) {
        if (cls.net.has_variable(name) && name != cls.hypothesis) {
            evidence = bbn::apply_finding(cls.net, std::move(evidence),
                                          bbn::hard_finding(cls.net, name, state));
        }
    }
    Eigen::VectorXd posterior = bbn::posterior_bel(cls.net, evidence, cls.hypothesis);
    const bbn::Variable& hyp = cls.net.variable(cls.net.id_of(cls.hypothesis));

    LevelDecision decision;
    decision.node_label = node.label;
    int best = 0;
    double second = 0.0;
    for (int s = 0; s < hyp.card(); ++s) {
        decision.beliefs.emplace_back(hyp.states[static_cast<size_t>(s)], posterior(s));
        if (s > 0) {
            if (posterior(s) > posterior(best)) {
                second = posterior(best);
                best = s;
            } else {
                second = std::max(second, posterior(s));
            }
        }
    }
    decision.winner = hyp.states[static_cast<size_t>(best)];
    decision.conclusive = posterior(best) >= node.thresholds.absolute &&
                          (second == 0.0 || posterior(best) / second >= node.thresholds.ratio);
    return decision;
}

LevelDecision decide_target_set(const TaxonomyNode& node, const toeval::Observations& obs,
                                const shipdb::Database& db, const toeval::EvalConfig& config) {
    const LevelClassifier& cls = *node.classifier;
    shipdb::Database subset;
    subset.version = db.version;
    subset.feature_space = db.feature_space;
    for (const auto& id : cls.target_ids) {
        const shipdb::TargetRecord* record = db.find(id);
        if (!record) throw ValidationError("taxonomy references unknown target '" + id + "'");
        subset.targets.push_back(*record);
    }
    // Other levels may own some of the evidence features; forward only what
    // the target modules understand.
    toeval::Observations level_obs = obs;
    level_obs.features.clear();
    for (const auto& [name, state] : obs.features) {
        for (const auto& spec : db.feature_space) {
            if (spec.name == name) level_obs.features[name] = state;
        }
    }
    toeval::Ranking ranking = toeval::rank_targets(subset, level_obs, config);

    if (!cls.target_priors.empty()) {
        double mean = 0.0;
        for (const auto& [id, w] : cls.target_priors) {
            if (w < 0.0) throw ValidationError("negative scenario prior for '" + id + "'");
            mean += w;
        }
        mean /= static_cast<double>(cls.target_priors.size());
        if (mean <= 0.0) throw ValidationError("scenario priors are all zero");
        for (auto& r : ranking.results) {
            auto it = cls.target_priors.find(r.target_id);
            if (it != cls.target_priors.end()) r.ratio *= it->second / mean;
        }
        std::sort(ranking.results.begin(), ranking.results.end(),
                  [](const toeval::EvaluationResult& a, const toeval::EvaluationResult& b) {
                      if (a.ratio != b.ratio) return a.ratio > b.ratio;
                      return a.target_id < b.target_id;
                  });
        ranking.rejected = std::all_of(ranking.results.begin(), ranking.results.end(),
                                       [](const auto& r) { return r.ratio < 1.0; });
    }

    LevelDecision decision;
    decision.node_label = node.label;
    double total = 0.0;
    for (const auto& r : ranking.results) total += r.ratio;
    for (const auto& r : ranking.results) {
        decision.beliefs.emplace_back(r.target_id, total > 0.0 ? r.ratio / total : 0.0);
    }
    if (total > 0.0) {
        decision.winner = ranking.results.front().target_id;
        double top = ranking.results.front().ratio / total;
        double second = ranking.results.size() > 1 ? ranking.results[1].ratio / total : 0.0;
        decision.conclusive = !ranking.rejected && top >= node.thresholds.absolute &&
                              (second == 0.0 || top / second >= node.thresholds.ratio);
    }
    return decision;
}

}  // namespace

TaxonomyNode apply_scenario_priors(TaxonomyNode node, const ScenarioPriors& priors) {
    if (!node.classifier) throw ValidationError("node '" + node.label + "' has no classifier");
    LevelClassifier& cls = *node.classifier;
    if (cls.kind == LevelClassifier::Kind::target_set) {
        for (const auto& [label, weight] : priors.weights) {
            if (std::find(cls.target_ids.begin(), cls.target_ids.end(), label) ==
                cls.target_ids.end()) {
                throw ValidationError("scenario prior for unknown hypothesis '" + label + "'");
            }
            if (weight < 0.0) throw ValidationError("negative scenario prior for '" + label + "'");
        }
        for (const auto& id : cls.target_ids) {
            if (!cls.target_priors.count(id)) cls.target_priors[id] = 1.0;
        }
        bool any = false;
        for (const auto& [label, weight] : priors.weights) {
            cls.target_priors[label] = weight;
        }
        for (const auto& [id, w] : cls.target_priors) any = any || w > 0.0;
        if (!any) throw ValidationError("scenario priors are all zero");
        return node;
    }

    const bbn::Network& net = cls.net;
    bbn::VarId hyp = net.id_of(cls.hypothesis);
    if (!net.parent_ids(hyp).empty()) {
        throw ValidationError("hypothesis '" + cls.hypothesis + "' is not a root variable");
    }
    const bbn::Variable& var = net.variable(hyp);
    Eigen::VectorXd weights = net.table(hyp).rows.row(0).transpose();
    for (const auto& [label, weight] : priors.weights) {
        weights(var.state_index(label)) = weight;  // state_index throws on unknown labels
        if (weight < 0.0) throw ValidationError("negative scenario prior for '" + label + "'");
    }
    double total = weights.sum();
    if (total <= 0.0) throw ValidationError("scenario priors are all zero");
    weights /= total;

    // Rebuild the level network with the new prior row.
    ordered_json j = bbn::network_to_json(net);
    for (auto& tj : j["tables"]) {
        if (tj["child"] == cls.hypothesis) {
            std::vector<double> row(weights.data(), weights.data() + weights.size());
            tj["rows"] = ordered_json::array({row});
        }
    }
    cls.net = bbn::network_from_json(j);
    return node;
}

ClassificationTrace classify_hierarchical(const TaxonomyNode& root, const toeval::Observations& obs,
                                          const shipdb::Database& db,
                                          const toeval::EvalConfig& config) {
    std::set<std::string> known;
    collect_known_features(root, known);
    for (const auto& spec : db.feature_space) known.insert(spec.name);
    for (const auto& [name, state] : obs.features) {
        if (!known.count(name)) {
            throw ValidationError("evidence feature '" + name + "' is unknown at every level");
        }
    }

    ClassificationTrace trace;
    const TaxonomyNode* current = &root;
    trace.final_label = root.label;
    while (current->classifier) {
        LevelDecision decision = current->classifier->kind == LevelClassifier::Kind::network
                                     ? decide_network(*current, obs)
                                     : decide_target_set(*current, obs, db, config);
        trace.levels.push_back(decision);
        if (!decision.conclusive) {
            trace.suspended = true;
            trace.final_label = current->label;
            return trace;
        }
        trace.final_label = decision.winner;
        const TaxonomyNode* next = nullptr;
        for (const auto& child : current->children) {
            if (child.label == decision.winner) next = &child;
        }
        if (!next) break;  // concluded a label with no deeper level
        current = next;
    }
    return trace;
}

std::string next_informative_feature(const bbn::Network& net, const std::string& hypothesis,
                                     const bbn::EvidenceSet& evidence,
                                     const std::vector<std::string>& candidates) {
    std::vector<std::string> usable;
    for (const auto& name : candidates) {
        if (name != hypothesis && !evidence.contains(name)) usable.push_back(name);
    }
    std::sort(usable.begin(), usable.end());
    usable.erase(std::unique(usable.begin(), usable.end()), usable.end());
    if (usable.empty()) throw ValidationError("no unobserved candidate features");

    std::string best;
    double best_expected = 0.0;
    for (const auto& name : usable) {
        Eigen::VectorXd predictive = bbn::posterior_bel(net, evidence, name);
        const bbn::Variable& var = net.variable(net.id_of(name));
        double expected = 0.0;
        for (int s = 0; s < var.card(); ++s) {
            if (predictive(s) <= 0.0) continue;
            bbn::EvidenceSet extended = bbn::apply_finding(
                net, evidence, bbn::hard_finding(net, name, var.states[static_cast<size_t>(s)]));
            expected += predictive(s) * entropy(bbn::posterior_bel(net, extended, hypothesis));
        }
        if (best.empty() || expected < best_expected - 1e-15) {
            best = name;
            best_expected = expected;
        }
    }
    return best;
}

namespace {

TaxonomyNode node_from_json(const json& j, const Thresholds& defaults) {
    TaxonomyNode node;
    node.label = j.at("label").get<std::string>();
    node.thresholds = defaults;
    if (j.contains("thresholds")) {
        node.thresholds.absolute = j["thresholds"].value("absolute", defaults.absolute);
        node.thresholds.ratio = j["thresholds"].value("ratio", defaults.ratio);
    }
    if (j.contains("classifier")) {
        const auto& cj = j["classifier"];
        LevelClassifier cls;
        std::string type = cj.at("type").get<std::string>();
        if (type == "network") {
            cls.kind = LevelClassifier::Kind::network;
            cls.hypothesis = cj.at("hypothesis").get<std::string>();
            cls.net = bbn::network_from_json(cj.at("network"));
            cls.net.id_of(cls.hypothesis);
        } else if (type == "target_set") {
            cls.kind = LevelClassifier::Kind::target_set;
            cls.target_ids = cj.at("targets").get<std::vector<std::string>>();
            if (cls.target_ids.empty()) throw ValidationError("target_set classifier with no targets");
        } else {
            throw ValidationError("unknown classifier type '" + type + "'");
        }
        node.classifier = std::move(cls);
    }
    for (const auto& child : j.value("children", json::array())) {
        node.children.push_back(node_from_json(child, defaults));
    }
    return node;
}

ordered_json node_to_json(const TaxonomyNode& node) {
    ordered_json j;
    j["label"] = node.label;
    j["thresholds"] = {{"absolute", node.thresholds.absolute}, {"ratio", node.thresholds.ratio}};
    if (node.classifier) {
        ordered_json cj;
        if (node.classifier->kind == LevelClassifier::Kind::network) {
            cj["type"] = "network";
            cj["hypothesis"] = node.classifier->hypothesis;
            cj["network"] = bbn::network_to_json(node.classifier->net);
        } else {
            cj["type"] = "target_set";
            cj["targets"] = node.classifier->target_ids;
        }
        j["classifier"] = std::move(cj);
    }
    j["children"] = ordered_json::array();
    for (const auto& child : node.children) j["children"].push_back(node_to_json(child));
    return j;
}

}  // namespace

TaxonomyNode taxonomy_from_json(const json& j) {
    if (!j.is_object() || !j.contains("version") || !j.contains("root")) {
        throw ValidationError("taxonomy json needs 'version' and 'root'");
    }
    if (j.at("version").get<int>() != 1) throw ValidationError("unsupported taxonomy version");
    Thresholds defaults;
    if (j.contains("thresholds")) {
        defaults.absolute = j["thresholds"].value("absolute", defaults.absolute);
        defaults.ratio = j["thresholds"].value("ratio", defaults.ratio);
    }
    return node_from_json(j.at("root"), defaults);
}

ordered_json taxonomy_to_json(const TaxonomyNode& root) {
    ordered_json j;
    j["version"] = 1;
    j["root"] = node_to_json(root);
    return j;
}

TaxonomyNode load_taxonomy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("invalid json in '" + path + "': " + e.what());
    }
    return taxonomy_from_json(j);
}

}  // namespace taxo
