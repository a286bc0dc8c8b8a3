#include "shipclass/to_module.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>

#include "shipclass/inference.hpp"
#include "shipclass/outcomes.hpp"

namespace toeval {

using bbn::ValidationError;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bbn::Network feature_net(const std::vector<shipdb::FeatureSpec>& features,
                         const std::map<std::string, Eigen::VectorXd>* target_features) {
    std::vector<bbn::Variable> variables;
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::pair<std::string, bbn::Table>> tables;

    variables.push_back({obsnet::kRootName, {obsnet::kTargetState, obsnet::kOtherState}});
    {
        bbn::Table root;
        root.rows = Eigen::MatrixXd::Constant(1, 2, 0.5);
        tables.emplace_back(obsnet::kRootName, std::move(root));
    }
    for (const auto& f : features) {
        if (f.states.empty()) throw ValidationError("feature '" + f.name + "' has no states");
        variables.push_back({f.name, f.states});
        edges.emplace_back(obsnet::kRootName, f.name);
        bbn::Table t;
        t.parents = {obsnet::kRootName};
        int card = static_cast<int>(f.states.size());
        t.rows = Eigen::MatrixXd::Constant(2, card, 1.0 / card);
        if (target_features) {
            t.rows.row(0) = target_features->at(f.name).transpose();
        }
        tables.emplace_back(f.name, std::move(t));
    }
    return bbn::build_network(std::move(variables), edges, std::move(tables));
}

struct LogPair {
    double t = 0.0;
    double o = 0.0;
};

int default_slots(const Observations& obs) {
    int slots = static_cast<int>(obs.sightings.size());
    for (const auto& sf : obs.slot_findings) slots = std::max(slots, sf.slot);
    return std::max(slots, 1);
}

/// Best-explanation log scores of the feature block (observed features as
/// hard evidence, unobserved ones free), with the network's own root prior
/// divided back out.
LogPair feature_scores(const TOModule& module, const shipdb::TargetRecord& target,
                       const Observations& obs) {
    bbn::Network net = bind_target(module, target);
    bbn::EvidenceSet evidence;
    for (const auto& [name, state] : obs.features) {
        if (!net.has_variable(name)) {
            throw ValidationError("observations mention unknown feature '" + name + "'");
        }
        evidence = bbn::apply_finding(net, std::move(evidence), bbn::hard_finding(net, name, state));
    }
    // The uniform reference columns keep the O side strictly positive, so the
    // query cannot be zero-mass here.
    bbn::BelStar bs = bbn::bel_star(net, evidence, obsnet::kRootName);
    LogPair pair;
    pair.t = bs.raw_log(0) - std::log(0.5);
    pair.o = bs.raw_log(1) - std::log(0.5);
    return pair;
}

struct PortholeBlock {
    LogPair scores;
    std::map<std::string, std::string> explanation;
};

PortholeBlock porthole_scores(const shipdb::TargetRecord& target, const Observations& obs,
                              const EvalConfig& config) {
    PortholeBlock block;
    int slots = obs.slots.value_or(default_slots(obs));
    int budget = obs.false_budget.value_or(0);
    bool have_evidence = !obs.sightings.empty() || !obs.slot_findings.empty();
    if (target.portholes.empty() && budget == 0) {
        // Nothing this target could show; real sightings rule it out entirely.
        if (have_evidence) block.scores.t = kNegInf;
        return block;
    }

    obsnet::ObservationProblem problem;
    problem.portholes = target.portholes;
    problem.hatches = target.hatches;
    problem.slots = slots;
    problem.false_budget = budget;

    bbn::Network net = config.structure == EvalConfig::Structure::exhaustive
                           ? obsnet::build_exhaustive_net(problem, config.model)
                           : obsnet::build_sd_net(problem, config.model);
    bbn::EvidenceSet evidence = observation_evidence(net, problem, obs);

    bbn::BelStar bs = bbn::bel_star(net, evidence, obsnet::kRootName);

    // Rescale the T side from the network's uniform-over-own-outcomes prior to
    // the shared per-outcome weight 1/count(reference, slots, budget).
    std::int64_t own = obsnet::count_outcomes(problem.porthole_count(), slots, budget).total;
    std::int64_t reference = obsnet::count_outcomes(config.reference_portholes, slots, budget).total;
    block.scores.t = bs.raw_log(0) - std::log(0.5) + std::log(static_cast<double>(own)) -
                     std::log(static_cast<double>(reference));
    block.scores.o = bs.raw_log(1) - std::log(0.5);

    if (std::isfinite(block.scores.t)) {
        bbn::EvidenceSet conditioned = bbn::apply_finding(
            net, evidence, bbn::hard_finding(net, obsnet::kRootName, obsnet::kTargetState));
        bbn::MpeResult mpe = bbn::mpe_assignment(net, conditioned);
        for (bbn::VarId v = 0; v < net.num_vars(); ++v) {
            const bbn::Variable& var = net.variable(v);
            if (var.name == obsnet::kRootName) continue;
            block.explanation[var.name] =
                var.states[static_cast<size_t>(mpe.assignment[static_cast<size_t>(v)])];
        }
    }
    return block;
}

}  // namespace

bbn::EvidenceSet observation_evidence(const bbn::Network& net,
                                      const obsnet::ObservationProblem& problem,
                                      const Observations& obs) {
    bbn::EvidenceSet evidence;
    std::vector<double> sightings = obs.sightings;
    std::sort(sightings.begin(), sightings.end());
    if (static_cast<int>(sightings.size()) > problem.slots) {
        throw ValidationError(std::to_string(sightings.size()) + " sightings but only " +
                              std::to_string(problem.slots) + " observation slots");
    }
    auto bins = obsnet::bin_locations(problem.grid);
    for (size_t i = 0; i < sightings.size(); ++i) {
        int slot = static_cast<int>(i) + 1;
        std::string state = obsnet::location_label(
            bins[static_cast<size_t>(obsnet::nearest_bin(sightings[i], problem.grid))]);
        evidence = bbn::apply_finding(
            net, std::move(evidence),
            bbn::hard_finding(net, obsnet::evidence_node_name(slot), state));
    }
    for (const auto& sf : obs.slot_findings) {
        if (sf.slot < 1 || sf.slot > problem.slots) {
            throw ValidationError("slot finding out of range: slot " + std::to_string(sf.slot));
        }
        evidence = bbn::apply_finding(
            net, std::move(evidence),
            bbn::Finding{obsnet::evidence_node_name(sf.slot), sf.weights});
    }
    return evidence;
}

TOModule build_to_module(const std::vector<shipdb::FeatureSpec>& features) {
    if (features.empty()) throw ValidationError("a {T|O} module needs at least one feature");
    TOModule module;
    module.features = features;
    module.net = feature_net(features, nullptr);
    return module;
}

bbn::Network bind_target(const TOModule& module, const shipdb::TargetRecord& target) {
    for (const auto& f : module.features) {
        if (!target.features.count(f.name)) {
            throw ValidationError("target '" + target.id + "' lacks feature '" + f.name + "'");
        }
    }
    return feature_net(module.features, &target.features);
}

bbn::Finding error_evidence(const std::string& observed_state, const shipdb::TargetRecord& target,
                            const shipdb::FeatureSpec& feature) {
    auto it = target.features.find(feature.name);
    if (it == target.features.end()) {
        throw ValidationError("target '" + target.id + "' lacks feature '" + feature.name + "'");
    }
    int idx = -1;
    for (size_t i = 0; i < feature.states.size(); ++i) {
        if (feature.states[i] == observed_state) idx = static_cast<int>(i);
    }
    if (idx < 0) {
        throw ValidationError("feature '" + feature.name + "' has no state '" + observed_state + "'");
    }
    Eigen::VectorXd weights(2);
    weights(0) = it->second(idx);
    weights(1) = 1.0 / static_cast<double>(feature.states.size());
    return bbn::Finding{obsnet::kRootName, weights};
}

std::pair<double, double> combine_feature_scores(
    const std::vector<std::pair<double, double>>& scores) {
    if (scores.empty()) throw ValidationError("no feature scores to combine");
    double log_t = 0.0, log_o = 0.0;
    for (const auto& [t, o] : scores) {
        if (t < 0.0 || o < 0.0) throw ValidationError("feature scores must be non-negative");
        log_t += t > 0.0 ? std::log(t) : kNegInf;
        log_o += o > 0.0 ? std::log(o) : kNegInf;
    }
    double peak = std::max(log_t, log_o);
    if (peak == kNegInf) return {0.0, 0.0};
    double et = std::exp(log_t - peak), eo = std::exp(log_o - peak);
    return {et / (et + eo), eo / (et + eo)};
}

EvaluationResult evaluate_target(const TOModule& module, const shipdb::TargetRecord& target,
                                 const Observations& obs, const EvalConfig& config) {
    if (config.prior_t < 0.0 || config.prior_o <= 0.0) {
        throw ValidationError("scenario priors must be non-negative with P(O) > 0");
    }
    LogPair features = feature_scores(module, target, obs);
    PortholeBlock portholes = porthole_scores(target, obs, config);

    EvaluationResult result;
    result.target_id = target.id;
    result.log_score_t = std::log(config.prior_t) + features.t + portholes.scores.t;
    result.log_score_o = std::log(config.prior_o) + features.o + portholes.scores.o;
    result.explanation = std::move(portholes.explanation);
    for (const auto& [name, state] : obs.features) result.explanation[name] = state;

    if (!std::isfinite(result.log_score_o) && !std::isfinite(result.log_score_t)) {
        throw bbn::ZeroMassEvidence("evidence is self-contradictory: both hypotheses have zero mass");
    }
    if (!std::isfinite(result.log_score_t)) {
        result.bel_star_t = 0.0;
        result.bel_star_o = 1.0;
        result.ratio = 0.0;
        result.explanation.clear();
        return result;
    }
    double peak = std::max(result.log_score_t, result.log_score_o);
    double et = std::exp(result.log_score_t - peak);
    double eo = std::exp(result.log_score_o - peak);
    result.bel_star_t = et / (et + eo);
    result.bel_star_o = eo / (et + eo);
    result.ratio = std::exp(result.log_score_t - result.log_score_o);
    return result;
}

Ranking rank_targets(const shipdb::Database& db, const Observations& obs,
                     const EvalConfig& config) {
    if (db.targets.empty()) throw ValidationError("cannot rank an empty target database");
    TOModule module;
    if (db.feature_space.empty()) {
        module.net = feature_net({}, nullptr);  // root only; portholes carry the evidence
    } else {
        module = build_to_module(db.feature_space);
    }

    Ranking ranking;
    ranking.results.resize(db.targets.size());
    auto evaluate_range = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            ranking.results[i] = evaluate_target(module, db.targets[i], obs, config);
        }
    };
    int jobs = std::max(1, config.jobs);
    if (jobs == 1 || db.targets.size() < 2) {
        evaluate_range(0, db.targets.size());
    } else {
        size_t chunk = (db.targets.size() + static_cast<size_t>(jobs) - 1) / static_cast<size_t>(jobs);
        std::vector<std::future<void>> futures;
        for (size_t begin = 0; begin < db.targets.size(); begin += chunk) {
            size_t end = std::min(begin + chunk, db.targets.size());
            futures.push_back(std::async(std::launch::async, evaluate_range, begin, end));
        }
        for (auto& f : futures) f.get();
    }

    std::sort(ranking.results.begin(), ranking.results.end(),
              [](const EvaluationResult& a, const EvaluationResult& b) {
                  if (a.ratio != b.ratio) return a.ratio > b.ratio;
                  return a.target_id < b.target_id;
              });
    ranking.rejected = std::all_of(ranking.results.begin(), ranking.results.end(),
                                   [](const EvaluationResult& r) { return r.ratio < 1.0; });
    return ranking;
}

std::string reject_decision(const Ranking& ranking) {
    return ranking.rejected ? kRejectStatement : "accept";
}

Observations observations_from_json(const nlohmann::json& j) {
    Observations obs;
    if (!j.is_object()) throw ValidationError("evidence file must hold a json object");
    const nlohmann::json feature_block = j.value("features", nlohmann::json::object());
    for (const auto& [name, state] : feature_block.items()) {
        obs.features[name] = state.get<std::string>();
    }
    obs.sightings = j.value("sightings", std::vector<double>{});
    for (const auto& sj : j.value("slot_findings", nlohmann::json::array())) {
        SlotFinding sf;
        sf.slot = sj.at("slot").get<int>();
        auto w = sj.at("weights").get<std::vector<double>>();
        sf.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
        obs.slot_findings.push_back(std::move(sf));
    }
    if (j.contains("slots")) obs.slots = j.at("slots").get<int>();
    if (j.contains("false_budget")) obs.false_budget = j.at("false_budget").get<int>();
    return obs;
}

Observations load_observations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("invalid json in '" + path + "': " + e.what());
    }
    return observations_from_json(j);
}

std::vector<FeatureBalance> evidence_balance(const shipdb::Database& db) {
    std::vector<FeatureBalance> balance;
    for (const auto& spec : db.feature_space) {
        FeatureBalance fb;
        fb.feature = spec.name;
        for (const auto& target : db.targets) {
            auto it = target.features.find(spec.name);
            if (it == target.features.end()) continue;
            double odds = it->second.maxCoeff() * static_cast<double>(spec.states.size());
            fb.max_odds = std::max(fb.max_odds, odds);
        }
        balance.push_back(fb);
    }
    return balance;
}

}  // namespace toeval
