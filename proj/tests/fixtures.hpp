// fixtures.hpp -- shared test fixtures: the two-feature three-ship network,
// its per-target {T|O} database, and the three-target porthole scenario.
#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "shipclass/evidence.hpp"
#include "shipclass/network.hpp"
#include "shipclass/obs_problem.hpp"
#include "shipclass/shipdb.hpp"

namespace fixtures {

/// Ship node {S1,S2,S3} with Bow and Stern children; columns per ship class.
inline bbn::Network three_ship_net() {
    std::vector<bbn::Variable> vars = {
        {"Ship", {"S1", "S2", "S3"}},
        {"Bow", {"<25%", ">=25%"}},
        {"Stern", {"Round", "Curved", "Straight"}},
    };
    bbn::Table ship;
    ship.rows = Eigen::MatrixXd::Constant(1, 3, 1.0 / 3.0);
    bbn::Table bow;
    bow.parents = {"Ship"};
    bow.rows.resize(3, 2);
    bow.rows << 1.0, 0.0,   // S1
                0.2, 0.8,   // S2
                0.0, 1.0;   // S3
    bbn::Table stern;
    stern.parents = {"Ship"};
    stern.rows.resize(3, 3);
    stern.rows << 0.7, 0.3, 0.0,
                  0.1, 0.8, 0.1,
                  0.2, 0.1, 0.7;
    return bbn::build_network(std::move(vars), {{"Ship", "Bow"}, {"Ship", "Stern"}},
                              {{"Ship", std::move(ship)},
                               {"Bow", std::move(bow)},
                               {"Stern", std::move(stern)}});
}

/// The same three ships as a {T|O} database (no portholes).
inline shipdb::Database three_ship_db() {
    shipdb::Database db;
    db.feature_space = {{"Bow", {"<25%", ">=25%"}}, {"Stern", {"Round", "Curved", "Straight"}}};
    auto add = [&db](const std::string& id, std::initializer_list<double> bow,
                     std::initializer_list<double> stern) {
        shipdb::TargetRecord t;
        t.id = id;
        t.class_designation = id;
        t.features["Bow"] = Eigen::Map<const Eigen::VectorXd>(bow.begin(), 2);
        t.features["Stern"] = Eigen::Map<const Eigen::VectorXd>(stern.begin(), 3);
        db.targets.push_back(std::move(t));
    };
    add("S1", {1.0, 0.0}, {0.7, 0.3, 0.0});
    add("S2", {0.2, 0.8}, {0.1, 0.8, 0.1});
    add("S3", {0.0, 1.0}, {0.2, 0.1, 0.7});
    return db;
}

/// Porthole databases for the three-target night scenario: portholes at
/// {20,40}, {40}, {50,70}, no categorical features.
inline shipdb::Database porthole_scenario_db() {
    shipdb::Database db;
    auto add = [&db](const std::string& id, std::vector<double> portholes) {
        shipdb::TargetRecord t;
        t.id = id;
        t.class_designation = id;
        t.portholes = std::move(portholes);
        db.targets.push_back(std::move(t));
    };
    add("target-1", {20, 40});
    add("target-2", {40});
    add("target-3", {50, 70});
    return db;
}

/// Hand-built single-observation network for the same scenario: every
/// (ship, porthole) explanation carries equal weight 1/2, the one-porthole
/// ship keeping its slack on an unobservable state. One observation at 30%
/// then yields bel {2/3, 1/3, 0} and bel* {1/2, 1/2, 0} exactly.
inline bbn::Network porthole_scenario_net(const obsnet::ObservationModel& model = {}) {
    obsnet::ObservationProblem layout;  // bin geometry helper only
    layout.portholes = {20, 40, 50, 70};
    layout.slots = 1;
    layout.false_budget = 0;

    std::vector<bbn::Variable> vars;
    vars.push_back({"Ship", {"target-1", "target-2", "target-3"}});
    vars.push_back({"Source",
                    {"t1:20", "t1:40", "t2:40", "t3:50", "t3:70", "none"}});
    std::vector<std::string> obs_states;
    for (double b : obsnet::bin_locations(layout.grid)) {
        obs_states.push_back(obsnet::location_label(b));
    }
    obs_states.push_back(obsnet::kNotObserved);
    vars.push_back({"O1", obs_states});

    bbn::Table ship;
    ship.rows = Eigen::MatrixXd::Constant(1, 3, 1.0 / 3.0);

    bbn::Table source;
    source.parents = {"Ship"};
    source.rows.resize(3, 6);
    source.rows << 0.5, 0.5, 0.0, 0.0, 0.0, 0.0,
                   0.0, 0.0, 0.5, 0.0, 0.0, 0.5,
                   0.0, 0.0, 0.0, 0.5, 0.5, 0.0;

    bbn::Table obs;
    obs.parents = {"Source"};
    obs.rows.resize(6, static_cast<Eigen::Index>(obs_states.size()));
    int porthole_of_state[5] = {1, 2, 2, 3, 4};  // indices into layout.portholes
    for (int s = 0; s < 5; ++s) {
        obs.rows.row(s) =
            obsnet::porthole_row(layout, model, porthole_of_state[s], true).transpose();
    }
    obs.rows.row(5).setZero();
    obs.rows(5, static_cast<Eigen::Index>(obs_states.size()) - 1) = 1.0;

    return bbn::build_network(std::move(vars), {{"Ship", "Source"}, {"Source", "O1"}},
                              {{"Ship", std::move(ship)},
                               {"Source", std::move(source)},
                               {"O1", std::move(obs)}});
}

/// Random network generator: random DAG over small-cardinality variables with
/// at most `max_binary_equiv` total log2-cardinality. `zero_rate` controls how
/// often a table entry is hard zero (creating contradictable networks).
inline bbn::Network random_net(std::mt19937_64& rng, int max_vars = 5,
                               double max_binary_equiv = 12.0, double zero_rate = 0.0) {
    std::uniform_int_distribution<int> var_count(2, max_vars);
    std::uniform_int_distribution<int> card_dist(2, 4);
    std::uniform_real_distribution<double> unit(0.05, 1.0);

    int n = var_count(rng);
    std::vector<bbn::Variable> vars;
    double bits = 0.0;
    for (int v = 0; v < n; ++v) {
        int card = card_dist(rng);
        while (bits + std::log2(card) > max_binary_equiv && card > 2) --card;
        if (bits + std::log2(card) > max_binary_equiv) {
            n = v;
            break;
        }
        bits += std::log2(card);
        bbn::Variable var;
        var.name = "v" + std::to_string(v);
        for (int s = 0; s < card; ++s) var.states.push_back("s" + std::to_string(s));
        vars.push_back(std::move(var));
    }
    if (static_cast<int>(vars.size()) < 2) {
        vars.push_back({"v1", {"s0", "s1"}});
        n = static_cast<int>(vars.size());
    }
    n = static_cast<int>(vars.size());

    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::pair<std::string, bbn::Table>> tables;
    for (int v = 0; v < n; ++v) {
        std::vector<int> parents;
        for (int p = 0; p < v; ++p) {
            if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.4 && parents.size() < 3) {
                parents.push_back(p);
            }
        }
        bbn::Table t;
        std::int64_t rows = 1;
        for (int p : parents) {
            t.parents.push_back(vars[static_cast<size_t>(p)].name);
            edges.emplace_back(vars[static_cast<size_t>(p)].name, vars[static_cast<size_t>(v)].name);
            rows *= vars[static_cast<size_t>(p)].card();
        }
        int card = vars[static_cast<size_t>(v)].card();
        t.rows.resize(rows, card);
        std::uniform_real_distribution<double> roll(0.0, 1.0);
        for (Eigen::Index r = 0; r < t.rows.rows(); ++r) {
            double sum = 0.0;
            for (int c = 0; c < card; ++c) {
                bool zero = roll(rng) < zero_rate && c + 1 < card;  // keep one positive entry
                t.rows(r, c) = zero ? 0.0 : unit(rng);
                sum += t.rows(r, c);
            }
            t.rows.row(r) /= sum;
        }
        tables.emplace_back(vars[static_cast<size_t>(v)].name, std::move(t));
    }
    return bbn::build_network(std::move(vars), edges, std::move(tables));
}

/// Random evidence: each variable gets a positive random finding with the
/// given probability, occasionally one-hot.
inline bbn::EvidenceSet random_evidence(const bbn::Network& net, std::mt19937_64& rng,
                                        double density = 0.5) {
    bbn::EvidenceSet evidence;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (bbn::VarId v = 0; v < net.num_vars(); ++v) {
        if (unit(rng) > density) continue;
        const bbn::Variable& var = net.variable(v);
        Eigen::VectorXd w(var.card());
        if (unit(rng) < 0.25) {
            w.setZero();
            w(static_cast<int>(unit(rng) * var.card()) % var.card()) = 1.0;
        } else {
            for (int s = 0; s < var.card(); ++s) w(s) = 0.05 + unit(rng);
        }
        evidence = bbn::apply_finding(net, std::move(evidence), bbn::Finding{var.name, w});
    }
    return evidence;
}

}  // namespace fixtures
