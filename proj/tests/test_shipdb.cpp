#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>

#include "fixtures.hpp"
#include "shipclass/obs_networks.hpp"
#include "shipclass/shipdb.hpp"
#include "shipclass/to_module.hpp"

using shipdb::Database;
using shipdb::TargetRecord;

namespace {

nlohmann::json scenario_json() {
    return nlohmann::json{
        {"version", 1},
        {"features", nlohmann::json::object()},
        {"targets",
         {{{"id", "target-1"}, {"portholes", {20, 40}}},
          {{"id", "target-2"}, {"portholes", {40}}},
          {{"id", "target-3"}, {"portholes", {50, 70}}}}}};
}

}  // namespace

TEST_CASE("database loading") {
    SUBCASE("the three-target night fixture") {
        Database db = shipdb::database_from_json(scenario_json());
        REQUIRE(db.targets.size() == 3);
        CHECK(db.targets[0].portholes == std::vector<double>{20, 40});
        CHECK(db.find("target-2") != nullptr);
        CHECK(db.find("target-9") == nullptr);
    }
    SUBCASE("empty target list") {
        Database db = shipdb::database_from_json(
            nlohmann::json{{"version", 1}, {"targets", nlohmann::json::array()}});
        CHECK(db.targets.empty());
    }
    SUBCASE("non-increasing portholes rejected") {
        auto j = scenario_json();
        j["targets"][0]["portholes"] = {40, 20};
        CHECK_THROWS_WITH_AS(shipdb::database_from_json(j),
                             doctest::Contains("non-increasing"), bbn::ValidationError);
    }
    SUBCASE("missing version rejected") {
        CHECK_THROWS_WITH_AS(shipdb::database_from_json(nlohmann::json::object()),
                             doctest::Contains("version"), bbn::ValidationError);
    }
    SUBCASE("duplicate ids rejected") {
        auto j = scenario_json();
        j["targets"][1]["id"] = "target-1";
        CHECK_THROWS_WITH_AS(shipdb::database_from_json(j), doctest::Contains("duplicate"),
                             bbn::ValidationError);
    }
    SUBCASE("malformed feature distribution rejected") {
        nlohmann::json j = {{"version", 1},
                            {"features", {{"Bow", {"<25%", ">=25%"}}}},
                            {"targets",
                             {{{"id", "t"}, {"features", {{"Bow", {0.9, 0.2}}}}}}}};
        CHECK_THROWS_WITH_AS(shipdb::database_from_json(j), doctest::Contains("normalized"),
                             bbn::ValidationError);
    }
}

TEST_CASE("persistence round trip is value-identical") {
    Database db = fixtures::three_ship_db();
    auto j = shipdb::database_to_json(db);
    Database back = shipdb::database_from_json(j);
    CHECK(shipdb::database_to_json(back) == j);

    SUBCASE("through a file") {
        std::string path = "roundtrip_db_test.json";
        shipdb::save_db(db, path);
        Database loaded = shipdb::load_db(path);
        CHECK(shipdb::database_to_json(loaded) == j);
        std::remove(path.c_str());
        CHECK_THROWS_AS(shipdb::load_db("missing_db.json"), bbn::ValidationError);
    }
}

TEST_CASE("mutation has value semantics") {
    Database db = shipdb::database_from_json(scenario_json());
    auto original = shipdb::database_to_json(db);

    TargetRecord extra;
    extra.id = "target-4";
    extra.portholes = {10, 90};
    Database bigger = shipdb::upsert_target(db, extra);
    CHECK(bigger.targets.size() == 4);
    CHECK(db.targets.size() == 3);  // input value untouched

    Database back = shipdb::remove_target(bigger, "target-4");
    CHECK(shipdb::database_to_json(back) == original);

    SUBCASE("upsert with an existing id replaces in place") {
        TargetRecord replacement = db.targets[1];
        replacement.portholes = {45};
        Database replaced = shipdb::upsert_target(db, replacement);
        CHECK(replaced.targets.size() == 3);
        CHECK(replaced.targets[1].portholes == std::vector<double>{45});
    }
    SUBCASE("removing an unknown id fails") {
        CHECK_THROWS_WITH_AS(shipdb::remove_target(db, "ghost"), doctest::Contains("ghost"),
                             bbn::ValidationError);
    }
}

TEST_CASE("database edits never touch networks or survivors") {
    Database db = shipdb::database_from_json(scenario_json());
    toeval::Observations obs;
    obs.sightings = {30};

    toeval::TOModule module = toeval::build_to_module({{"Hull", {"narrow", "wide"}}});
    std::uint64_t module_hash_before = module.net.structural_hash();

    obsnet::ObservationProblem p;
    p.portholes = db.targets[0].portholes;
    p.slots = 1;
    p.false_budget = 0;
    std::uint64_t subnet_hash_before = obsnet::build_sd_net(p).structural_hash();

    toeval::Ranking before = toeval::rank_targets(db, obs);

    TargetRecord extra;
    extra.id = "target-4";
    extra.portholes = {25};
    Database bigger = shipdb::upsert_target(db, extra);
    toeval::Ranking after = toeval::rank_targets(bigger, obs);

    CHECK(module.net.structural_hash() == module_hash_before);
    CHECK(obsnet::build_sd_net(p).structural_hash() == subnet_hash_before);
    CHECK(after.results.size() == 4);

    // Every surviving target keeps a bit-identical ratio, and the relative
    // order of the original three is preserved.
    std::map<std::string, double> ratio_before, ratio_after;
    std::vector<std::string> order_before, order_after;
    for (const auto& r : before.results) {
        ratio_before[r.target_id] = r.ratio;
        order_before.push_back(r.target_id);
    }
    for (const auto& r : after.results) {
        ratio_after[r.target_id] = r.ratio;
        if (ratio_before.count(r.target_id)) order_after.push_back(r.target_id);
    }
    CHECK(order_before == order_after);
    for (const auto& [id, r] : ratio_before) CHECK(ratio_after.at(id) == r);
}

TEST_CASE("simulation") {
    TargetRecord target;
    target.id = "sim";
    target.portholes = {22, 47, 81};
    target.hatches = {60};

    SUBCASE("certain illumination, no false alarms") {
        shipdb::SimulationConfig cfg;
        cfg.illumination = 1.0;
        cfg.false_rate = 0.0;
        auto obs = shipdb::simulate_observations(target, cfg);
        CHECK(obs == std::vector<double>{20, 50, 80});  // quantized to the grid
    }
    SUBCASE("dark ship") {
        shipdb::SimulationConfig cfg;
        cfg.illumination = 0.0;
        cfg.false_rate = 0.0;
        CHECK(shipdb::simulate_observations(target, cfg).empty());
    }
    SUBCASE("deterministic under a fixed seed") {
        shipdb::SimulationConfig cfg;
        cfg.illumination = 0.6;
        cfg.false_rate = 0.5;
        cfg.seed = 1234;
        auto a = shipdb::simulate_observations(target, cfg);
        auto b = shipdb::simulate_observations(target, cfg);
        CHECK(a == b);
    }
    SUBCASE("empirical illumination frequency tracks the configured rate") {
        shipdb::SimulationConfig cfg;
        cfg.illumination = 0.7;
        cfg.false_rate = 0.0;
        int lit = 0;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i) {
            cfg.seed = static_cast<std::uint64_t>(i);
            lit += static_cast<int>(shipdb::simulate_observations(target, cfg).size());
        }
        double frequency = static_cast<double>(lit) / (3.0 * draws);
        CHECK(std::abs(frequency - 0.7) <= 0.02);
    }
    SUBCASE("observations stay on grid multiples inside [0, 100]") {
        shipdb::SimulationConfig cfg;
        cfg.illumination = 0.8;
        cfg.false_rate = 0.9;
        for (int i = 0; i < 200; ++i) {
            cfg.seed = static_cast<std::uint64_t>(i);
            auto prev = -1.0;
            for (double s : shipdb::simulate_observations(target, cfg)) {
                CHECK(s >= 0.0);
                CHECK(s <= 100.0);
                CHECK(std::fmod(s, cfg.grid) == doctest::Approx(0.0));
                CHECK(s >= prev);
                prev = s;
            }
        }
    }
    SUBCASE("per-porthole overrides") {
        shipdb::SimulationConfig cfg;
        cfg.illumination = 1.0;
        cfg.illumination_overrides[2] = 0.0;
        auto obs = shipdb::simulate_observations(target, cfg);
        CHECK(obs == std::vector<double>{20, 80});
    }
    SUBCASE("invalid config rejected") {
        shipdb::SimulationConfig cfg;
        cfg.illumination = 1.5;
        CHECK_THROWS_AS(shipdb::simulate_observations(target, cfg), bbn::ValidationError);
    }
}
