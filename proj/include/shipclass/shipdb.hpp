// shipdb.hpp -- target database: records, JSON persistence, value-semantics
// mutation, and a seeded observation simulator for end-to-end tests.
//
// Database file schema (version field mandatory):
//   {
//     "version": 1,
//     "features": {"Bow": ["<25%", ">=25%"], ...},
//     "targets": [{"id": "...", "class": "...", "taxonomy_path": [...],
//                  "portholes": [...], "hatches": [...],
//                  "features": {"Bow": [1.0, 0.0], ...}}, ...]
//   }
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

namespace shipdb {

struct FeatureSpec {
    std::string name;
    std::vector<std::string> states;
};

struct TargetRecord {
    std::string id;
    std::string class_designation;
    std::vector<std::string> taxonomy_path;
    std::vector<double> portholes;  // strictly increasing percent locations
    std::vector<double> hatches;
    std::map<std::string, Eigen::VectorXd> features;  // expected-value distribution per feature
};

struct Database {
    int version = 1;
    std::vector<FeatureSpec> feature_space;
    std::vector<TargetRecord> targets;

    const FeatureSpec& feature(const std::string& name) const;
    const TargetRecord* find(const std::string& id) const;
};

Database database_from_json(const nlohmann::json& j);
nlohmann::ordered_json database_to_json(const Database& db);

Database load_db(const std::string& path);
void save_db(const Database& db, const std::string& path);

/// Validates one record against the database's feature space.
void validate_record(const Database& db, const TargetRecord& record);

/// Insert or replace by id; returns the new database value.
Database upsert_target(Database db, TargetRecord record);

/// Remove by id; unknown ids are an error.
Database remove_target(Database db, const std::string& id);

struct SimulationConfig {
    double illumination = 1.0;                     // per-porthole lit probability
    std::map<int, double> illumination_overrides;  // 1-based porthole index -> probability
    double false_rate = 0.0;   // per-hatch sighting probability (one uniform draw if no hatches)
    double grid = 10.0;
    std::uint64_t seed = 0;
};

/// Quantized, ascending sighting locations for one night: each porthole lit
/// independently, false detections at hatch locations per the rate.
/// Deterministic for a fixed seed.
std::vector<double> simulate_observations(const TargetRecord& target, const SimulationConfig& cfg);

}  // namespace shipdb
