#include "shipclass/shipdb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "shipclass/network.hpp"
#include "shipclass/obs_problem.hpp"

namespace shipdb {

using bbn::ValidationError;
using nlohmann::json;
using nlohmann::ordered_json;

const FeatureSpec& Database::feature(const std::string& name) const {
    for (const auto& f : feature_space) {
        if (f.name == name) return f;
    }
    throw ValidationError("database declares no feature '" + name + "'");
}

const TargetRecord* Database::find(const std::string& id) const {
    for (const auto& t : targets) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

void validate_record(const Database& db, const TargetRecord& record) {
    if (record.id.empty()) throw ValidationError("target record without id");
    for (size_t i = 0; i < record.portholes.size(); ++i) {
        double loc = record.portholes[i];
        if (loc <= 0.0 || loc >= 100.0) {
            throw ValidationError("target '" + record.id + "': porthole location " +
                                  std::to_string(loc) + " outside (0, 100)");
        }
        if (i > 0 && loc <= record.portholes[i - 1]) {
            throw ValidationError("target '" + record.id + "': non-increasing porthole locations");
        }
    }
    for (const auto& [name, dist] : record.features) {
        const FeatureSpec& spec = db.feature(name);
        if (dist.size() != static_cast<Eigen::Index>(spec.states.size())) {
            throw ValidationError("target '" + record.id + "': feature '" + name + "' has " +
                                  std::to_string(dist.size()) + " weights, expected " +
                                  std::to_string(spec.states.size()));
        }
        if ((dist.array() < 0.0).any() || std::abs(dist.sum() - 1.0) > bbn::kRowSumTolerance) {
            throw ValidationError("target '" + record.id + "': feature '" + name +
                                  "' is not a normalized distribution");
        }
    }
    for (const auto& spec : db.feature_space) {
        if (!record.features.count(spec.name)) {
            throw ValidationError("target '" + record.id + "': missing feature '" + spec.name + "'");
        }
    }
}

Database database_from_json(const json& j) {
    if (!j.is_object() || !j.contains("version")) {
        throw ValidationError("database json needs a 'version' field");
    }
    Database db;
    db.version = j.at("version").get<int>();
    if (db.version != 1) {
        throw ValidationError("unsupported database version " + std::to_string(db.version));
    }
    if (j.contains("features")) {
        for (const auto& [name, states] : j.at("features").items()) {
            db.feature_space.push_back({name, states.get<std::vector<std::string>>()});
        }
    }
    std::set<std::string> ids;
    for (const auto& tj : j.value("targets", json::array())) {
        TargetRecord t;
        t.id = tj.at("id").get<std::string>();
        t.class_designation = tj.value("class", t.id);
        t.taxonomy_path = tj.value("taxonomy_path", std::vector<std::string>{});
        t.portholes = tj.value("portholes", std::vector<double>{});
        t.hatches = tj.value("hatches", std::vector<double>{});
        const json feature_block = tj.value("features", json::object());
        for (const auto& [name, weights] : feature_block.items()) {
            auto w = weights.get<std::vector<double>>();
            t.features[name] = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
        }
        if (!ids.insert(t.id).second) throw ValidationError("duplicate target id '" + t.id + "'");
        validate_record(db, t);
        db.targets.push_back(std::move(t));
    }
    return db;
}

ordered_json database_to_json(const Database& db) {
    ordered_json j;
    j["version"] = db.version;
    j["features"] = ordered_json::object();
    for (const auto& f : db.feature_space) j["features"][f.name] = f.states;
    j["targets"] = ordered_json::array();
    for (const auto& t : db.targets) {
        ordered_json tj;
        tj["id"] = t.id;
        tj["class"] = t.class_designation;
        tj["taxonomy_path"] = t.taxonomy_path;
        tj["portholes"] = t.portholes;
        tj["hatches"] = t.hatches;
        tj["features"] = ordered_json::object();
        for (const auto& [name, dist] : t.features) {
            std::vector<double> w(dist.data(), dist.data() + dist.size());
            tj["features"][name] = w;
        }
        j["targets"].push_back(std::move(tj));
    }
    return j;
}

Database load_db(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("invalid json in '" + path + "': " + e.what());
    }
    return database_from_json(j);
}

void save_db(const Database& db, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << database_to_json(db).dump(2) << "\n";
}

Database upsert_target(Database db, TargetRecord record) {
    validate_record(db, record);
    for (auto& t : db.targets) {
        if (t.id == record.id) {
            t = std::move(record);
            return db;
        }
    }
    db.targets.push_back(std::move(record));
    return db;
}

Database remove_target(Database db, const std::string& id) {
    auto it = std::find_if(db.targets.begin(), db.targets.end(),
                           [&](const TargetRecord& t) { return t.id == id; });
    if (it == db.targets.end()) throw ValidationError("no target with id '" + id + "'");
    db.targets.erase(it);
    return db;
}

std::vector<double> simulate_observations(const TargetRecord& target, const SimulationConfig& cfg) {
    if (cfg.illumination < 0.0 || cfg.illumination > 1.0 || cfg.false_rate < 0.0 ||
        cfg.false_rate > 1.0) {
        throw ValidationError("simulation probabilities must lie in [0, 1]");
    }
    if (!(cfg.grid > 0.0)) throw ValidationError("simulation grid must be positive");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> sightings;

    for (size_t i = 0; i < target.portholes.size(); ++i) {
        double prob = cfg.illumination;
        auto it = cfg.illumination_overrides.find(static_cast<int>(i) + 1);
        if (it != cfg.illumination_overrides.end()) prob = it->second;
        if (unit(rng) < prob) sightings.push_back(target.portholes[i]);
    }
    if (target.hatches.empty()) {
        if (unit(rng) < cfg.false_rate) sightings.push_back(unit(rng) * 100.0);
    } else {
        for (double h : target.hatches) {
            if (unit(rng) < cfg.false_rate) sightings.push_back(h);
        }
    }

    auto bins = obsnet::bin_locations(cfg.grid);
    if (bins.empty()) throw ValidationError("grid " + std::to_string(cfg.grid) + " leaves no bins");
    for (double& s : sightings) s = bins[static_cast<size_t>(obsnet::nearest_bin(s, cfg.grid))];
    std::sort(sightings.begin(), sightings.end());
    return sightings;
}

}  // namespace shipdb
