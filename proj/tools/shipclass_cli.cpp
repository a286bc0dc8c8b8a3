// shipclass_cli.cpp -- command-line surface: outcome counting, observation
// network generation, structure comparison, target ranking, hierarchical
// classification, and observation simulation. Reports are deterministic json
// (default) or a human table; identical inputs and seed give byte-identical
// output.
//
// Exit codes: 0 success, 2 input validation error, 3 capacity refusal under
// --strict, 4 contradictory (zero-mass) evidence.
#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "shipclass/inference.hpp"
#include "shipclass/io.hpp"
#include "shipclass/obs_networks.hpp"
#include "shipclass/outcomes.hpp"
#include "shipclass/shipdb.hpp"
#include "shipclass/taxonomy.hpp"
#include "shipclass/to_module.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitValidation = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitZeroMass = 4;

struct GlobalOptions {
    std::string format = "json";
    double tolerance = 1e-9;
    std::int64_t cap = 100000;
    bool strict = false;
    int jobs = 1;
    std::uint64_t seed = 0;
};

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bbn::ValidationError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json parse_file(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw bbn::ValidationError("invalid json in '" + path + "': " + e.what());
    }
}

std::string digest_hex(const std::string& data) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(data);
    return os.str();
}

obsnet::ObservationProblem problem_from_json(const json& j) {
    obsnet::ObservationProblem p;
    if (!j.is_object()) throw bbn::ValidationError("problem file must hold a json object");
    p.portholes = j.value("portholes", std::vector<double>{});
    p.hatches = j.value("hatches", std::vector<double>{});
    p.slots = j.value("slots", 3);
    p.false_budget = j.value("false_budget", 1);
    p.grid = j.value("grid", 10.0);
    p.validate();
    return p;
}

ordered_json report_skeleton(const std::string& command,
                             const std::vector<std::pair<std::string, std::string>>& inputs) {
    ordered_json report;
    report["command"] = command;
    report["inputs"] = ordered_json::object();
    for (const auto& [name, content] : inputs) report["inputs"][name] = digest_hex(content);
    return report;
}

void emit(const ordered_json& report, const GlobalOptions& opts,
          const std::function<void(const ordered_json&)>& table_printer) {
    if (opts.format == "table") {
        table_printer(report);
    } else {
        std::cout << report.dump(2) << "\n";
    }
}

// ---- count ---------------------------------------------------------------

int cmd_count(int portholes, int slots, int false_budget, const GlobalOptions& opts) {
    obsnet::OutcomeCount count = obsnet::count_outcomes(portholes, slots, false_budget);
    ordered_json report = report_skeleton("count", {});
    report["inputs"] = {{"portholes", portholes}, {"slots", slots}, {"false", false_budget}};
    report["results"]["total"] = count.total;
    report["results"]["by_false_count"] = count.by_false_count;
    report["status"] = "ok";
    emit(report, opts, [&](const ordered_json&) {
        std::cout << "outcomes(" << portholes << ", " << slots << ", " << false_budget
                  << ") = " << count.total << "\n";
        for (size_t j = 0; j < count.by_false_count.size(); ++j) {
            std::cout << "  with " << j << " false detections: " << count.by_false_count[j] << "\n";
        }
    });
    return 0;
}

// ---- build ----------------------------------------------------------------

int cmd_build(const std::string& problem_path, const std::string& structure,
              const std::string& out_path, const GlobalOptions& opts) {
    std::string problem_text = read_file(problem_path);
    obsnet::ObservationProblem p = problem_from_json(json::parse(problem_text));
    obsnet::ObservationModel model;
    model.exhaustive_cap = opts.cap;

    bbn::Network net = structure == "exhaustive" ? obsnet::build_exhaustive_net(p, model)
                                                 : obsnet::build_sd_net(p, model);
    ordered_json net_json = bbn::network_to_json(net);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw bbn::ValidationError("cannot write '" + out_path + "'");
        out << net_json.dump(2) << "\n";
        ordered_json report = report_skeleton("build", {{"problem", problem_text}});
        report["results"]["structure"] = structure;
        report["results"]["variables"] = net.num_vars();
        report["results"]["written"] = out_path;
        report["status"] = "ok";
        emit(report, opts, [&](const ordered_json&) {
            std::cout << "wrote " << structure << " network (" << net.num_vars()
                      << " variables) to " << out_path << "\n";
        });
    } else {
        std::cout << net_json.dump(2) << "\n";
    }
    return 0;
}

// ---- compare ---------------------------------------------------------------

ordered_json root_summary(const bbn::Network& net, const bbn::EvidenceSet& evidence) {
    ordered_json j;
    Eigen::VectorXd bel = bbn::posterior_bel(net, evidence, obsnet::kRootName);
    bbn::BelStar bs = bbn::bel_star(net, evidence, obsnet::kRootName);
    j["bel"] = {{"T", bel(0)}, {"O", bel(1)}};
    j["bel_star"] = {{"T", bs.dist(0)}, {"O", bs.dist(1)}};
    return j;
}

int cmd_compare(const std::string& problem_path, const std::string& evidence_path,
                const GlobalOptions& opts) {
    std::string problem_text = read_file(problem_path);
    std::string evidence_text = evidence_path.empty() ? "{}" : read_file(evidence_path);
    obsnet::ObservationProblem p = problem_from_json(json::parse(problem_text));
    toeval::Observations obs = toeval::observations_from_json(json::parse(evidence_text));
    if (obs.slots) p.slots = *obs.slots;
    if (obs.false_budget) p.false_budget = *obs.false_budget;
    p.validate();

    obsnet::ObservationModel model;
    model.exhaustive_cap = opts.cap;

    ordered_json report = report_skeleton(
        "compare", {{"problem", problem_text}, {"evidence", evidence_text}});
    report["results"]["slots"] = p.slots;
    report["results"]["false_budget"] = p.false_budget;

    bbn::Network chain = obsnet::build_sd_net(p, model);
    bbn::EvidenceSet chain_evidence = toeval::observation_evidence(chain, p, obs);
    report["results"]["sd"] = root_summary(chain, chain_evidence);
    ordered_json states = ordered_json::array();
    for (int t = 1; t <= p.slots; ++t) {
        states.push_back(chain.variable(chain.id_of(obsnet::alts_node_name(t))).card());
    }
    report["results"]["sd"]["slot_state_counts"] = states;

    bool refused = false;
    std::string refusal;
    try {
        bbn::Network exhaustive = obsnet::build_exhaustive_net(p, model);
        bbn::EvidenceSet evidence = toeval::observation_evidence(exhaustive, p, obs);
        report["results"]["exhaustive"] = root_summary(exhaustive, evidence);
        report["results"]["exhaustive"]["outcome_sequences"] =
            obsnet::count_outcomes(p.porthole_count(), p.slots, p.false_budget).total;

        double dt = std::abs(report["results"]["sd"]["bel_star"]["T"].get<double>() -
                             report["results"]["exhaustive"]["bel_star"]["T"].get<double>());
        double d0 = std::abs(report["results"]["sd"]["bel_star"]["O"].get<double>() -
                             report["results"]["exhaustive"]["bel_star"]["O"].get<double>());
        double bel_gap = std::abs(report["results"]["sd"]["bel"]["T"].get<double>() -
                                  report["results"]["exhaustive"]["bel"]["T"].get<double>());
        report["results"]["equality"]["bel_star_gap"] = std::max(dt, d0);
        report["results"]["equality"]["pass"] = std::max(dt, d0) <= opts.tolerance;
        report["results"]["equality"]["tolerance"] = opts.tolerance;
        report["results"]["bel_gap"] = bel_gap;
    } catch (const bbn::CapacityError& e) {
        refused = true;
        refusal = e.what();
        report["results"]["exhaustive"] = {{"refused", true},
                                           {"outcome_sequences", e.outcome_count},
                                           {"reason", e.what()}};
    }
    report["status"] = refused ? "exhaustive-refused" : "ok";

    emit(report, opts, [&](const ordered_json& r) {
        std::cout << "slots=" << p.slots << " false_budget=" << p.false_budget << "\n";
        std::cout << "sd:         bel*(T)=" << r["results"]["sd"]["bel_star"]["T"].get<double>()
                  << " bel(T)=" << r["results"]["sd"]["bel"]["T"].get<double>() << "\n";
        if (refused) {
            std::cout << "exhaustive: refused (" << refusal << ")\n";
        } else {
            std::cout << "exhaustive: bel*(T)="
                      << r["results"]["exhaustive"]["bel_star"]["T"].get<double>()
                      << " bel(T)=" << r["results"]["exhaustive"]["bel"]["T"].get<double>() << "\n";
            std::cout << "bel* gap: " << r["results"]["equality"]["bel_star_gap"].get<double>()
                      << (r["results"]["equality"]["pass"].get<bool>() ? " (pass)" : " (FAIL)")
                      << "\n";
        }
    });
    if (refused && opts.strict) return kExitCapacity;
    return 0;
}

// ---- rank -------------------------------------------------------------------

int cmd_rank(const std::string& db_path, const std::string& evidence_path,
             const std::string& structure, const GlobalOptions& opts) {
    std::string db_text = read_file(db_path);
    std::string evidence_text = read_file(evidence_path);
    shipdb::Database db = shipdb::database_from_json(json::parse(db_text));
    toeval::Observations obs = toeval::observations_from_json(json::parse(evidence_text));

    toeval::EvalConfig config;
    config.structure = structure == "exhaustive" ? toeval::EvalConfig::Structure::exhaustive
                                                 : toeval::EvalConfig::Structure::chain;
    config.model.exhaustive_cap = opts.cap;
    config.jobs = opts.jobs;

    toeval::Ranking ranking = toeval::rank_targets(db, obs, config);

    ordered_json report =
        report_skeleton("rank", {{"db", db_text}, {"evidence", evidence_text}});
    double total = 0.0;
    for (const auto& r : ranking.results) total += r.ratio;
    ordered_json rows = ordered_json::array();
    for (const auto& r : ranking.results) {
        ordered_json row;
        row["target"] = r.target_id;
        row["bel_star_t"] = r.bel_star_t;
        row["bel_star_o"] = r.bel_star_o;
        row["ratio"] = r.ratio;
        row["share"] = total > 0.0 ? r.ratio / total : 0.0;
        row["explanation"] = r.explanation;
        rows.push_back(std::move(row));
    }
    report["results"]["ranking"] = std::move(rows);
    report["results"]["rejected"] = ranking.rejected;
    report["results"]["decision"] = toeval::reject_decision(ranking);
    ordered_json balance = ordered_json::array();
    for (const auto& fb : toeval::evidence_balance(db)) {
        balance.push_back({{"feature", fb.feature}, {"max_odds", fb.max_odds}});
    }
    report["results"]["evidence_balance"] = std::move(balance);
    report["status"] = "ok";

    emit(report, opts, [&](const ordered_json& r) {
        std::cout << std::left << std::setw(12) << "target" << std::setw(12) << "bel*(T)"
                  << std::setw(12) << "bel*(O)" << std::setw(12) << "ratio" << std::setw(12)
                  << "share" << "\n";
        for (const auto& row : r["results"]["ranking"]) {
            std::cout << std::left << std::setw(12) << row["target"].get<std::string>()
                      << std::setw(12) << row["bel_star_t"].get<double>() << std::setw(12)
                      << row["bel_star_o"].get<double>() << std::setw(12)
                      << row["ratio"].get<double>() << std::setw(12) << row["share"].get<double>()
                      << "\n";
        }
        if (r["results"]["rejected"].get<bool>()) {
            std::cout << toeval::kRejectStatement << "\n";
        }
    });
    return 0;
}

// ---- classify ----------------------------------------------------------------

int cmd_classify(const std::string& taxonomy_path, const std::string& db_path,
                 const std::string& evidence_path, const GlobalOptions& opts) {
    std::string taxonomy_text = read_file(taxonomy_path);
    std::string db_text = read_file(db_path);
    std::string evidence_text = read_file(evidence_path);

    taxo::TaxonomyNode root = taxo::taxonomy_from_json(json::parse(taxonomy_text));
    shipdb::Database db = shipdb::database_from_json(json::parse(db_text));
    toeval::Observations obs = toeval::observations_from_json(json::parse(evidence_text));

    toeval::EvalConfig config;
    config.model.exhaustive_cap = opts.cap;
    config.jobs = opts.jobs;

    taxo::ClassificationTrace trace = taxo::classify_hierarchical(root, obs, db, config);

    ordered_json report = report_skeleton("classify", {{"taxonomy", taxonomy_text},
                                                       {"db", db_text},
                                                       {"evidence", evidence_text}});
    ordered_json levels = ordered_json::array();
    for (const auto& level : trace.levels) {
        ordered_json lj;
        lj["level"] = level.node_label;
        lj["beliefs"] = ordered_json::object();
        for (const auto& [label, belief] : level.beliefs) lj["beliefs"][label] = belief;
        lj["conclusive"] = level.conclusive;
        lj["winner"] = level.winner;
        levels.push_back(std::move(lj));
    }
    report["results"]["trace"] = std::move(levels);
    report["results"]["final_label"] = trace.final_label;
    report["results"]["suspended"] = trace.suspended;
    report["status"] = "ok";

    emit(report, opts, [&](const ordered_json&) {
        for (const auto& level : trace.levels) {
            std::cout << level.node_label << ": "
                      << (level.conclusive ? "-> " + level.winner : "inconclusive") << "\n";
        }
        std::cout << (trace.suspended ? "suspended at: " : "classified: ") << trace.final_label
                  << "\n";
    });
    return 0;
}

// ---- simulate -------------------------------------------------------------------

int cmd_simulate(const std::string& db_path, const std::string& target_id, double illumination,
                 double false_rate, double grid, const GlobalOptions& opts) {
    std::string db_text = read_file(db_path);
    shipdb::Database db = shipdb::database_from_json(json::parse(db_text));
    const shipdb::TargetRecord* target = db.find(target_id);
    if (!target) throw bbn::ValidationError("no target with id '" + target_id + "'");

    shipdb::SimulationConfig cfg;
    cfg.illumination = illumination;
    cfg.false_rate = false_rate;
    cfg.grid = grid;
    cfg.seed = opts.seed;
    auto sightings = shipdb::simulate_observations(*target, cfg);

    ordered_json report = report_skeleton("simulate", {{"db", db_text}});
    report["inputs"]["target"] = target_id;
    report["inputs"]["seed"] = opts.seed;
    report["results"]["sightings"] = sightings;
    report["status"] = "ok";
    emit(report, opts, [&](const ordered_json&) {
        std::cout << "sightings for " << target_id << " (seed " << opts.seed << "):";
        for (double s : sightings) std::cout << " " << s;
        std::cout << "\n";
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact belief-network toolkit for night-observation ship classification"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name

    GlobalOptions opts;
    app.add_option("--format", opts.format, "Report format: json or table")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "table"}));
    app.add_option("--tolerance", opts.tolerance, "Equality tolerance for compare")->capture_default_str();
    app.add_option("--cap", opts.cap, "State-space cap for the exhaustive builder")->capture_default_str();
    app.add_flag("--strict", opts.strict, "Exit nonzero when the exhaustive build is refused");
    app.add_option("--jobs", opts.jobs, "Parallel evaluations for rank/classify")->capture_default_str();
    app.add_option("--seed", opts.seed, "Random seed for simulate")->capture_default_str();

    auto* count = app.add_subcommand("count", "Count legal observation explanations");
    int portholes = 0, slots = 0, false_budget = 0;
    count->add_option("--portholes", portholes, "Number of portholes")->required();
    count->add_option("--slots", slots, "Number of observation slots")->required();
    count->add_option("--false", false_budget, "False-detection budget")->required();

    auto* build = app.add_subcommand("build", "Build an observation network and emit its json");
    std::string problem_path, structure = "sd", out_path;
    build->add_option("--problem", problem_path, "Observation problem file")->required();
    build->add_option("--structure", structure, "sd or exhaustive")
        ->check(CLI::IsMember({"sd", "exhaustive"}));
    build->add_option("--out", out_path, "Write the network here instead of stdout");

    auto* compare = app.add_subcommand("compare", "Compare exhaustive vs sequential structures");
    std::string cmp_problem, cmp_evidence;
    compare->add_option("--problem", cmp_problem, "Observation problem file")->required();
    compare->add_option("--evidence", cmp_evidence, "Evidence file (optional)");

    auto* rank = app.add_subcommand("rank", "Rank database targets against observations");
    std::string rank_db, rank_evidence, rank_structure = "sd";
    rank->add_option("--db", rank_db, "Target database file")->required();
    rank->add_option("--evidence", rank_evidence, "Evidence file")->required();
    rank->add_option("--structure", rank_structure, "sd or exhaustive")
        ->check(CLI::IsMember({"sd", "exhaustive"}));

    auto* classify = app.add_subcommand("classify", "Hierarchical classification");
    std::string cls_taxonomy, cls_db, cls_evidence;
    classify->add_option("--taxonomy", cls_taxonomy, "Taxonomy file")->required();
    classify->add_option("--db", cls_db, "Target database file")->required();
    classify->add_option("--evidence", cls_evidence, "Evidence file")->required();

    auto* simulate = app.add_subcommand("simulate", "Draw synthetic sightings for a target");
    std::string sim_db, sim_target;
    double sim_illumination = 1.0, sim_false_rate = 0.0, sim_grid = 10.0;
    simulate->add_option("--db", sim_db, "Target database file")->required();
    simulate->add_option("--target", sim_target, "Target id")->required();
    simulate->add_option("--illumination", sim_illumination, "Per-porthole lit probability");
    simulate->add_option("--false-rate", sim_false_rate, "Per-hatch false detection probability");
    simulate->add_option("--grid", sim_grid, "Measurement grid");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*count) return cmd_count(portholes, slots, false_budget, opts);
        if (*build) return cmd_build(problem_path, structure, out_path, opts);
        if (*compare) return cmd_compare(cmp_problem, cmp_evidence, opts);
        if (*rank) return cmd_rank(rank_db, rank_evidence, rank_structure, opts);
        if (*classify) return cmd_classify(cls_taxonomy, cls_db, cls_evidence, opts);
        if (*simulate) {
            return cmd_simulate(sim_db, sim_target, sim_illumination, sim_false_rate, sim_grid, opts);
        }
    } catch (const bbn::CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return opts.strict ? kExitCapacity : kExitValidation;
    } catch (const bbn::ZeroMassEvidence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitZeroMass;
    } catch (const bbn::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
