#include "shipclass/io.hpp"

#include <fstream>

namespace bbn {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json network_to_json(const Network& net) {
    ordered_json j;
    j["variables"] = ordered_json::array();
    j["edges"] = ordered_json::array();
    j["tables"] = ordered_json::array();
    for (VarId v = 0; v < net.num_vars(); ++v) {
        const Variable& var = net.variable(v);
        j["variables"].push_back({{"name", var.name}, {"states", var.states}});
    }
    for (VarId v = 0; v < net.num_vars(); ++v) {
        for (const auto& p : net.table(v).parents) {
            j["edges"].push_back(ordered_json::array({p, net.variable(v).name}));
        }
    }
    for (VarId v = 0; v < net.num_vars(); ++v) {
        const Table& t = net.table(v);
        ordered_json rows = ordered_json::array();
        for (Eigen::Index r = 0; r < t.rows.rows(); ++r) {
            ordered_json row = ordered_json::array();
            for (Eigen::Index c = 0; c < t.rows.cols(); ++c) row.push_back(t.rows(r, c));
            rows.push_back(std::move(row));
        }
        j["tables"].push_back({{"child", net.variable(v).name},
                               {"parents", t.parents},
                               {"rows", std::move(rows)}});
    }
    return j;
}

Network network_from_json(const json& j) {
    if (!j.is_object() || !j.contains("variables") || !j.contains("edges") || !j.contains("tables")) {
        throw ValidationError("network json needs 'variables', 'edges' and 'tables'");
    }
    std::vector<Variable> variables;
    for (const auto& vj : j.at("variables")) {
        Variable v;
        v.name = vj.at("name").get<std::string>();
        v.states = vj.at("states").get<std::vector<std::string>>();
        variables.push_back(std::move(v));
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& ej : j.at("edges")) {
        if (!ej.is_array() || ej.size() != 2) throw ValidationError("edge entries must be [parent, child]");
        edges.emplace_back(ej[0].get<std::string>(), ej[1].get<std::string>());
    }
    std::vector<std::pair<std::string, Table>> tables;
    for (const auto& tj : j.at("tables")) {
        Table t;
        t.parents = tj.at("parents").get<std::vector<std::string>>();
        const auto& rows = tj.at("rows");
        if (rows.empty()) throw ValidationError("table for '" + tj.at("child").get<std::string>() + "' has no rows");
        t.rows.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows[0].size()));
        for (size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != rows[0].size()) {
                throw ValidationError("table for '" + tj.at("child").get<std::string>() +
                                      "' has ragged rows");
            }
            for (size_t c = 0; c < rows[r].size(); ++c) {
                t.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    rows[r][c].get<double>();
            }
        }
        tables.emplace_back(tj.at("child").get<std::string>(), std::move(t));
    }
    return build_network(std::move(variables), edges, std::move(tables));
}

void save_network(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << network_to_json(net).dump(2) << "\n";
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("invalid json in '" + path + "': " + e.what());
    }
    return network_from_json(j);
}

}  // namespace bbn
