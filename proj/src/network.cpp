#include "shipclass/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bbn {

int Variable::state_index(const std::string& label) const {
    for (size_t i = 0; i < states.size(); ++i) {
        if (states[i] == label) return static_cast<int>(i);
    }
    throw ValidationError("variable '" + name + "' has no state '" + label + "'");
}

VarId Network::id_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ValidationError("unknown variable '" + name + "'");
    return it->second;
}

std::int64_t Network::row_index(VarId child, const std::vector<int>& assignment) const {
    std::int64_t idx = 0;
    for (VarId p : parent_ids_[static_cast<size_t>(child)]) {
        idx = idx * vars_[static_cast<size_t>(p)].card() + assignment[static_cast<size_t>(p)];
    }
    return idx;
}

std::uint64_t Network::structural_hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;
        }
    };
    auto mix_str = [&](const std::string& s) { mix(s.data(), s.size() + 1); };
    for (const auto& v : vars_) {
        mix_str(v.name);
        for (const auto& s : v.states) mix_str(s);
    }
    for (const auto& t : tables_) {
        for (const auto& p : t.parents) mix_str(p);
        mix(t.rows.data(), sizeof(double) * static_cast<size_t>(t.rows.size()));
    }
    return h;
}

namespace {

void check_rows(const Variable& child, const Table& table, std::int64_t expected_rows) {
    if (table.rows.rows() != expected_rows || table.rows.cols() != child.card()) {
        throw ValidationError("table for '" + child.name + "' has shape " +
                              std::to_string(table.rows.rows()) + "x" +
                              std::to_string(table.rows.cols()) + ", expected " +
                              std::to_string(expected_rows) + "x" + std::to_string(child.card()));
    }
    for (Eigen::Index r = 0; r < table.rows.rows(); ++r) {
        if ((table.rows.row(r).array() < 0.0).any()) {
            throw ValidationError("table for '" + child.name + "' row " + std::to_string(r) +
                                  " has a negative entry");
        }
        double sum = table.rows.row(r).sum();
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            throw ValidationError("table for '" + child.name + "' row " + std::to_string(r) +
                                  " sums to " + std::to_string(sum) + ", expected 1");
        }
    }
}

}  // namespace

Network build_network(std::vector<Variable> variables,
                      const std::vector<std::pair<std::string, std::string>>& edges,
                      std::vector<std::pair<std::string, Table>> tables) {
    Network net;
    for (auto& v : variables) {
        if (v.states.empty()) throw ValidationError("variable '" + v.name + "' has no states");
        std::set<std::string> seen;
        for (const auto& s : v.states) {
            if (!seen.insert(s).second) {
                throw ValidationError("variable '" + v.name + "' repeats state '" + s + "'");
            }
        }
        if (net.index_.count(v.name)) throw ValidationError("duplicate variable name '" + v.name + "'");
        net.index_[v.name] = static_cast<VarId>(net.vars_.size());
        net.vars_.push_back(std::move(v));
    }

    const size_t n = net.vars_.size();
    if (tables.size() != n) {
        throw ValidationError("expected one table per variable (" + std::to_string(n) + ", got " +
                              std::to_string(tables.size()) + ")");
    }

    std::vector<std::set<std::string>> edge_parents(n);
    for (const auto& [parent, child] : edges) {
        VarId c = net.id_of(child);
        net.id_of(parent);
        if (!edge_parents[static_cast<size_t>(c)].insert(parent).second) {
            throw ValidationError("duplicate edge " + parent + " -> " + child);
        }
    }

    net.tables_.resize(n);
    net.parent_ids_.resize(n);
    std::vector<bool> have_table(n, false);
    for (auto& [child_name, table] : tables) {
        VarId c = net.id_of(child_name);
        if (have_table[static_cast<size_t>(c)]) {
            throw ValidationError("duplicate table for '" + child_name + "'");
        }
        have_table[static_cast<size_t>(c)] = true;

        std::set<std::string> table_parents(table.parents.begin(), table.parents.end());
        if (table_parents.size() != table.parents.size()) {
            throw ValidationError("table for '" + child_name + "' repeats a parent");
        }
        if (table_parents != edge_parents[static_cast<size_t>(c)]) {
            throw ValidationError("table parents for '" + child_name + "' do not match the edge list");
        }

        std::int64_t rows = 1;
        for (const auto& p : table.parents) {
            net.parent_ids_[static_cast<size_t>(c)].push_back(net.id_of(p));
            rows *= net.vars_[static_cast<size_t>(net.id_of(p))].card();
        }
        check_rows(net.vars_[static_cast<size_t>(c)], table, rows);
        net.tables_[static_cast<size_t>(c)] = std::move(table);
    }

    // Cycle check: Kahn's algorithm over parent links.
    std::vector<int> pending(n, 0);
    std::vector<std::vector<VarId>> children(n);
    for (size_t c = 0; c < n; ++c) {
        pending[c] = static_cast<int>(net.parent_ids_[c].size());
        for (VarId p : net.parent_ids_[c]) children[static_cast<size_t>(p)].push_back(static_cast<VarId>(c));
    }
    std::vector<VarId> queue;
    for (size_t v = 0; v < n; ++v) {
        if (pending[v] == 0) queue.push_back(static_cast<VarId>(v));
    }
    size_t done = 0;
    while (done < queue.size()) {
        VarId v = queue[done++];
        for (VarId c : children[static_cast<size_t>(v)]) {
            if (--pending[static_cast<size_t>(c)] == 0) queue.push_back(c);
        }
    }
    if (done != n) {
        for (size_t v = 0; v < n; ++v) {
            if (pending[v] > 0) {
                throw ValidationError("cycle detected through variable '" + net.vars_[v].name + "'");
            }
        }
    }
    return net;
}

double joint_probability(const Network& net, const std::vector<int>& assignment) {
    if (assignment.size() != static_cast<size_t>(net.num_vars())) {
        throw ValidationError("assignment covers " + std::to_string(assignment.size()) +
                              " variables, network has " + std::to_string(net.num_vars()));
    }
    double log_p = 0.0;
    for (VarId v = 0; v < net.num_vars(); ++v) {
        double entry = net.table(v).rows(net.row_index(v, assignment), assignment[static_cast<size_t>(v)]);
        if (entry == 0.0) return 0.0;
        log_p += std::log(entry);
    }
    return std::exp(log_p);
}

}  // namespace bbn
