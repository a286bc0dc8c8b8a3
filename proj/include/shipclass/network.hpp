// network.hpp -- discrete belief network: variables, conditional tables, validated builder.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bbn {

using VarId = int;

/// Input failed structural validation (bad table, cycle, duplicate name, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evidence assigns zero probability to every complete assignment.
struct ZeroMassEvidence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A build was refused because its state space exceeds the configured cap.
struct CapacityError : std::runtime_error {
    CapacityError(const std::string& what, std::int64_t outcomes, std::int64_t cells)
        : std::runtime_error(what), outcome_count(outcomes), cell_count(cells) {}
    std::int64_t outcome_count = 0;
    std::int64_t cell_count = 0;
};

struct Variable {
    std::string name;
    std::vector<std::string> states;

    int card() const { return static_cast<int>(states.size()); }
    int state_index(const std::string& label) const;
};

/// Conditional table for one variable. `rows` has one row per joint parent
/// configuration (mixed radix over `parents`, first parent most significant,
/// last parent fastest) and one column per child state. Root variables have a
/// single prior row.
struct Table {
    std::vector<std::string> parents;
    Eigen::MatrixXd rows;
};

/// Immutable directed network of discrete variables. Variable ids follow
/// declaration order; edges are implied by table parent lists. Safe to share
/// across threads once built.
class Network {
  public:
    Network() = default;

    int num_vars() const { return static_cast<int>(vars_.size()); }
    const Variable& variable(VarId v) const { return vars_[static_cast<size_t>(v)]; }
    const Table& table(VarId v) const { return tables_[static_cast<size_t>(v)]; }
    const std::vector<VarId>& parent_ids(VarId v) const { return parent_ids_[static_cast<size_t>(v)]; }

    bool has_variable(const std::string& name) const { return index_.count(name) > 0; }
    VarId id_of(const std::string& name) const;

    /// CPT row index for `child` given a complete assignment of its parents.
    std::int64_t row_index(VarId child, const std::vector<int>& assignment) const;

    /// FNV-1a hash over names, states, parents and table bits; identifies structure+parameters.
    std::uint64_t structural_hash() const;

    friend Network build_network(std::vector<Variable> variables,
                                 const std::vector<std::pair<std::string, std::string>>& edges,
                                 std::vector<std::pair<std::string, Table>> tables);

  private:
    std::vector<Variable> vars_;
    std::vector<Table> tables_;
    std::vector<std::vector<VarId>> parent_ids_;
    std::unordered_map<std::string, VarId> index_;
};

/// Validates and assembles a network. Tables are keyed by child name; edge
/// list must match the union of table parent links exactly. Throws
/// ValidationError naming the offending element.
Network build_network(std::vector<Variable> variables,
                      const std::vector<std::pair<std::string, std::string>>& edges,
                      std::vector<std::pair<std::string, Table>> tables);

/// Probability of one complete assignment (states indexed by VarId).
double joint_probability(const Network& net, const std::vector<int>& assignment);

constexpr double kRowSumTolerance = 1e-9;

}  // namespace bbn
