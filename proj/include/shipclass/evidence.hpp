// evidence.hpp -- likelihood findings (soft evidence) and evidence sets.
#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>

#include "shipclass/network.hpp"

namespace bbn {

/// Per-state non-negative weights for one variable. One-hot weights are hard
/// evidence; any positive scaling of the vector is equivalent.
struct Finding {
    std::string variable;
    Eigen::VectorXd weights;
};

Finding hard_finding(const Network& net, const std::string& variable, const std::string& state);

/// At most one finding per variable. Value type: apply_finding returns a new set.
class EvidenceSet {
  public:
    EvidenceSet() = default;

    bool contains(const std::string& variable) const { return findings_.count(variable) > 0; }
    const std::map<std::string, Eigen::VectorXd>& findings() const { return findings_; }
    bool empty() const { return findings_.empty(); }

    friend EvidenceSet apply_finding(const Network& net, EvidenceSet evidence, const Finding& f);

  private:
    std::map<std::string, Eigen::VectorXd> findings_;
};

/// Returns `evidence` extended with `f`. Rejects duplicate variables, size
/// mismatches, negative weights and all-zero weight vectors.
EvidenceSet apply_finding(const Network& net, EvidenceSet evidence, const Finding& f);

}  // namespace bbn
