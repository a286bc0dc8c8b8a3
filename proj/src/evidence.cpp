#include "shipclass/evidence.hpp"

namespace bbn {

Finding hard_finding(const Network& net, const std::string& variable, const std::string& state) {
    const Variable& var = net.variable(net.id_of(variable));
    Eigen::VectorXd w = Eigen::VectorXd::Zero(var.card());
    w(var.state_index(state)) = 1.0;
    return Finding{variable, std::move(w)};
}

EvidenceSet apply_finding(const Network& net, EvidenceSet evidence, const Finding& f) {
    const Variable& var = net.variable(net.id_of(f.variable));
    if (evidence.contains(f.variable)) {
        throw ValidationError("evidence already contains a finding for '" + f.variable + "'");
    }
    if (f.weights.size() != var.card()) {
        throw ValidationError("finding for '" + f.variable + "' has " +
                              std::to_string(f.weights.size()) + " weights, variable has " +
                              std::to_string(var.card()) + " states");
    }
    if ((f.weights.array() < 0.0).any()) {
        throw ValidationError("finding for '" + f.variable + "' has a negative weight");
    }
    if ((f.weights.array() == 0.0).all()) {
        throw ValidationError("finding for '" + f.variable + "' has all-zero weights");
    }
    evidence.findings_[f.variable] = f.weights;
    return evidence;
}

}  // namespace bbn
