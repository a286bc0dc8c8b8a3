// factor.hpp -- table factors over sorted variable scopes, with a running log scale.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "shipclass/network.hpp"

namespace bbn {

/// A non-negative function over the joint states of `scope` (VarIds,
/// ascending). Values are kept rescaled so the largest entry is 1 and the
/// pulled-out magnitude accumulates in `log_scale`; long products therefore
/// cannot underflow.
struct Factor {
    std::vector<VarId> scope;
    std::vector<int> cards;          // card per scope entry
    Eigen::ArrayXd values;           // mixed radix over scope, first var most significant
    double log_scale = 0.0;

    std::int64_t size() const { return values.size(); }
    bool is_zero() const;

    /// Pull the max out into log_scale (no-op on all-zero factors).
    void rescale();
};

Factor table_factor(const Network& net, VarId child);
Factor finding_factor(const Network& net, VarId var, const Eigen::VectorXd& weights);

Factor product(const Factor& a, const Factor& b);

/// Sum `var` out of the factor.
Factor sum_out(const Factor& f, VarId var);

/// Max `var` out of the factor. If `argmax` is non-null it receives, per
/// remaining configuration, the smallest state index attaining the max.
Factor max_out(const Factor& f, VarId var, Eigen::ArrayXi* argmax = nullptr);

}  // namespace bbn
