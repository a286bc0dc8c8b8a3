#include "shipclass/obs_problem.hpp"

#include <cmath>
#include <sstream>

#include "shipclass/network.hpp"

namespace obsnet {

void ObservationProblem::validate() const {
    if (slots < 1) throw bbn::ValidationError("observation problem needs at least one slot");
    if (false_budget < 0) throw bbn::ValidationError("false budget must be >= 0");
    if (!(grid > 0.0) || grid > 100.0) throw bbn::ValidationError("grid must lie in (0, 100]");
    for (size_t i = 0; i < portholes.size(); ++i) {
        if (portholes[i] <= 0.0 || portholes[i] >= 100.0) {
            throw bbn::ValidationError("porthole location " + std::to_string(portholes[i]) +
                                       " outside (0, 100)");
        }
        if (i > 0 && portholes[i] <= portholes[i - 1]) {
            throw bbn::ValidationError("porthole locations must be strictly increasing (" +
                                       std::to_string(portholes[i - 1]) + " then " +
                                       std::to_string(portholes[i]) + ")");
        }
    }
    for (double h : hatches) {
        if (h <= 0.0 || h >= 100.0) {
            throw bbn::ValidationError("hatch location " + std::to_string(h) + " outside (0, 100)");
        }
    }
    if (bin_locations(grid).empty()) {
        throw bbn::ValidationError("grid " + std::to_string(grid) + " leaves no measurement bins");
    }
}

void ObservationModel::validate() const {
    if (peak <= 0.0 || spill < 0.0) throw bbn::ValidationError("measurement masses must be positive");
    if (std::abs(peak + 2.0 * spill - 1.0) > bbn::kRowSumTolerance) {
        throw bbn::ValidationError("peak + 2*spill must equal 1");
    }
    if (other_stop <= 0.0 || other_stop > 1.0) {
        throw bbn::ValidationError("other_stop must lie in (0, 1]");
    }
    if (exhaustive_cap < 1) throw bbn::ValidationError("cap must be positive");
}

std::vector<double> bin_locations(double grid) {
    std::vector<double> bins;
    for (int k = 1; k * grid < 100.0 - 1e-9; ++k) bins.push_back(k * grid);
    return bins;
}

int nearest_bin(double location, double grid) {
    auto bins = bin_locations(grid);
    int best = 0;
    double best_dist = std::abs(bins[0] - location);
    for (size_t i = 1; i < bins.size(); ++i) {
        double d = std::abs(bins[i] - location);
        if (d < best_dist - 1e-12) {
            best = static_cast<int>(i);
            best_dist = d;
        }
    }
    return best;
}

std::string location_label(double location) {
    if (std::abs(location - std::round(location)) < 1e-9) {
        return std::to_string(static_cast<long long>(std::llround(location)));
    }
    std::ostringstream os;
    os << location;
    return os.str();
}

std::vector<int> match_explanations(double observation, const ObservationProblem& p) {
    if (observation < 0.0 || observation > 100.0) {
        throw bbn::ValidationError("observation location must lie in [0, 100]");
    }
    std::vector<int> matches;
    for (int i = 0; i < p.porthole_count(); ++i) {
        if (std::abs(p.portholes[static_cast<size_t>(i)] - observation) <= p.grid + 1e-9) {
            matches.push_back(i + 1);
        }
    }
    return matches;
}

Eigen::VectorXd porthole_row(const ObservationProblem& p, const ObservationModel& model,
                             int porthole, bool with_not_obs) {
    auto bins = bin_locations(p.grid);
    int bin_count = static_cast<int>(bins.size());
    Eigen::VectorXd row = Eigen::VectorXd::Zero(bin_count + (with_not_obs ? 1 : 0));
    int center = nearest_bin(p.portholes[static_cast<size_t>(porthole - 1)], p.grid);
    row(center) = model.peak;
    double mass = model.peak;
    if (center > 0) {
        row(center - 1) = model.spill;
        mass += model.spill;
    }
    if (center + 1 < bin_count) {
        row(center + 1) = model.spill;
        mass += model.spill;
    }
    row.head(bin_count) /= mass;
    return row;
}

Eigen::VectorXd uniform_bin_row(int bin_count, bool with_not_obs) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(bin_count + (with_not_obs ? 1 : 0));
    row.head(bin_count).setConstant(1.0 / bin_count);
    return row;
}

std::vector<double> other_length_weights(int slots, const ObservationModel& model) {
    double g = std::min(model.other_stop, 1.0 / slots);
    std::vector<double> weights(static_cast<size_t>(slots), g);
    weights.back() = 1.0 - g * (slots - 1);
    return weights;
}

}  // namespace obsnet
