// obs_problem.hpp -- porthole observation problems: measurement bins, the
// porthole/observation matching rule, and the shipped CPT calibration shared
// by both observation-network builders.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace obsnet {

/// A night-observation scenario: porthole/hatch locations as percent of ship
/// length, a number of observation slots, a false-detection budget, and the
/// measurement bin width.
struct ObservationProblem {
    std::vector<double> portholes;  // strictly increasing, within (0, 100)
    std::vector<double> hatches;
    int slots = 3;
    int false_budget = 1;
    double grid = 10.0;

    void validate() const;
    int porthole_count() const { return static_cast<int>(portholes.size()); }
};

/// CPT calibration for the observation networks. Defaults reproduce the
/// shipped reference values documented in the README; all knobs are
/// configurable because only the T-vs-O contrast, not the absolute entries,
/// is fixed by the problem statement.
struct ObservationModel {
    double peak = 0.9;    // measurement mass on the porthole's own bin
    double spill = 0.05;  // mass on each adjacent bin (peak + 2*spill must be 1)
    double other_stop = 0.1;  // per-length stop weight of the catch-all branch (capped at 1/slots)
    std::int64_t exhaustive_cap = 100000;  // refusal threshold, see build_exhaustive_net

    void validate() const;
};

/// Measurement bin centers for a grid width: grid, 2*grid, ... below 100.
std::vector<double> bin_locations(double grid);

/// Index into bin_locations(grid) closest to `location` (ties toward the lower bin).
int nearest_bin(double location, double grid);

std::string location_label(double location);

/// 1-based indices of portholes within +-grid of the observed location.
std::vector<int> match_explanations(double observation, const ObservationProblem& p);

/// Distribution over bins (plus optional trailing NOT-OBS entry, set to 0) for
/// an observation caused by the given porthole: `peak` on its own bin, `spill`
/// on each adjacent bin, renormalized at the edge bins.
Eigen::VectorXd porthole_row(const ObservationProblem& p, const ObservationModel& model,
                             int porthole, bool with_not_obs);

/// Uniform over bins, 0 on NOT-OBS: the row for false detections and for the
/// catch-all branch's active slots.
Eigen::VectorXd uniform_bin_row(int bin_count, bool with_not_obs);

/// Stop-length weights g_1..g_m of the catch-all branch: min(other_stop, 1/m)
/// for lengths below m, remainder on m. g_1 = g_2 keeps one tolerated false
/// detection from shifting the T-vs-O ratio.
std::vector<double> other_length_weights(int slots, const ObservationModel& model);

constexpr const char* kNotObserved = "NOT-OBS";

}  // namespace obsnet
