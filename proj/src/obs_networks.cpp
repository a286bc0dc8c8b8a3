#include "shipclass/obs_networks.hpp"

#include <algorithm>
#include <limits>

#include "shipclass/outcomes.hpp"

namespace obsnet {

std::string evidence_node_name(int slot) { return "O" + std::to_string(slot); }
std::string alts_node_name(int slot) { return "O" + std::to_string(slot) + "-Alts"; }

namespace {

// A sequential-decomposition track state: last matched porthole (0 = none yet)
// and false detections consumed. NO and O are handled separately.
struct TrackState {
    int porthole = 0;
    int false_used = 0;

    bool operator<(const TrackState& o) const {
        if (porthole != o.porthole) {
            // Portholes first (ascending), pure false-detection states after.
            if (porthole == 0 || o.porthole == 0) return porthole > o.porthole;
            return porthole < o.porthole;
        }
        return false_used < o.false_used;
    }
    bool operator==(const TrackState& o) const {
        return porthole == o.porthole && false_used == o.false_used;
    }
};

std::string track_label(const TrackState& s) {
    std::string label(static_cast<size_t>(s.false_used), 'W');
    if (s.porthole > 0) label += std::to_string(s.porthole);
    return label;
}

/// Track states reachable after `slot` observations: false_used <= budget and
/// slot - false_used portholes matched in increasing order ending at
/// `porthole` (0 when none).
std::vector<TrackState> reachable_tracks(int portholes, int false_budget, int slot) {
    std::vector<TrackState> states;
    for (int j = 0; j <= std::min(false_budget, slot); ++j) {
        int matched = slot - j;
        if (matched == 0) {
            if (j == slot) states.push_back({0, j});
            continue;
        }
        for (int p = matched; p <= portholes; ++p) states.push_back({p, j});
    }
    std::sort(states.begin(), states.end());
    return states;
}

bool porthole_step(const TrackState& from, const TrackState& to) {
    return to.porthole > from.porthole && to.false_used == from.false_used;
}

bool false_step(const TrackState& from, const TrackState& to, int false_budget) {
    return to.porthole == from.porthole && to.false_used == from.false_used + 1 &&
           to.false_used <= false_budget;
}

struct SdLayout {
    std::vector<std::vector<TrackState>> tracks;        // per slot
    std::vector<std::vector<std::int64_t>> completions; // per slot, aligned with tracks
    std::int64_t total = 0;                             // completions summed over slot-1 states
};

SdLayout sd_layout(const ObservationProblem& p) {
    SdLayout layout;
    int n = p.porthole_count();
    layout.tracks.resize(static_cast<size_t>(p.slots));
    layout.completions.resize(static_cast<size_t>(p.slots));
    for (int t = 1; t <= p.slots; ++t) {
        layout.tracks[static_cast<size_t>(t - 1)] = reachable_tracks(n, p.false_budget, t);
    }
    for (int t = p.slots; t >= 1; --t) {
        auto& tracks = layout.tracks[static_cast<size_t>(t - 1)];
        auto& comps = layout.completions[static_cast<size_t>(t - 1)];
        comps.assign(tracks.size(), 1);  // stopping here is always one completion
        if (t < p.slots) {
            const auto& next = layout.tracks[static_cast<size_t>(t)];
            const auto& next_comps = layout.completions[static_cast<size_t>(t)];
            for (size_t i = 0; i < tracks.size(); ++i) {
                for (size_t k = 0; k < next.size(); ++k) {
                    if (porthole_step(tracks[i], next[k]) ||
                        false_step(tracks[i], next[k], p.false_budget)) {
                        comps[i] += next_comps[k];
                    }
                }
            }
        }
    }
    for (std::int64_t c : layout.completions[0]) layout.total += c;
    return layout;
}

std::vector<std::string> evidence_states(const ObservationProblem& p, int slot) {
    std::vector<std::string> states;
    for (double b : bin_locations(p.grid)) states.push_back(location_label(b));
    if (slot >= 2) states.push_back(kNotObserved);
    return states;
}

Eigen::VectorXd not_obs_row(int bin_count) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(bin_count + 1);
    row(bin_count) = 1.0;
    return row;
}

Eigen::VectorXd uniform_all_row(Eigen::Index states) {
    return Eigen::VectorXd::Constant(states, 1.0 / static_cast<double>(states));
}

}  // namespace

SDStateSpace sd_state_space(int portholes, int false_budget, int slots) {
    if (portholes < 0 || false_budget < 0 || slots < 1) {
        throw bbn::ValidationError("state space needs portholes >= 0, budget >= 0, slots >= 1");
    }
    SDStateSpace space;
    space.slot_labels.resize(static_cast<size_t>(slots));
    for (int t = 1; t <= slots; ++t) {
        auto& labels = space.slot_labels[static_cast<size_t>(t - 1)];
        for (const TrackState& s : reachable_tracks(portholes, false_budget, t)) {
            labels.push_back(track_label(s));
        }
        labels.push_back(kNoState);
        labels.push_back(kOtherState);
    }
    return space;
}

bbn::Network build_exhaustive_net(const ObservationProblem& p, const ObservationModel& model) {
    p.validate();
    model.validate();

    OutcomeCount count = count_outcomes(std::max(p.porthole_count(), 0), p.slots, p.false_budget);
    if (count.total == 0) {
        throw bbn::ValidationError("problem admits no legal explanation (no portholes, no false budget)");
    }
    int bin_count = static_cast<int>(bin_locations(p.grid).size());
    std::int64_t joint = bin_count;
    for (int t = 2; t <= p.slots && joint < (std::int64_t{1} << 52); ++t) {
        joint *= bin_count + 1;
    }
    if (count.total > model.exhaustive_cap / joint) {
        std::int64_t cells = count.total <= (std::int64_t{1} << 62) / joint
                                 ? count.total * joint
                                 : std::numeric_limits<std::int64_t>::max();
        throw bbn::CapacityError(
            "exhaustive build refused: " + std::to_string(count.total) +
                " outcome sequences x " + std::to_string(joint) +
                " evidence configurations exceeds cap " + std::to_string(model.exhaustive_cap),
            count.total, cells);
    }

    auto sequences = enumerate_outcomes(p.porthole_count(), p.slots, p.false_budget);
    auto lengths = other_length_weights(p.slots, model);

    std::vector<bbn::Variable> variables;
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::pair<std::string, bbn::Table>> tables;

    variables.push_back({kRootName, {kTargetState, kOtherState}});
    {
        bbn::Table root;
        root.rows = Eigen::MatrixXd::Constant(1, 2, 0.5);
        tables.emplace_back(kRootName, std::move(root));
    }

    std::vector<std::string> outcome_states;
    outcome_states.reserve(sequences.size() + static_cast<size_t>(p.slots));
    for (const auto& seq : sequences) outcome_states.push_back(outcome_label(seq));
    for (int len = 1; len <= p.slots; ++len) outcome_states.push_back("other-" + std::to_string(len));
    variables.push_back({kOutcomeName, outcome_states});
    edges.emplace_back(kRootName, kOutcomeName);
    {
        bbn::Table outcome;
        outcome.parents = {kRootName};
        outcome.rows = Eigen::MatrixXd::Zero(2, static_cast<Eigen::Index>(outcome_states.size()));
        for (size_t i = 0; i < sequences.size(); ++i) {
            outcome.rows(0, static_cast<Eigen::Index>(i)) = 1.0 / static_cast<double>(count.total);
        }
        for (int len = 1; len <= p.slots; ++len) {
            outcome.rows(1, static_cast<Eigen::Index>(sequences.size()) + len - 1) =
                lengths[static_cast<size_t>(len - 1)];
        }
        tables.emplace_back(kOutcomeName, std::move(outcome));
    }

    for (int t = 1; t <= p.slots; ++t) {
        std::string name = evidence_node_name(t);
        auto states = evidence_states(p, t);
        bool with_not_obs = t >= 2;
        variables.push_back({name, states});
        edges.emplace_back(kOutcomeName, name);

        bbn::Table ev;
        ev.parents = {kOutcomeName};
        ev.rows.resize(static_cast<Eigen::Index>(outcome_states.size()),
                       static_cast<Eigen::Index>(states.size()));
        for (size_t i = 0; i < sequences.size(); ++i) {
            const auto& seq = sequences[i];
            Eigen::VectorXd row;
            if (t <= static_cast<int>(seq.size())) {
                int token = seq[static_cast<size_t>(t - 1)];
                row = token == kFalseDetection ? uniform_bin_row(bin_count, with_not_obs)
                                               : porthole_row(p, model, token, with_not_obs);
            } else {
                row = not_obs_row(bin_count);
            }
            ev.rows.row(static_cast<Eigen::Index>(i)) = row.transpose();
        }
        for (int len = 1; len <= p.slots; ++len) {
            Eigen::VectorXd row = t <= len ? uniform_bin_row(bin_count, with_not_obs)
                                           : not_obs_row(bin_count);
            ev.rows.row(static_cast<Eigen::Index>(sequences.size()) + len - 1) = row.transpose();
        }
        tables.emplace_back(name, std::move(ev));
    }

    return bbn::build_network(std::move(variables), edges, std::move(tables));
}

bbn::Network build_sd_net(const ObservationProblem& p, const ObservationModel& model) {
    p.validate();
    model.validate();

    OutcomeCount count = count_outcomes(std::max(p.porthole_count(), 0), p.slots, p.false_budget);
    if (count.total == 0) {
        throw bbn::ValidationError("problem admits no legal explanation (no portholes, no false budget)");
    }
    SdLayout layout = sd_layout(p);
    if (layout.total != count.total) {
        throw bbn::ValidationError("internal: chain completions disagree with the outcome count");
    }
    std::int64_t widest = 0;
    for (const auto& tracks : layout.tracks) {
        widest = std::max<std::int64_t>(widest, static_cast<std::int64_t>(tracks.size()) + 2);
    }
    if (widest > model.exhaustive_cap) {
        throw bbn::CapacityError("chain build refused: a slot node needs " + std::to_string(widest) +
                                     " states, cap is " + std::to_string(model.exhaustive_cap),
                                 count.total, widest);
    }

    auto lengths = other_length_weights(p.slots, model);
    // Survival mass of the catch-all branch from each slot on.
    std::vector<double> survival(static_cast<size_t>(p.slots) + 1, 0.0);
    for (int t = p.slots; t >= 1; --t) {
        survival[static_cast<size_t>(t - 1)] =
            survival[static_cast<size_t>(t)] + lengths[static_cast<size_t>(t - 1)];
    }

    int bin_count = static_cast<int>(bin_locations(p.grid).size());
    std::vector<bbn::Variable> variables;
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::pair<std::string, bbn::Table>> tables;

    variables.push_back({kRootName, {kTargetState, kOtherState}});
    {
        bbn::Table root;
        root.rows = Eigen::MatrixXd::Constant(1, 2, 0.5);
        tables.emplace_back(kRootName, std::move(root));
    }

    SDStateSpace space = sd_state_space(p.porthole_count(), p.false_budget, p.slots);
    for (int t = 1; t <= p.slots; ++t) {
        const auto& labels = space.slot_labels[static_cast<size_t>(t - 1)];
        const auto& tracks = layout.tracks[static_cast<size_t>(t - 1)];
        const auto& comps = layout.completions[static_cast<size_t>(t - 1)];
        const Eigen::Index card = static_cast<Eigen::Index>(labels.size());
        const Eigen::Index no_idx = card - 2;
        const Eigen::Index other_idx = card - 1;
        variables.push_back({alts_node_name(t), labels});
        edges.emplace_back(kRootName, alts_node_name(t));

        bbn::Table alts;
        if (t == 1) {
            alts.parents = {kRootName};
            alts.rows = Eigen::MatrixXd::Zero(2, card);
            for (size_t i = 0; i < tracks.size(); ++i) {
                alts.rows(0, static_cast<Eigen::Index>(i)) =
                    static_cast<double>(comps[i]) / static_cast<double>(layout.total);
            }
            alts.rows(1, other_idx) = 1.0;
        } else {
            edges.emplace_back(alts_node_name(t - 1), alts_node_name(t));
            alts.parents = {kRootName, alts_node_name(t - 1)};
            const auto& prev_tracks = layout.tracks[static_cast<size_t>(t - 2)];
            const auto& prev_comps = layout.completions[static_cast<size_t>(t - 2)];
            const Eigen::Index prev_card =
                static_cast<Eigen::Index>(space.slot_labels[static_cast<size_t>(t - 2)].size());
            alts.rows = Eigen::MatrixXd::Zero(2 * prev_card, card);
            for (Eigen::Index prev = 0; prev < prev_card; ++prev) {
                // Row under T.
                Eigen::Index row_t = prev;
                if (prev < static_cast<Eigen::Index>(prev_tracks.size())) {
                    const TrackState& from = prev_tracks[static_cast<size_t>(prev)];
                    double denom = static_cast<double>(prev_comps[static_cast<size_t>(prev)]);
                    for (size_t k = 0; k < tracks.size(); ++k) {
                        if (porthole_step(from, tracks[k]) ||
                            false_step(from, tracks[k], p.false_budget)) {
                            alts.rows(row_t, static_cast<Eigen::Index>(k)) =
                                static_cast<double>(comps[k]) / denom;
                        }
                    }
                    alts.rows(row_t, no_idx) = 1.0 / denom;
                } else {
                    alts.rows(row_t, no_idx) = 1.0;  // NO and O stay stopped under T
                }
                // Row under O: the catch-all branch ("O" is last) continues or stops.
                Eigen::Index row_o = prev_card + prev;
                if (prev == prev_card - 1) {
                    double s_prev = survival[static_cast<size_t>(t - 2)];
                    alts.rows(row_o, other_idx) = survival[static_cast<size_t>(t - 1)] / s_prev;
                    alts.rows(row_o, no_idx) = lengths[static_cast<size_t>(t - 2)] / s_prev;
                } else {
                    alts.rows(row_o, no_idx) = 1.0;
                }
            }
        }
        tables.emplace_back(alts_node_name(t), std::move(alts));
    }

    for (int t = 1; t <= p.slots; ++t) {
        std::string name = evidence_node_name(t);
        auto states = evidence_states(p, t);
        bool with_not_obs = t >= 2;
        const auto& tracks = layout.tracks[static_cast<size_t>(t - 1)];
        const Eigen::Index card =
            static_cast<Eigen::Index>(space.slot_labels[static_cast<size_t>(t - 1)].size());
        const Eigen::Index no_idx = card - 2;
        const Eigen::Index other_idx = card - 1;
        variables.push_back({name, states});
        edges.emplace_back(alts_node_name(t), name);

        bbn::Table ev;
        if (t == 1) {
            ev.parents = {alts_node_name(1)};
            ev.rows.resize(card, static_cast<Eigen::Index>(states.size()));
            for (Eigen::Index cur = 0; cur < card; ++cur) {
                Eigen::VectorXd row;
                if (cur < static_cast<Eigen::Index>(tracks.size())) {
                    const TrackState& s = tracks[static_cast<size_t>(cur)];
                    row = s.porthole > 0 ? porthole_row(p, model, s.porthole, with_not_obs)
                                         : uniform_bin_row(bin_count, with_not_obs);
                } else if (cur == other_idx) {
                    row = uniform_bin_row(bin_count, with_not_obs);
                } else {
                    row = uniform_all_row(static_cast<Eigen::Index>(states.size()));
                }
                ev.rows.row(cur) = row.transpose();
            }
        } else {
            edges.emplace_back(alts_node_name(t - 1), name);
            ev.parents = {alts_node_name(t - 1), alts_node_name(t)};
            const auto& prev_tracks = layout.tracks[static_cast<size_t>(t - 2)];
            const Eigen::Index prev_card =
                static_cast<Eigen::Index>(space.slot_labels[static_cast<size_t>(t - 2)].size());
            ev.rows.resize(prev_card * card, static_cast<Eigen::Index>(states.size()));
            for (Eigen::Index prev = 0; prev < prev_card; ++prev) {
                for (Eigen::Index cur = 0; cur < card; ++cur) {
                    Eigen::Index r = prev * card + cur;
                    Eigen::VectorXd row;
                    bool prev_is_track = prev < static_cast<Eigen::Index>(prev_tracks.size());
                    bool cur_is_track = cur < static_cast<Eigen::Index>(tracks.size());
                    if (cur == no_idx) {
                        row = not_obs_row(bin_count);
                    } else if (cur == other_idx) {
                        row = uniform_bin_row(bin_count, with_not_obs);
                    } else if (cur_is_track && prev_is_track) {
                        const TrackState& from = prev_tracks[static_cast<size_t>(prev)];
                        const TrackState& to = tracks[static_cast<size_t>(cur)];
                        if (porthole_step(from, to)) {
                            row = porthole_row(p, model, to.porthole, with_not_obs);
                        } else if (false_step(from, to, p.false_budget)) {
                            row = uniform_bin_row(bin_count, with_not_obs);
                        } else {
                            row = uniform_all_row(static_cast<Eigen::Index>(states.size()));
                        }
                    } else {
                        row = uniform_all_row(static_cast<Eigen::Index>(states.size()));
                    }
                    ev.rows.row(r) = row.transpose();
                }
            }
        }
        tables.emplace_back(name, std::move(ev));
    }

    return bbn::build_network(std::move(variables), edges, std::move(tables));
}

}  // namespace obsnet
