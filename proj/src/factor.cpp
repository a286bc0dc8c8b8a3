#include "shipclass/factor.hpp"

#include <algorithm>
#include <cmath>

namespace bbn {

namespace {

std::vector<std::int64_t> strides_of(const std::vector<int>& cards) {
    std::vector<std::int64_t> strides(cards.size());
    std::int64_t s = 1;
    for (size_t i = cards.size(); i-- > 0;) {
        strides[i] = s;
        s *= cards[i];
    }
    return strides;
}

}  // namespace

bool Factor::is_zero() const { return (values == 0.0).all(); }

void Factor::rescale() {
    double m = values.size() ? values.maxCoeff() : 0.0;
    if (m > 0.0 && m != 1.0) {
        values /= m;
        log_scale += std::log(m);
    }
}

Factor table_factor(const Network& net, VarId child) {
    const Table& table = net.table(child);
    std::vector<VarId> family = net.parent_ids(child);
    family.push_back(child);

    Factor f;
    f.scope = family;
    std::sort(f.scope.begin(), f.scope.end());
    f.cards.reserve(f.scope.size());
    std::int64_t size = 1;
    for (VarId v : f.scope) {
        f.cards.push_back(net.variable(v).card());
        size *= net.variable(v).card();
    }
    f.values.resize(size);

    // Walk the factor cells; translate each scope configuration into the
    // table's (row, column) location.
    std::vector<int> state(f.scope.size(), 0);
    const auto& parents = net.parent_ids(child);
    for (std::int64_t cell = 0; cell < size; ++cell) {
        std::int64_t row = 0;
        int col = 0;
        for (size_t i = 0; i < f.scope.size(); ++i) {
            if (f.scope[i] == child) col = state[i];
        }
        for (VarId p : parents) {
            size_t pos = static_cast<size_t>(std::lower_bound(f.scope.begin(), f.scope.end(), p) -
                                             f.scope.begin());
            row = row * net.variable(p).card() + state[pos];
        }
        f.values(cell) = table.rows(row, col);
        for (size_t i = f.scope.size(); i-- > 0;) {
            if (++state[i] < f.cards[i]) break;
            state[i] = 0;
        }
    }
    return f;
}

Factor finding_factor(const Network& net, VarId var, const Eigen::VectorXd& weights) {
    Factor f;
    f.scope = {var};
    f.cards = {net.variable(var).card()};
    f.values = weights.array();
    return f;
}

Factor product(const Factor& a, const Factor& b) {
    Factor out;
    out.scope.reserve(a.scope.size() + b.scope.size());
    std::set_union(a.scope.begin(), a.scope.end(), b.scope.begin(), b.scope.end(),
                   std::back_inserter(out.scope));
    out.log_scale = a.log_scale + b.log_scale;

    std::vector<std::int64_t> stride_a(out.scope.size(), 0), stride_b(out.scope.size(), 0);
    auto sa = strides_of(a.cards), sb = strides_of(b.cards);
    out.cards.resize(out.scope.size());
    std::int64_t size = 1;
    for (size_t i = 0; i < out.scope.size(); ++i) {
        VarId v = out.scope[i];
        auto ia = std::lower_bound(a.scope.begin(), a.scope.end(), v);
        auto ib = std::lower_bound(b.scope.begin(), b.scope.end(), v);
        int card = 0;
        if (ia != a.scope.end() && *ia == v) {
            size_t pos = static_cast<size_t>(ia - a.scope.begin());
            stride_a[i] = sa[pos];
            card = a.cards[pos];
        }
        if (ib != b.scope.end() && *ib == v) {
            size_t pos = static_cast<size_t>(ib - b.scope.begin());
            stride_b[i] = sb[pos];
            card = b.cards[pos];
        }
        out.cards[i] = card;
        size *= card;
    }

    out.values.resize(size);
    std::vector<int> state(out.scope.size(), 0);
    std::int64_t ia = 0, ib = 0;
    for (std::int64_t cell = 0; cell < size; ++cell) {
        out.values(cell) = a.values(ia) * b.values(ib);
        for (size_t i = out.scope.size(); i-- > 0;) {
            if (++state[i] < out.cards[i]) {
                ia += stride_a[i];
                ib += stride_b[i];
                break;
            }
            ia -= stride_a[i] * (out.cards[i] - 1);
            ib -= stride_b[i] * (out.cards[i] - 1);
            state[i] = 0;
        }
    }
    out.rescale();
    return out;
}

namespace {

struct Split {
    Factor reduced;                 // scope without var, values zeroed
    size_t var_pos = 0;
    std::int64_t var_stride = 1;    // stride of var in the original factor
    std::int64_t blocks = 1;        // size of the reduced factor
};

Split split_scope(const Factor& f, VarId var) {
    Split s;
    auto it = std::lower_bound(f.scope.begin(), f.scope.end(), var);
    s.var_pos = static_cast<size_t>(it - f.scope.begin());
    auto strides = strides_of(f.cards);
    s.var_stride = strides[s.var_pos];

    s.reduced.scope = f.scope;
    s.reduced.scope.erase(s.reduced.scope.begin() + static_cast<std::ptrdiff_t>(s.var_pos));
    s.reduced.cards = f.cards;
    s.reduced.cards.erase(s.reduced.cards.begin() + static_cast<std::ptrdiff_t>(s.var_pos));
    s.reduced.log_scale = f.log_scale;
    s.blocks = 1;
    for (int c : s.reduced.cards) s.blocks *= c;
    s.reduced.values = Eigen::ArrayXd::Zero(s.blocks);
    return s;
}

// Maps a cell index of the reduced factor back to the base offset in the
// original factor (var fixed at state 0).
std::int64_t base_offset(const Factor& f, const Split& s, std::int64_t reduced_cell) {
    auto strides = strides_of(f.cards);
    std::int64_t offset = 0;
    std::int64_t rest = reduced_cell;
    for (size_t i = s.reduced.cards.size(); i-- > 0;) {
        int state = static_cast<int>(rest % s.reduced.cards[i]);
        rest /= s.reduced.cards[i];
        size_t orig = i < s.var_pos ? i : i + 1;
        offset += state * strides[orig];
    }
    return offset;
}

}  // namespace

Factor sum_out(const Factor& f, VarId var) {
    Split s = split_scope(f, var);
    int card = f.cards[s.var_pos];
    for (std::int64_t cell = 0; cell < s.blocks; ++cell) {
        std::int64_t base = base_offset(f, s, cell);
        double acc = 0.0;
        for (int k = 0; k < card; ++k) acc += f.values(base + k * s.var_stride);
        s.reduced.values(cell) = acc;
    }
    s.reduced.rescale();
    return s.reduced;
}

Factor max_out(const Factor& f, VarId var, Eigen::ArrayXi* argmax) {
    Split s = split_scope(f, var);
    int card = f.cards[s.var_pos];
    if (argmax) argmax->resize(s.blocks);
    for (std::int64_t cell = 0; cell < s.blocks; ++cell) {
        std::int64_t base = base_offset(f, s, cell);
        double best = f.values(base);
        int best_state = 0;
        for (int k = 1; k < card; ++k) {
            double v = f.values(base + k * s.var_stride);
            if (v > best) {
                best = v;
                best_state = k;
            }
        }
        s.reduced.values(cell) = best;
        if (argmax) (*argmax)(cell) = best_state;
    }
    s.reduced.rescale();
    return s.reduced;
}

}  // namespace bbn
