#include "shipclass/outcomes.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace obsnet {

std::string outcome_label(const OutcomeSequence& seq) {
    bool wide = false;
    for (int t : seq) {
        if (t > 9) wide = true;
    }
    std::string label;
    for (size_t i = 0; i < seq.size(); ++i) {
        if (wide && i > 0) label += '.';
        label += seq[i] == kFalseDetection ? "W" : std::to_string(seq[i]);
    }
    return label;
}

namespace {

void extend(OutcomeSequence& prefix, int n, int m, int f, int last_porthole, int used_false,
            int target_len, std::vector<OutcomeSequence>& out) {
    if (static_cast<int>(prefix.size()) == target_len) {
        out.push_back(prefix);
        return;
    }
    for (int p = last_porthole + 1; p <= n; ++p) {
        prefix.push_back(p);
        extend(prefix, n, m, f, p, used_false, target_len, out);
        prefix.pop_back();
    }
    if (used_false < f) {
        prefix.push_back(kFalseDetection);
        extend(prefix, n, m, f, last_porthole, used_false + 1, target_len, out);
        prefix.pop_back();
    }
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    unsigned __int128 r = 1;
    k = std::min(k, n - k);
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max())) {
            throw std::overflow_error("outcome count exceeds 64-bit range");
        }
    }
    return static_cast<std::int64_t>(r);
}

void check_args(int n, int m, int f) {
    if (n < 0) throw std::invalid_argument("porthole count must be >= 0");
    if (m < 1) throw std::invalid_argument("slot count must be >= 1");
    if (f < 0) throw std::invalid_argument("false budget must be >= 0");
}

}  // namespace

std::vector<OutcomeSequence> enumerate_outcomes(int n, int m, int f) {
    check_args(n, m, f);
    std::vector<OutcomeSequence> out;
    OutcomeSequence prefix;
    for (int len = 1; len <= m; ++len) {
        extend(prefix, n, m, f, 0, 0, len, out);
    }
    return out;
}

OutcomeCount count_outcomes(int n, int m, int f) {
    check_args(n, m, f);
    OutcomeCount count;
    count.by_false_count.assign(static_cast<size_t>(f) + 1, 0);
    for (int j = 0; j <= f; ++j) {
        std::int64_t& bucket = count.by_false_count[static_cast<size_t>(j)];
        for (int k = std::max(0, 1 - j); k + j <= m && k <= n; ++k) {
            std::int64_t term;
            if (__builtin_mul_overflow(binomial(k + j, j), binomial(n, k), &term) ||
                __builtin_add_overflow(bucket, term, &bucket)) {
                throw std::overflow_error("outcome count exceeds 64-bit range");
            }
        }
        if (__builtin_add_overflow(count.total, bucket, &count.total)) {
            throw std::overflow_error("outcome count exceeds 64-bit range");
        }
    }
    return count;
}

}  // namespace obsnet
