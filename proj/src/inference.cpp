#include "shipclass/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shipclass/factor.hpp"

namespace bbn {

namespace {

std::vector<Factor> initial_factors(const Network& net, const EvidenceSet& evidence) {
    std::vector<Factor> factors;
    factors.reserve(static_cast<size_t>(net.num_vars()) + evidence.findings().size());
    for (VarId v = 0; v < net.num_vars(); ++v) factors.push_back(table_factor(net, v));
    for (const auto& [name, weights] : evidence.findings()) {
        factors.push_back(finding_factor(net, net.id_of(name), weights));
    }
    return factors;
}

bool mentions(const Factor& f, VarId v) {
    return std::binary_search(f.scope.begin(), f.scope.end(), v);
}

/// Pulls every factor mentioning `v` out of `factors` and returns their product.
Factor collect(std::vector<Factor>& factors, VarId v) {
    Factor acc;
    bool first = true;
    for (size_t i = 0; i < factors.size();) {
        if (mentions(factors[i], v)) {
            acc = first ? std::move(factors[i]) : product(acc, factors[i]);
            first = false;
            factors[i] = std::move(factors.back());
            factors.pop_back();
        } else {
            ++i;
        }
    }
    return acc;
}

struct Tail {
    Eigen::ArrayXd values;  // over the query variable (empty scopes folded in)
    double log_scale = 0.0;
};

/// Eliminates everything but `query`; `use_max` picks max- vs sum-elimination.
Tail eliminate_to(const Network& net, const EvidenceSet& evidence, VarId query, bool use_max) {
    std::vector<Factor> factors = initial_factors(net, evidence);
    for (VarId v = net.num_vars() - 1; v >= 0; --v) {
        if (v == query) continue;
        Factor f = collect(factors, v);
        factors.push_back(use_max ? max_out(f, v) : sum_out(f, v));
    }
    Tail tail;
    tail.values = Eigen::ArrayXd::Ones(net.variable(query).card());
    for (const Factor& f : factors) {
        tail.log_scale += f.log_scale;
        if (f.scope.empty()) {
            tail.values *= f.values(0);
        } else {
            tail.values *= f.values;
        }
    }
    return tail;
}

}  // namespace

Eigen::VectorXd posterior_bel(const Network& net, const EvidenceSet& evidence,
                              const std::string& query) {
    Tail tail = eliminate_to(net, evidence, net.id_of(query), /*use_max=*/false);
    double total = tail.values.sum();
    if (total <= 0.0) {
        throw ZeroMassEvidence("evidence contradicts the network: posterior mass is zero");
    }
    return (tail.values / total).matrix();
}

BelStar bel_star(const Network& net, const EvidenceSet& evidence, const std::string& query) {
    Tail tail = eliminate_to(net, evidence, net.id_of(query), /*use_max=*/true);
    double total = tail.values.sum();
    if (total <= 0.0) {
        throw ZeroMassEvidence("evidence contradicts the network: best-explanation mass is zero");
    }
    BelStar result;
    result.dist = (tail.values / total).matrix();
    result.raw_log = (tail.values.log() + tail.log_scale).matrix();
    return result;
}

MpeResult mpe_assignment(const Network& net, const EvidenceSet& evidence) {
    struct Record {
        VarId var;
        std::vector<VarId> scope;
        std::vector<int> cards;
        Eigen::ArrayXi argmax;
    };

    std::vector<Factor> factors = initial_factors(net, evidence);
    std::vector<Record> records;
    records.reserve(static_cast<size_t>(net.num_vars()));
    for (VarId v = net.num_vars() - 1; v >= 0; --v) {
        Factor f = collect(factors, v);
        Record rec;
        rec.var = v;
        Factor reduced = max_out(f, v, &rec.argmax);
        rec.scope = reduced.scope;
        rec.cards = reduced.cards;
        records.push_back(std::move(rec));
        factors.push_back(std::move(reduced));
    }

    double log_total = 0.0;
    for (const Factor& f : factors) {
        double v = f.values(0);
        if (v <= 0.0) {
            throw ZeroMassEvidence("evidence contradicts the network: no positive-probability assignment");
        }
        log_total += std::log(v) + f.log_scale;
    }

    MpeResult result;
    result.assignment.assign(static_cast<size_t>(net.num_vars()), 0);
    // Records were pushed in elimination order (last id first); replay them in
    // declaration order so every scope variable is already decided.
    for (auto it = records.rbegin(); it != records.rend(); ++it) {
        std::int64_t cell = 0;
        for (size_t i = 0; i < it->scope.size(); ++i) {
            cell = cell * it->cards[i] + result.assignment[static_cast<size_t>(it->scope[i])];
        }
        result.assignment[static_cast<size_t>(it->var)] = it->argmax(cell);
    }
    result.log_probability = log_total;
    result.probability = std::exp(log_total);
    return result;
}

}  // namespace bbn
