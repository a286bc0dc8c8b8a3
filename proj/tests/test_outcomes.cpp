#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "shipclass/outcomes.hpp"

using obsnet::count_outcomes;
using obsnet::enumerate_outcomes;
using obsnet::outcome_label;

namespace {

std::set<std::string> label_set(int n, int m, int f) {
    std::set<std::string> labels;
    for (const auto& seq : enumerate_outcomes(n, m, f)) labels.insert(outcome_label(seq));
    return labels;
}

}  // namespace

TEST_CASE("three portholes, three slots, one false detection: the 23 sequences") {
    std::set<std::string> expected = {
        "1",  "2",  "3",  "W",
        "12", "13", "23", "1W", "2W", "3W", "W1", "W2", "W3",
        "123", "12W", "13W", "23W", "W12", "W13", "W23", "1W2", "1W3", "2W3"};
    CHECK(label_set(3, 3, 1) == expected);
    CHECK(count_outcomes(3, 3, 1).total == 23);
}

TEST_CASE("no false alarms gives increasing subsequences only") {
    auto outcomes = enumerate_outcomes(2, 2, 0);
    REQUIRE(outcomes.size() == 3);
    CHECK(outcome_label(outcomes[0]) == "1");
    CHECK(outcome_label(outcomes[1]) == "2");
    CHECK(outcome_label(outcomes[2]) == "12");
}

TEST_CASE("six observations with two false detections") {
    auto outcomes = enumerate_outcomes(6, 6, 2);
    CHECK(outcomes.size() == 846);
    obsnet::OutcomeCount count = count_outcomes(6, 6, 2);
    CHECK(count.total == 846);
    REQUIRE(count.by_false_count.size() == 3);
    CHECK(count.by_false_count[0] == 63);
    CHECK(count.by_false_count[1] == 249);
    CHECK(count.by_false_count[2] == 534);
}

TEST_CASE("closed form agrees with enumeration over the small grid") {
    for (int n = 0; n <= 7; ++n) {
        for (int m = 1; m <= 7; ++m) {
            for (int f = 0; f <= 3; ++f) {
                auto enumerated = enumerate_outcomes(n, m, f);
                obsnet::OutcomeCount count = count_outcomes(n, m, f);
                CHECK(count.total == static_cast<std::int64_t>(enumerated.size()));
                std::vector<std::int64_t> by_false(static_cast<size_t>(f) + 1, 0);
                for (const auto& seq : enumerated) {
                    by_false[static_cast<size_t>(std::count(seq.begin(), seq.end(),
                                                            obsnet::kFalseDetection))]++;
                }
                CHECK(count.by_false_count == by_false);
            }
        }
    }
}

TEST_CASE("full-length no-false case counts subsets") {
    CHECK(count_outcomes(3, 3, 0).total == 7);  // 2^3 - 1
    CHECK(count_outcomes(5, 5, 0).total == 31);
    CHECK(count_outcomes(1, 1, 0).total == 1);
}

TEST_CASE("enumeration order is length-major then lexicographic") {
    auto outcomes = enumerate_outcomes(3, 3, 1);
    for (size_t i = 1; i < outcomes.size(); ++i) {
        const auto& a = outcomes[i - 1];
        const auto& b = outcomes[i];
        if (a.size() != b.size()) {
            CHECK(a.size() < b.size());
            continue;
        }
        // Porthole tokens order before W within a position.
        auto key = [](int token) { return token == obsnet::kFalseDetection ? 1 << 20 : token; };
        bool less = false;
        for (size_t k = 0; k < a.size(); ++k) {
            if (key(a[k]) != key(b[k])) {
                less = key(a[k]) < key(b[k]);
                break;
            }
        }
        CHECK(less);
    }
}

TEST_CASE("invalid arguments are rejected") {
    CHECK_THROWS_AS(enumerate_outcomes(-1, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_outcomes(3, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(count_outcomes(3, 3, -1), std::invalid_argument);
}

TEST_CASE("counts overflow loudly instead of wrapping") {
    CHECK(count_outcomes(60, 60, 0).total == (std::int64_t{1} << 60) - 1);
    CHECK_THROWS_AS(count_outcomes(80, 80, 2), std::overflow_error);
}

TEST_CASE("labels for double-digit portholes stay unambiguous") {
    auto outcomes = enumerate_outcomes(11, 2, 1);
    std::set<std::string> labels;
    for (const auto& seq : outcomes) labels.insert(outcome_label(seq));
    CHECK(labels.size() == outcomes.size());
}
