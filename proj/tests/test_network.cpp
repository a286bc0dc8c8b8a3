#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>

#include "fixtures.hpp"
#include "shipclass/io.hpp"
#include "shipclass/network.hpp"

using bbn::Table;
using bbn::ValidationError;
using bbn::Variable;

namespace {

Table prior_row(std::initializer_list<double> values) {
    Table t;
    t.rows.resize(1, static_cast<Eigen::Index>(values.size()));
    int c = 0;
    for (double v : values) t.rows(0, c++) = v;
    return t;
}

}  // namespace

TEST_CASE("two-feature three-ship fixture builds") {
    bbn::Network net = fixtures::three_ship_net();
    CHECK(net.num_vars() == 3);
    CHECK(net.parent_ids(net.id_of("Bow")) == std::vector<bbn::VarId>{net.id_of("Ship")});
    CHECK(net.parent_ids(net.id_of("Stern")).size() == 1);
    // Column S3 of the stern table is a distribution in its own right.
    CHECK(net.table(net.id_of("Stern")).rows.row(2).sum() == doctest::Approx(1.0));
}

TEST_CASE("single root variable with certain prior") {
    bbn::Network net = bbn::build_network({{"Only", {"yes"}}}, {}, {{"Only", prior_row({1.0})}});
    CHECK(net.num_vars() == 1);
    CHECK(bbn::joint_probability(net, {0}) == doctest::Approx(1.0));
}

TEST_CASE("builder rejects malformed inputs") {
    SUBCASE("duplicate variable names") {
        CHECK_THROWS_WITH_AS(
            bbn::build_network({{"A", {"x"}}, {"A", {"y"}}}, {},
                               {{"A", prior_row({1.0})}, {"A", prior_row({1.0})}}),
            doctest::Contains("duplicate variable name 'A'"), ValidationError);
    }
    SUBCASE("duplicate state labels") {
        CHECK_THROWS_WITH_AS(bbn::build_network({{"A", {"x", "x"}}}, {}, {{"A", prior_row({0.5, 0.5})}}),
                             doctest::Contains("repeats state"), ValidationError);
    }
    SUBCASE("non-normalized row names the child") {
        CHECK_THROWS_WITH_AS(bbn::build_network({{"A", {"x", "y"}}}, {}, {{"A", prior_row({0.6, 0.6})}}),
                             doctest::Contains("table for 'A'"), ValidationError);
    }
    SUBCASE("negative entry") {
        CHECK_THROWS_WITH_AS(bbn::build_network({{"A", {"x", "y"}}}, {}, {{"A", prior_row({1.2, -0.2})}}),
                             doctest::Contains("negative"), ValidationError);
    }
    SUBCASE("table/edge mismatch") {
        Table child;
        child.parents = {"A"};
        child.rows = Eigen::MatrixXd::Constant(2, 2, 0.5);
        CHECK_THROWS_WITH_AS(
            bbn::build_network({{"A", {"x", "y"}}, {"B", {"x", "y"}}}, {},
                               {{"A", prior_row({0.5, 0.5})}, {"B", std::move(child)}}),
            doctest::Contains("do not match the edge list"), ValidationError);
    }
    SUBCASE("cycle detected") {
        Table ta, tb;
        ta.parents = {"B"};
        ta.rows = Eigen::MatrixXd::Constant(2, 2, 0.5);
        tb.parents = {"A"};
        tb.rows = Eigen::MatrixXd::Constant(2, 2, 0.5);
        CHECK_THROWS_WITH_AS(
            bbn::build_network({{"A", {"x", "y"}}, {"B", {"x", "y"}}},
                               {{"B", "A"}, {"A", "B"}},
                               {{"A", std::move(ta)}, {"B", std::move(tb)}}),
            doctest::Contains("cycle"), ValidationError);
    }
    SUBCASE("edge to undeclared variable") {
        CHECK_THROWS_WITH_AS(bbn::build_network({{"A", {"x"}}}, {{"A", "Ghost"}},
                                                {{"A", prior_row({1.0})}}),
                             doctest::Contains("unknown variable 'Ghost'"), ValidationError);
    }
}

TEST_CASE("json round trip is value-identical") {
    bbn::Network net = fixtures::three_ship_net();
    auto j = bbn::network_to_json(net);
    bbn::Network reloaded = bbn::network_from_json(j);
    CHECK(bbn::network_to_json(reloaded) == j);
    CHECK(reloaded.structural_hash() == net.structural_hash());

    SUBCASE("hash is sensitive to parameters") {
        auto j2 = j;
        j2["tables"][0]["rows"][0] = {0.5, 0.25, 0.25};
        bbn::Network other = bbn::network_from_json(j2);
        CHECK(other.structural_hash() != net.structural_hash());
    }
}

TEST_CASE("file save/load round trip") {
    bbn::Network net = fixtures::three_ship_net();
    std::string path = "roundtrip_net_test.json";
    bbn::save_network(net, path);
    bbn::Network loaded = bbn::load_network(path);
    CHECK(bbn::network_to_json(loaded) == bbn::network_to_json(net));
    std::remove(path.c_str());
    CHECK_THROWS_AS(bbn::load_network("missing_net.json"), bbn::ValidationError);
}

TEST_CASE("loading rejects malformed json") {
    CHECK_THROWS_AS(bbn::network_from_json(nlohmann::json::array()), ValidationError);
    nlohmann::json j = {{"variables", {{{"name", "A"}, {"states", {"x", "y"}}}}},
                        {"edges", nlohmann::json::array()},
                        {"tables", {{{"child", "A"}, {"parents", nlohmann::json::array()},
                                     {"rows", {{0.9, 0.2}}}}}}};
    CHECK_THROWS_WITH_AS(bbn::network_from_json(j), doctest::Contains("sums to"), ValidationError);
}
