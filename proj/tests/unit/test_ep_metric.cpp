#include <doctest.h>

#include "support/build.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "umapstab/ep_metric.hpp"

using namespace umapstab;
using namespace testsupport;

TEST_CASE_TEMPLATE("validate accepts a singleton and flags constructed violations", S, double,
                   Rational) {
    auto ok = metric_from_rows<S>({"a"}, {{"0"}});
    CHECK(validate(ok).empty());

    auto asym = metric_from_rows<S>({"a", "b"}, {{"0", "3"}, {"5", "0"}});
    auto v1 = validate(asym);
    REQUIRE(v1.size() == 1);
    CHECK(v1[0].kind == MetricViolation::Kind::asymmetry);
    CHECK(v1[0].i == 0);
    CHECK(v1[0].j == 1);

    auto tri = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "1", "5"}, {"1", "0", "1"}, {"5", "1", "0"}});
    auto v2 = validate(tri);
    REQUIRE(!v2.empty());
    for (const auto& v : v2) CHECK(v.kind == MetricViolation::Kind::triangle);
}

TEST_CASE_TEMPLATE("validate flags diagonal and negative entries", S, double, Rational) {
    auto diag = metric_from_rows<S>({"a", "b"}, {{"1", "2"}, {"2", "0"}});
    auto v = validate(diag);
    REQUIRE(!v.empty());
    CHECK(v[0].kind == MetricViolation::Kind::nonzero_diagonal);

    auto neg = metric_from_rows<S>({"a", "b"}, {{"0", "-1"}, {"-1", "0"}});
    bool saw_negative = false;
    for (const auto& viol : validate(neg))
        if (viol.kind == MetricViolation::Kind::negative_entry) saw_negative = true;
    CHECK(saw_negative);
}

TEST_CASE_TEMPLATE("empty point sets and shape mismatches are rejected", S, double, Rational) {
    typename EpMetric<S>::DistMatrix empty(0, 0);
    CHECK_THROWS_AS(make_ep_metric<S>({}, empty), StructuralError);
    typename EpMetric<S>::DistMatrix wrong(2, 2);
    CHECK_THROWS_AS(make_ep_metric<S>({"a", "b", "c"}, wrong), StructuralError);
    typename EpMetric<S>::DistMatrix two(2, 2);
    CHECK_THROWS_AS(make_ep_metric<S>({"a", "a"}, two), StructuralError);
}

TEST_CASE_TEMPLATE("wedge of one metric is the identity", S, double, Rational) {
    auto m = line_metric<S>({"a", "b", "c"}, {"0", "1", "3"});
    auto w = wedge_colimit<S>({m});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(w(i, j) == m(i, j));
}

TEST_CASE_TEMPLATE("wedge chains two sparse metrics through their shared point", S, double,
                   Rational) {
    auto d1 = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "1", "inf"}, {"1", "0", "inf"}, {"inf", "inf", "0"}});
    auto d2 = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "inf", "inf"}, {"inf", "0", "1"}, {"inf", "1", "0"}});
    auto w = wedge_colimit<S>({d1, d2});
    CHECK(w(0, 2) == Extended<S>(S(2)));  // a-b-c path
    CHECK(w(0, 1) == Extended<S>(S(1)));
    CHECK(validate(w).empty());

    // pairs with no finite path stay infinite
    auto d3 = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "1", "inf"}, {"1", "0", "inf"}, {"inf", "inf", "0"}});
    auto w2 = wedge_colimit<S>({d3});
    CHECK(!w2(0, 2).is_finite());
}

TEST_CASE_TEMPLATE("wedge errors: empty list and mismatched point sets", S, double, Rational) {
    std::vector<EpMetric<S>> none;
    CHECK_THROWS_AS(wedge_colimit(none), StructuralError);
    auto m1 = line_metric<S>({"a", "b"}, {"0", "1"});
    auto m2 = line_metric<S>({"a", "c"}, {"0", "1"});
    CHECK_THROWS_AS(wedge_colimit<S>({m1, m2}), StructuralError);
}

TEST_CASE_TEMPLATE("wedge matches the exhaustive path oracle on random instances", S, double,
                   Rational) {
    Rng rng(12021);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = pick(rng, 2, 7);
        const int count = pick(rng, 1, 4);
        std::vector<EpMetric<S>> metrics;
        for (int t = 0; t < count; ++t) metrics.push_back(random_ep_metric<S>(rng, n, 50));
        auto w = wedge_colimit(metrics);
        auto oracle = path_oracle_colimit(metrics);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if constexpr (ScalarTraits<S>::exact)
                    CHECK(w(i, j) == oracle(i, j));
                else
                    CHECK(approx_eq(w(i, j), oracle(i, j)));
            }
        // contraction: the wedge never exceeds any input
        for (const auto& m : metrics)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) CHECK(approx_leq(w(i, j), m(i, j)));
    }
}

TEST_CASE_TEMPLATE("wedge is idempotent and order invariant", S, double, Rational) {
    Rng rng(777);
    std::vector<EpMetric<S>> metrics;
    for (int t = 0; t < 3; ++t) metrics.push_back(random_ep_metric<S>(rng, 5, 60));
    auto w = wedge_colimit(metrics);
    auto w_again = wedge_colimit<S>({w});
    std::vector<EpMetric<S>> reversed(metrics.rbegin(), metrics.rend());
    auto w_rev = wedge_colimit(reversed);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            CHECK(approx_eq(w(i, j), w_again(i, j)));
            CHECK(approx_eq(w(i, j), w_rev(i, j)));
        }
}

TEST_CASE_TEMPLATE("global components split by finiteness", S, double, Rational) {
    auto finite = line_metric<S>({"a", "b", "c"}, {"0", "1", "3"});
    CHECK(global_components(finite).blocks.size() == 1);

    auto discrete = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "inf", "inf"}, {"inf", "0", "inf"}, {"inf", "inf", "0"}});
    auto p = global_components(discrete);
    CHECK(p.blocks.size() == 3);

    auto d1 = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "1", "inf"}, {"1", "0", "inf"}, {"inf", "inf", "0"}});
    auto d2 = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "inf", "inf"}, {"inf", "0", "1"}, {"inf", "1", "0"}});
    auto w = wedge_colimit<S>({d1, d2});
    CHECK(global_components(w).blocks.size() == 1);
}

TEST_CASE_TEMPLATE("global component blocks are the finiteness classes on random instances", S,
                   double, Rational) {
    Rng rng(3141);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = random_ep_metric<S>(rng, pick(rng, 1, 9), 40);
        auto p = global_components(m);
        for (int i = 0; i < m.size(); ++i)
            for (int j = 0; j < m.size(); ++j)
                CHECK(p.same_block(i, j) == m(i, j).is_finite());
    }
}

TEST_CASE_TEMPLATE("restriction extracts component metrics", S, double, Rational) {
    auto discrete = metric_from_rows<S>({"a", "b"}, {{"0", "inf"}, {"inf", "0"}});
    auto single = restrict_component(discrete, {0});
    CHECK(single.points == std::vector<std::string>{"a"});
    CHECK(single.size() == 1);

    auto d1 = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "1", "inf"}, {"1", "0", "inf"}, {"inf", "inf", "0"}});
    auto d2 = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "inf", "inf"}, {"inf", "0", "1"}, {"inf", "1", "0"}});
    auto w = wedge_colimit<S>({d1, d2});
    auto whole = restrict_component(w, {0, 1, 2});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(whole(i, j) == w(i, j));
    CHECK(validate(whole).empty());

    // not a block: {a} is not a component of the connected space
    CHECK_THROWS_AS(restrict_component(w, {0}), StructuralError);
}
