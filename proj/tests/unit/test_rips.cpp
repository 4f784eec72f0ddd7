#include <doctest.h>

#include "support/build.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "umapstab/rips.hpp"

using namespace umapstab;
using namespace testsupport;

namespace {

template <typename S>
NeighborhoodSystem<S> full_neighborhood_system(int n) {
    auto ids = alpha_ids(n);
    NeighborhoodSystem<S> ns;
    ns.points = ids;
    ns.neighbors.resize(n);
    ns.weights.assign(n, {});
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (y != x) {
                ns.neighbors[x].push_back(y);
                ns.weights[x].push_back(S(1));
            }
    return ns;
}

/// Replays a merge list from the discrete partition and compares against the
/// stored partition at every critical value.
template <typename S>
bool replay_matches(const Filtration<S>& f, int n) {
    DisjointSets ds(n);
    std::size_t at = 0;
    for (std::size_t t = 0; t < f.criticals.size(); ++t) {
        while (at < f.merges.size() && approx_leq(f.merges[at].scale, f.criticals[t])) {
            ds.unite(f.merges[at].absorbed, f.merges[at].into);
            ++at;
        }
        if (Partition::from_disjoint_sets(ds) != f.partitions[t]) return false;
    }
    return at == f.merges.size();
}

}  // namespace

TEST_CASE_TEMPLATE("critical values: discrete, line, equilateral", S, double, Rational) {
    auto discrete = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "inf", "inf"}, {"inf", "0", "inf"}, {"inf", "inf", "0"}});
    CHECK(critical_values(discrete).empty());

    auto line = line_metric<S>({"a", "b", "c"}, {"0", "1", "3"});
    CHECK(critical_values(line) == std::vector<S>{S(1), S(2), S(3)});

    auto equal = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "1", "1"}, {"1", "0", "1"}, {"1", "1", "0"}});
    CHECK(critical_values(equal) == std::vector<S>{S(1)});
}

TEST_CASE_TEMPLATE("components at a scale", S, double, Rational) {
    auto line = line_metric<S>({"a", "b", "c"}, {"0", "1", "3"});

    auto below = components_at(line, ScalarTraits<S>::ratio(1, 2));
    CHECK(below.blocks.size() == 3);

    auto at_one = components_at(line, S(1));
    CHECK(at_one.blocks == std::vector<std::vector<int>>{{0, 1}, {2}});

    auto everything = components_at(line, Extended<S>::infinity());
    CHECK(everything.blocks.size() == 1);
}

TEST_CASE_TEMPLATE("components match breadth-first search on random ep-metrics", S, double,
                   Rational) {
    Rng rng(8080);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = random_ep_metric<S>(rng, pick(rng, 2, 10), 50);
        auto scales = critical_values(m);
        scales.push_back(S(0));
        for (const S& s : scales) {
            CHECK(components_at(m, s) == bfs_components(m, Extended<S>(s)));
        }
        CHECK(components_at(m, Extended<S>::infinity()) ==
              bfs_components(m, Extended<S>::infinity()));
    }
}

TEST_CASE_TEMPLATE("partitions coarsen monotonically in the scale", S, double, Rational) {
    Rng rng(515);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = random_ep_metric<S>(rng, pick(rng, 2, 9), 60);
        auto scales = critical_values(m);
        for (std::size_t t = 1; t < scales.size(); ++t)
            CHECK(refines(components_at(m, scales[t - 1]), components_at(m, scales[t])));
        if (!scales.empty())
            CHECK(components_at(m, scales.back()) == global_components(m));
    }
}

TEST_CASE_TEMPLATE("merge tree of the 0,1,3 line", S, double, Rational) {
    auto line = line_metric<S>({"a", "b", "c"}, {"0", "1", "3"});
    auto f = merge_tree(line);
    REQUIRE(f.merges.size() == 2);
    CHECK(f.merges[0].scale == S(1));
    CHECK(f.merges[0].absorbed == 1);
    CHECK(f.merges[0].into == 0);
    CHECK(f.merges[1].scale == S(2));
    CHECK(f.merges[1].absorbed == 2);
    CHECK(f.merges[1].into == 0);
    CHECK(f.roots == std::vector<int>{0});
    CHECK(replay_matches(f, 3));
}

TEST_CASE_TEMPLATE("merge tree edge cases: single point and split blocks", S, double, Rational) {
    auto one = metric_from_rows<S>({"a"}, {{"0"}});
    auto f1 = merge_tree(one);
    CHECK(f1.merges.empty());
    CHECK(f1.roots == std::vector<int>{0});

    auto split = metric_from_rows<S>(
        {"a", "b", "c", "d"},
        {{"0", "1", "inf", "inf"}, {"1", "0", "inf", "inf"}, {"inf", "inf", "0", "2"},
         {"inf", "inf", "2", "0"}});
    auto f2 = merge_tree(split);
    CHECK(f2.merges.size() == 2);
    CHECK(f2.roots == std::vector<int>{0, 2});  // two dendrogram roots
}

TEST_CASE_TEMPLATE("merge replay reconstructs every stored partition", S, double, Rational) {
    Rng rng(626262);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = random_ep_metric<S>(rng, pick(rng, 1, 10), 55);
        auto f = merge_tree(m);
        CHECK(replay_matches(f, m.size()));
        for (std::size_t t = 0; t < f.criticals.size(); ++t)
            CHECK(f.partitions[t] == components_at(m, f.criticals[t]));
    }
}

TEST_CASE_TEMPLATE("wedge components across one star", S, double, Rational) {
    NeighborhoodSystem<S> ns;
    ns.points = {"a", "b", "c"};
    ns.neighbors = {{1, 2}, {}, {}};
    ns.weights = {{S(1), S(2)}, {}, {}};

    auto tiny = wedge_components_at(ns, ScalarTraits<S>::ratio(1, 2));
    CHECK(tiny.blocks.size() == 3);

    auto full = wedge_components_at(ns, S(3));
    CHECK(full.blocks.size() == 1);
}

TEST_CASE_TEMPLATE("wedge components at infinity follow neighbourhood-pair chains", S, double,
                   Rational) {
    // chain a -> b -> c through single-neighbor lists
    NeighborhoodSystem<S> ns;
    ns.points = {"a", "b", "c"};
    ns.neighbors = {{1}, {2}, {}};
    ns.weights = {{S(1)}, {S(5)}, {}};
    auto p = wedge_components_at(ns, Extended<S>::infinity());
    CHECK(p.blocks.size() == 1);
    CHECK(p == neighbor_pair_components(ns));
}

TEST_CASE_TEMPLATE("excision holds for single stars and random systems", S, double, Rational) {
    NeighborhoodSystem<S> single;
    single.points = {"a", "b", "c"};
    single.neighbors = {{1, 2}, {}, {}};
    single.weights = {{S(1), S(2)}, {}, {}};
    CHECK(excision_check(single).ok);

    Rng rng(314159);
    for (int trial = 0; trial < 25; ++trial) {
        auto scheme = std::vector<WeightScheme>{WeightScheme::ambient, WeightScheme::scaled,
                                                WeightScheme::shifted}[trial % 3];
        auto ns = random_system<S>(rng, 10, 4, scheme);
        auto report = excision_check(ns);
        CHECK(report.ok);
        CHECK(report.diffs.empty());
    }
}

TEST_CASE("excision survives adversarial near-tie weights in exact mode") {
    using S = Rational;
    // weights that differ by 1e-12, far below the float tolerance
    NeighborhoodSystem<S> ns;
    ns.points = {"a", "b", "c", "d"};
    ns.neighbors = {{1}, {2}, {3}, {}};
    S base = ScalarTraits<S>::parse("1");
    S eps = ScalarTraits<S>::parse("1e-12");
    ns.weights = {{base}, {S(base + eps)}, {S(base + eps + eps)}, {}};
    auto report = excision_check(ns);
    CHECK(report.ok);
    CHECK(report.scales_checked.size() >= 5);  // near-ties stay distinct scales
}

TEST_CASE_TEMPLATE("clique complexes at assorted scales", S, double, Rational) {
    auto line = line_metric<S>({"a", "b", "c"}, {"0", "1", "3"});

    auto vertices_only = clique_complex_at(line, S(0), 2);
    CHECK(vertices_only.cells.empty());
    CHECK(vertices_only.vertex_count() == 3);

    auto equal = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "1", "1"}, {"1", "0", "1"}, {"1", "1", "0"}});
    auto simplex = clique_complex_at(equal, S(1), 2);
    CHECK(simplex.cells.size() == 4);  // three edges and the full triangle
    CHECK(simplex.max_dimension() == 2);

    auto mid = clique_complex_at(line, S(2), 2);
    REQUIRE(mid.cells.size() == 2);  // ab and bc, no triangle past diameter 3
    CHECK(mid.cells[0].vertices == std::vector<int>{0, 1});
    CHECK(mid.cells[1].vertices == std::vector<int>{1, 2});
}

TEST_CASE_TEMPLATE("complex enumeration guards", S, double, Rational) {
    const int n = 26;
    typename EpMetric<S>::DistMatrix d(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(i, j) = Extended<S>(i == j ? S(0) : S(1));
    auto big = make_ep_metric<S>(alpha_ids(n), std::move(d));
    CHECK_THROWS_AS(clique_complex_at(big, S(1), 2), ResourceError);

    auto line = line_metric<S>({"a", "b"}, {"0", "1"});
    CHECK_THROWS_AS(clique_complex_at(line, S(1), 0), ParameterError);
}

TEST_CASE_TEMPLATE("wedge complex of full neighborhoods at infinity", S, double, Rational) {
    auto ns = full_neighborhood_system<S>(3);
    auto complex = wedge_complex(ns, Extended<S>::infinity(), 2);
    // three labeled copies of the full 2-simplex glued on the vertices
    CHECK(complex.cells.size() == 12);
    auto counts = complex.cell_counts();
    CHECK(counts == std::vector<long long>{3, 9, 3});

    // below every weight: vertices only
    auto empty = wedge_complex(ns, ScalarTraits<S>::ratio(1, 2), 2);
    CHECK(empty.cells.empty());
}

TEST_CASE_TEMPLATE("wedge complex of a single star is one simplex plus stray vertices", S, double,
                   Rational) {
    NeighborhoodSystem<S> ns;
    ns.points = {"a", "b", "c", "d"};
    ns.neighbors = {{1, 2}, {}, {}, {}};
    ns.weights = {{S(1), S(2)}, {}, {}, {}};
    auto complex = wedge_complex(ns, Extended<S>::infinity(), 3);
    CHECK(complex.vertex_count() == 4);
    CHECK(complex.cells.size() == 4);  // edges ab, ac, bc and the triangle abc
    for (const auto& cell : complex.cells) CHECK(cell.label == 0);
    auto betti = betti_gf2(complex);
    CHECK(betti.betti[0] == 2);  // the simplex plus the isolated vertex d
    CHECK(betti.chi == 2);
}

TEST_CASE_TEMPLATE("betti numbers: one simplex is contractible", S, double, Rational) {
    auto equal = metric_from_rows<S>(
        {"a", "b", "c"}, {{"0", "1", "1"}, {"1", "0", "1"}, {"1", "1", "0"}});
    auto report = betti_gf2(clique_complex_at(equal, S(1), 2));
    CHECK(report.chi == 1);
    CHECK(report.betti == std::vector<long long>{1, 0, 0});
}

TEST_CASE_TEMPLATE("full neighborhood systems are wedges of circles at infinity", S, double,
                   Rational) {
    for (int m = 1; m <= 5; ++m) {
        const int n = m + 1;
        auto ns = full_neighborhood_system<S>(n);
        auto complex = wedge_complex(ns, Extended<S>::infinity(), n - 1);
        auto report = betti_gf2(complex);
        CHECK(report.chi == 1 - static_cast<long long>(m) * m);
        CHECK(report.betti[0] == 1);
        if (m >= 1) CHECK(report.betti[1] == static_cast<long long>(m) * m);
        // alternating betti sum equals the euler characteristic when the cap
        // covers the top cells
        long long alt = 0;
        for (std::size_t d = 0; d < report.betti.size(); ++d)
            alt += (d % 2 == 0 ? 1 : -1) * report.betti[d];
        CHECK(alt == report.chi);
    }
}

TEST_CASE_TEMPLATE("wedge complex components agree with the union-find view", S, double,
                   Rational) {
    Rng rng(97531);
    for (int trial = 0; trial < 8; ++trial) {
        auto ns = random_system<S>(rng, 7, 3, WeightScheme::ambient);
        auto scales = star_critical_values(ns);
        for (const S& s : scales) {
            auto complex = wedge_complex(ns, s, 1);
            DisjointSets ds(ns.size());
            for (const auto& cell : complex.cells) ds.unite(cell.vertices[0], cell.vertices[1]);
            CHECK(Partition::from_disjoint_sets(ds) == wedge_components_at(ns, s));
        }
    }
}
