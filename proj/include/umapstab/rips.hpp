#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "umapstab/ep_metric.hpp"
#include "umapstab/neighborhood.hpp"

namespace umapstab {

/// Sorted distinct finite off-diagonal distances; the scales at which the
/// component structure can change.  Floating mode merges values within the
/// comparison tolerance, keeping the smallest of each run.
template <typename S>
std::vector<S> critical_values(const EpMetric<S>& m) {
    std::vector<S> vals;
    const int n = m.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (m(i, j).is_finite()) vals.push_back(m(i, j).value());
    std::sort(vals.begin(), vals.end());
    std::vector<S> out;
    for (const S& v : vals)
        if (out.empty() || !approx_eq(out.back(), v)) out.push_back(v);
    return out;
}

/// Connected components of the graph with edges {u,v : d(u,v) <= s};
/// representatives are least in the total order.
template <typename S>
Partition components_at(const EpMetric<S>& m, const Extended<S>& s) {
    const int n = m.size();
    DisjointSets ds(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (within_scale(m(i, j), s)) ds.unite(i, j);
    return Partition::from_disjoint_sets(ds);
}

template <typename S>
Partition components_at(const EpMetric<S>& m, const S& s) {
    return components_at(m, Extended<S>(s));
}

template <typename S>
struct MergeEvent {
    S scale;
    int absorbed;  // representative of the block that disappears
    int into;      // representative of the surviving block
};

/// The single-linkage hierarchy of an ep-metric: per-critical-value
/// partitions plus the merge list that replays them.  Blocks separated by
/// infinite distance never merge, so the dendrogram can have several roots.
template <typename S>
struct Filtration {
    std::vector<S> criticals;
    std::vector<Partition> partitions;  // parallel to criticals
    std::vector<MergeEvent<S>> merges;
    std::vector<int> roots;  // representatives of the final partition
};

template <typename S>
Filtration<S> merge_tree(const EpMetric<S>& m) {
    const int n = m.size();
    Filtration<S> f;
    f.criticals = critical_values(m);

    struct Edge {
        S value;
        int i, j;
    };
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (m(i, j).is_finite()) edges.push_back({m(i, j).value(), i, j});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.value, a.i, a.j) < std::tie(b.value, b.i, b.j);
    });

    DisjointSets ds(n);
    std::size_t next = 0;
    for (const S& cv : f.criticals) {
        // edges sharing a (deduplicated) critical value merge in total-order
        // sequence, independent of their storage order
        std::vector<Edge> bin;
        while (next < edges.size() && approx_leq(edges[next].value, cv)) bin.push_back(edges[next++]);
        std::sort(bin.begin(), bin.end(),
                  [](const Edge& a, const Edge& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
        for (const Edge& e : bin) {
            int ra = ds.find(e.i), rb = ds.find(e.j);
            if (ra == rb) continue;
            ds.unite(e.i, e.j);
            f.merges.push_back({cv, std::max(ra, rb), std::min(ra, rb)});
        }
        f.partitions.push_back(Partition::from_disjoint_sets(ds));
    }

    const Partition final_partition =
        f.partitions.empty() ? Partition::discrete(n) : f.partitions.back();
    for (const auto& block : final_partition.blocks) f.roots.push_back(block[0]);
    return f;
}

/// Components of the wedge of star complexes at scale s: connectivity over
/// the union of per-star edge sets {(u,v) : D_x(u,v) <= s}.
template <typename S>
Partition wedge_components_at(const NeighborhoodSystem<S>& ns, const Extended<S>& s) {
    if (!ns.has_weights()) throw StructuralError("wedge components require weights to be set");
    const int n = ns.size();
    DisjointSets ds(n);
    for (int x = 0; x < n; ++x) {
        const auto& nbrs = ns.neighbors[x];
        const auto& ws = ns.weights[x];
        for (std::size_t a = 0; a < nbrs.size(); ++a) {
            if (within_scale(Extended<S>(ws[a]), s)) ds.unite(x, nbrs[a]);
            for (std::size_t b = a + 1; b < nbrs.size(); ++b)
                if (within_scale(Extended<S>(S(ws[a] + ws[b])), s)) ds.unite(nbrs[a], nbrs[b]);
        }
    }
    return Partition::from_disjoint_sets(ds);
}

template <typename S>
Partition wedge_components_at(const NeighborhoodSystem<S>& ns, const S& s) {
    return wedge_components_at(ns, Extended<S>(s));
}

/// Critical values of all star metrics: spoke weights and spoke-pair sums.
template <typename S>
std::vector<S> star_critical_values(const NeighborhoodSystem<S>& ns) {
    if (!ns.has_weights()) throw StructuralError("star critical values require weights");
    std::vector<S> vals;
    for (int x = 0; x < ns.size(); ++x) {
        const auto& ws = ns.weights[x];
        for (std::size_t a = 0; a < ws.size(); ++a) {
            vals.push_back(ws[a]);
            for (std::size_t b = a + 1; b < ws.size(); ++b) vals.push_back(S(ws[a] + ws[b]));
        }
    }
    std::sort(vals.begin(), vals.end());
    std::vector<S> out;
    for (const S& v : vals)
        if (out.empty() || !approx_eq(out.back(), v)) out.push_back(v);
    return out;
}

template <typename S>
struct ExcisionDiff {
    S scale;
    Partition wedge;
    Partition colimit;
};

template <typename S>
struct ExcisionReport {
    bool ok = true;
    std::vector<S> scales_checked;
    std::vector<ExcisionDiff<S>> diffs;
};

/// Compares, at every critical value of either side, the components of the
/// wedge of stars with the components of the colimit metric.  The two
/// families are isomorphic scale by scale; a nonempty diff list means the
/// verification failed.
template <typename S>
ExcisionReport<S> excision_check(const NeighborhoodSystem<S>& ns) {
    EpMetric<S> colimit = umap_metric(ns);
    std::vector<S> scales = critical_values(colimit);
    for (const S& v : star_critical_values(ns)) scales.push_back(v);
    std::sort(scales.begin(), scales.end());
    std::vector<S> merged;
    for (const S& v : scales)
        if (merged.empty() || !approx_eq(merged.back(), v)) merged.push_back(v);

    ExcisionReport<S> report;
    report.scales_checked = merged;
    for (const S& s : merged) {
        Partition w = wedge_components_at(ns, s);
        Partition c = components_at(colimit, s);
        if (w != c) report.diffs.push_back({s, w, c});
    }
    report.ok = report.diffs.empty();
    return report;
}

// ---------------------------------------------------------------------------
// Labeled complexes and GF(2) homology
// ---------------------------------------------------------------------------

/// A cell of the iterated-pushout complex: a subset of >= 2 vertices together
/// with the label of the star it came from (-1 for unlabeled clique
/// complexes).  Vertices are shared across labels; higher cells are not.
struct LabeledCell {
    int label;
    std::vector<int> vertices;  // ascending

    int dimension() const { return static_cast<int>(vertices.size()) - 1; }
};

inline bool operator==(const LabeledCell& a, const LabeledCell& b) {
    return a.label == b.label && a.vertices == b.vertices;
}

/// Disjoint copies of local Rips complexes glued along the shared vertex set.
struct LabeledComplex {
    std::vector<std::string> points;  // shared vertices
    int cap = 1;                      // maximum cell dimension enumerated
    std::vector<LabeledCell> cells;   // sorted by (dimension, label, vertices)

    int vertex_count() const { return static_cast<int>(points.size()); }

    int max_dimension() const {
        int d = 0;
        for (const auto& c : cells) d = std::max(d, c.dimension());
        return d;
    }

    /// Number of cells per dimension, vertices included at dimension 0.
    std::vector<long long> cell_counts() const {
        std::vector<long long> counts(static_cast<std::size_t>(max_dimension()) + 1, 0);
        counts[0] = vertex_count();
        for (const auto& c : cells) ++counts[c.dimension()];
        return counts;
    }
};

namespace detail {

constexpr int kMaxComplexPoints = 25;
constexpr std::size_t kMaxComplexCells = 200000;

/// Depth-first clique enumeration: extends `prefix` by candidates (already
/// pairwise-qualified against the prefix), emitting every subset of size
/// >= 2 up to max_size vertices.
template <typename Dist, typename S>
void enumerate_cliques(const Dist& dist, const Extended<S>& s, int label,
                       std::vector<int>& prefix, const std::vector<int>& candidates,
                       int max_size, std::vector<LabeledCell>& out) {
    for (std::size_t t = 0; t < candidates.size(); ++t) {
        const int v = candidates[t];
        prefix.push_back(v);
        if (prefix.size() >= 2) {
            out.push_back({label, prefix});
            if (out.size() > kMaxComplexCells)
                throw ResourceError("cell count guard exceeded while enumerating complex");
        }
        if (static_cast<int>(prefix.size()) < max_size) {
            std::vector<int> next;
            for (std::size_t u = t + 1; u < candidates.size(); ++u)
                if (within_scale(dist(v, candidates[u]), s)) next.push_back(candidates[u]);
            enumerate_cliques(dist, s, label, prefix, next, max_size, out);
        }
        prefix.pop_back();
    }
}

inline void sort_cells(std::vector<LabeledCell>& cells) {
    std::sort(cells.begin(), cells.end(), [](const LabeledCell& a, const LabeledCell& b) {
        if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
        if (a.label != b.label) return a.label < b.label;
        return a.vertices < b.vertices;
    });
}

}  // namespace detail

/// The clique (Vietoris-Rips) complex of an ep-metric at scale s, as an
/// unlabeled LabeledComplex: all subsets of diameter <= s up to dimension
/// `cap`.
template <typename S>
LabeledComplex clique_complex_at(const EpMetric<S>& m, const Extended<S>& s, int cap) {
    if (m.size() > detail::kMaxComplexPoints)
        throw ResourceError("clique complex enumeration is limited to 25 points");
    if (cap < 1) throw ParameterError("dimension cap must be at least 1");

    LabeledComplex complex;
    complex.points = m.points;
    complex.cap = cap;

    std::vector<int> all(m.size());
    for (int i = 0; i < m.size(); ++i) all[i] = i;
    std::vector<int> prefix;
    auto dist = [&](int a, int b) { return m(a, b); };
    detail::enumerate_cliques(dist, s, -1, prefix, all, cap + 1, complex.cells);
    detail::sort_cells(complex.cells);
    return complex;
}

template <typename S>
LabeledComplex clique_complex_at(const EpMetric<S>& m, const S& s, int cap) {
    return clique_complex_at(m, Extended<S>(s), cap);
}

/// The iterated-pushout complex of a neighborhood system at scale s: for
/// every star x, the cells (x, sigma) with sigma inside U_x of D_x-diameter
/// <= s, glued along the shared vertex set.
template <typename S>
LabeledComplex wedge_complex(const NeighborhoodSystem<S>& ns, const Extended<S>& s, int cap) {
    if (!ns.has_weights()) throw StructuralError("wedge complex requires weights to be set");
    if (ns.size() > detail::kMaxComplexPoints)
        throw ResourceError("wedge complex enumeration is limited to 25 points");
    if (cap < 1) throw ParameterError("dimension cap must be at least 1");

    LabeledComplex complex;
    complex.points = ns.points;
    complex.cap = cap;

    for (int x = 0; x < ns.size(); ++x) {
        StarMetric<S> star = star_metric(ns, x);
        std::vector<int> members = star.members();
        std::vector<int> prefix;
        auto dist = [&](int a, int b) { return star.dist(a, b); };
        detail::enumerate_cliques(dist, s, x, prefix, members, cap + 1, complex.cells);
    }
    detail::sort_cells(complex.cells);
    return complex;
}

template <typename S>
LabeledComplex wedge_complex(const NeighborhoodSystem<S>& ns, const S& s, int cap) {
    return wedge_complex(ns, Extended<S>(s), cap);
}

/// Euler characteristic and GF(2) Betti numbers of a labeled complex.
struct BettiReport {
    long long chi = 0;
    std::vector<long long> betti;  // b_0 .. b_maxdim
};

namespace detail {

/// Rank of a GF(2) matrix given as bit-packed columns (destructive).
inline long long gf2_rank(std::vector<std::vector<std::uint64_t>>& cols) {
    struct Pivot {
        std::size_t row;
        std::vector<std::uint64_t>* col;
    };
    std::vector<Pivot> pivots;
    long long rank = 0;
    auto lowest_set = [](const std::vector<std::uint64_t>& c) -> long long {
        for (std::size_t w = 0; w < c.size(); ++w)
            if (c[w]) return static_cast<long long>(w * 64 + __builtin_ctzll(c[w]));
        return -1;
    };
    for (auto& col : cols) {
        long long row = lowest_set(col);
        while (row >= 0) {
            Pivot* hit = nullptr;
            for (auto& p : pivots)
                if (p.row == static_cast<std::size_t>(row)) {
                    hit = &p;
                    break;
                }
            if (!hit) break;
            for (std::size_t w = 0; w < col.size(); ++w) col[w] ^= (*hit->col)[w];
            row = lowest_set(col);
        }
        if (row >= 0) {
            pivots.push_back({static_cast<std::size_t>(row), &col});
            ++rank;
        }
    }
    return rank;
}

}  // namespace detail

/// Betti numbers over GF(2) via boundary-matrix ranks, with the Euler
/// characteristic computed independently as the alternating cell count.
/// Boundaries respect labels: the faces of (x, sigma) are (x, tau) for
/// codimension-1 subsets tau with >= 2 vertices, and shared vertices below
/// the 1-cells.
inline BettiReport betti_gf2(const LabeledComplex& complex) {
    if (complex.cells.size() > detail::kMaxComplexCells)
        throw ResourceError("cell count guard exceeded in homology computation");

    const auto counts = complex.cell_counts();
    const int maxdim = complex.max_dimension();

    // index cells per dimension, in their canonical order
    std::vector<std::map<std::pair<int, std::vector<int>>, int>> index(maxdim + 1);
    for (const auto& cell : complex.cells) {
        const int d = cell.dimension();
        index[d].insert({{cell.label, cell.vertices}, static_cast<int>(index[d].size())});
    }

    // rank of each boundary map; ranks[d] is rank of d-cells -> (d-1)-cells
    std::vector<long long> ranks(maxdim + 2, 0);
    for (int d = 1; d <= maxdim; ++d) {
        const long long rows = d == 1 ? counts[0] : static_cast<long long>(index[d - 1].size());
        const std::size_t words = static_cast<std::size_t>((rows + 63) / 64);
        std::vector<std::vector<std::uint64_t>> cols;
        cols.reserve(index[d].size());
        for (const auto& [key, _] : index[d]) {
            const auto& [label, vertices] = key;
            std::vector<std::uint64_t> col(words, 0);
            auto set_row = [&](long long r) { col[r / 64] ^= (1ull << (r % 64)); };
            if (d == 1) {
                set_row(vertices[0]);
                set_row(vertices[1]);
            } else {
                std::vector<int> face(vertices.size() - 1);
                for (std::size_t skip = 0; skip < vertices.size(); ++skip) {
                    face.clear();
                    for (std::size_t t = 0; t < vertices.size(); ++t)
                        if (t != skip) face.push_back(vertices[t]);
                    auto it = index[d - 1].find({label, face});
                    if (it == index[d - 1].end())
                        throw StructuralError("complex is not closed under faces");
                    set_row(it->second);
                }
            }
            cols.push_back(std::move(col));
        }
        ranks[d] = detail::gf2_rank(cols);
    }

    BettiReport report;
    for (int d = 0; d <= maxdim; ++d) {
        report.chi += (d % 2 == 0 ? 1 : -1) * counts[d];
        report.betti.push_back(counts[d] - ranks[d] - ranks[d + 1]);
    }
    return report;
}

}  // namespace umapstab
