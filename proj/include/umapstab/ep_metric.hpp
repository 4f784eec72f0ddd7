#pragma once

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

#include "umapstab/errors.hpp"
#include "umapstab/extended.hpp"
#include "umapstab/partition.hpp"
#include "umapstab/scalar.hpp"

namespace umapstab {

/// A finite extended pseudo-metric space: an ordered list of point
/// identifiers (the total order) and a symmetric matrix of extended
/// distances.  Distinct points may sit at distance 0 or infinity.
template <typename S>
struct EpMetric {
    using Ext = Extended<S>;
    using DistMatrix = Eigen::Matrix<Ext, Eigen::Dynamic, Eigen::Dynamic>;

    std::vector<std::string> points;
    DistMatrix dist;

    int size() const { return static_cast<int>(points.size()); }

    const Ext& operator()(int i, int j) const { return dist(i, j); }

    int index_of(const std::string& id) const {
        for (int i = 0; i < size(); ++i)
            if (points[i] == id) return i;
        return -1;
    }
};

/// Builds an EpMetric, rejecting empty point sets, duplicate identifiers and
/// shape mismatches.  The entries themselves are validated separately.
template <typename S>
EpMetric<S> make_ep_metric(std::vector<std::string> points,
                           typename EpMetric<S>::DistMatrix dist) {
    if (points.empty()) throw StructuralError("point set must be nonempty");
    const auto n = static_cast<Eigen::Index>(points.size());
    if (dist.rows() != n || dist.cols() != n)
        throw StructuralError("distance matrix shape does not match point count");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw StructuralError("duplicate point identifier '" + points[i] + "'");
    return EpMetric<S>{std::move(points), std::move(dist)};
}

/// One failed ep-metric axiom, naming the offending pair or triple.
struct MetricViolation {
    enum class Kind { negative_entry, nonzero_diagonal, asymmetry, triangle };
    Kind kind;
    int i, j, k;  // k = -1 for pair violations
    std::string message;
};

/// Checks the ep-metric axioms: nonnegative entries, zero diagonal, symmetry
/// and the saturating triangle inequality.  Empty result means valid.
template <typename S>
std::vector<MetricViolation> validate(const EpMetric<S>& m) {
    std::vector<MetricViolation> out;
    const int n = m.size();
    for (int i = 0; i < n; ++i) {
        if (m(i, i).is_finite() && !approx_eq(m(i, i).value(), S(0)))
            out.push_back({MetricViolation::Kind::nonzero_diagonal, i, i, -1,
                           "dist(" + m.points[i] + "," + m.points[i] + ") != 0"});
        else if (!m(i, i).is_finite())
            out.push_back({MetricViolation::Kind::nonzero_diagonal, i, i, -1,
                           "dist(" + m.points[i] + "," + m.points[i] + ") is infinite"});
        for (int j = 0; j < n; ++j) {
            if (m(i, j).is_finite() && m(i, j).value() < S(0) &&
                !approx_eq(m(i, j).value(), S(0)))
                out.push_back({MetricViolation::Kind::negative_entry, i, j, -1,
                               "dist(" + m.points[i] + "," + m.points[j] + ") < 0"});
            if (j > i && !approx_eq(m(i, j), m(j, i)))
                out.push_back({MetricViolation::Kind::asymmetry, i, j, -1,
                               "dist(" + m.points[i] + "," + m.points[j] + ") != dist(" +
                                   m.points[j] + "," + m.points[i] + ")"});
        }
    }
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                if (!approx_leq(m(i, k), m(i, j) + m(j, k)))
                    out.push_back({MetricViolation::Kind::triangle, i, j, k,
                                   "dist(" + m.points[i] + "," + m.points[k] + ") > dist(" +
                                       m.points[i] + "," + m.points[j] + ") + dist(" +
                                       m.points[j] + "," + m.points[k] + ")"});
            }
    return out;
}

/// In-place min-plus closure (all-pairs shortest paths) with a fixed k,i,j
/// iteration order, so results are bit-deterministic in floating mode.
template <typename S>
void min_plus_closure(typename EpMetric<S>::DistMatrix& w) {
    const Eigen::Index n = w.rows();
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!w(i, k).is_finite()) continue;
            for (Eigen::Index j = 0; j < n; ++j) {
                Extended<S> via = w(i, k) + w(k, j);
                if (via < w(i, j)) w(i, j) = via;
            }
        }
}

/// The shortest-path ep-metric generated by a symmetric cost matrix with a
/// zero diagonal (nonnegative entries; infinity allowed).
template <typename S>
EpMetric<S> shortest_path_metric(std::vector<std::string> points,
                                 typename EpMetric<S>::DistMatrix costs) {
    auto metric = make_ep_metric<S>(std::move(points), std::move(costs));
    min_plus_closure<S>(metric.dist);
    return metric;
}

/// The colimit (wedge) of several ep-metrics on the same ordered point set:
/// the minimum over polygonal paths of the sum of per-leg minima, computed as
/// the min-plus closure of the entrywise minimum matrix.  The result never
/// exceeds any input entry.
template <typename S>
EpMetric<S> wedge_colimit(std::span<const EpMetric<S>> metrics) {
    if (metrics.empty()) throw StructuralError("wedge of an empty metric list");
    const auto& base = metrics.front();
    for (const auto& m : metrics)
        if (m.points != base.points)
            throw StructuralError("wedge inputs must share the same ordered point set");
    for (const auto& m : metrics) {
        auto violations = validate(m);
        if (!violations.empty())
            throw StructuralError("wedge input is not a valid ep-metric: " +
                                  violations.front().message);
    }

    const int n = base.size();
    typename EpMetric<S>::DistMatrix w = base.dist;
    for (std::size_t t = 1; t < metrics.size(); ++t)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (metrics[t].dist(i, j) < w(i, j)) w(i, j) = metrics[t].dist(i, j);
    min_plus_closure<S>(w);
    return EpMetric<S>{base.points, std::move(w)};
}

template <typename S>
EpMetric<S> wedge_colimit(const std::vector<EpMetric<S>>& metrics) {
    return wedge_colimit(std::span<const EpMetric<S>>(metrics));
}

/// Blocks of pairwise-finite distance.  For a valid ep-metric finiteness is
/// already transitive; the union-find closure is a safeguard.
using GlobalPartition = Partition;

template <typename S>
GlobalPartition global_components(const EpMetric<S>& m) {
    const int n = m.size();
    DisjointSets ds(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (m(i, j).is_finite()) ds.unite(i, j);
    return Partition::from_disjoint_sets(ds);
}

/// Restriction of an ep-metric to one block of its global partition; the
/// result is a genuine (finite-valued) space.  The block must match a block
/// of global_components exactly.
template <typename S>
EpMetric<S> restrict_component(const EpMetric<S>& m, const std::vector<int>& block) {
    auto partition = global_components(m);
    bool is_block = false;
    for (const auto& b : partition.blocks)
        if (b == block) {
            is_block = true;
            break;
        }
    if (!is_block) throw StructuralError("subset is not a global component block");

    const int k = static_cast<int>(block.size());
    std::vector<std::string> pts(k);
    typename EpMetric<S>::DistMatrix sub(k, k);
    for (int i = 0; i < k; ++i) {
        pts[i] = m.points[block[i]];
        for (int j = 0; j < k; ++j) sub(i, j) = m.dist(block[i], block[j]);
    }
    return EpMetric<S>{std::move(pts), std::move(sub)};
}

}  // namespace umapstab
