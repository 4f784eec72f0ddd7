#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "umapstab/ep_metric.hpp"
#include "umapstab/errors.hpp"

namespace umapstab {

/// How neighbor weights are derived from ambient distances d(x,y):
///   ambient  d(x,y)
///   scaled   d(x,y) / r_x
///   shifted  (d(x,y) - eta_x) / r_x
/// where r_x is the largest and eta_x the smallest ambient distance within
/// N_x.  All schemes are clamped below by a positive floor afterwards, since
/// every downstream result assumes strictly positive weights (the shifted
/// scheme is 0 on the nearest neighbor before clamping).
enum class WeightScheme { ambient, scaled, shifted };

inline const char* to_string(WeightScheme s) {
    switch (s) {
        case WeightScheme::ambient: return "ambient";
        case WeightScheme::scaled: return "scaled";
        case WeightScheme::shifted: return "shifted";
    }
    return "?";
}

/// Per-point neighbor lists N_x with optional positive weights d_x(x,y).
/// Neighbor lists keep their construction order (selection order for knn).
/// r_max / r_min hold the raw ambient extremes per point once weights have
/// been assigned from an ambient metric; they stay empty otherwise.
template <typename S>
struct NeighborhoodSystem {
    std::vector<std::string> points;
    std::vector<std::vector<int>> neighbors;
    std::vector<std::vector<S>> weights;  // parallel to neighbors; empty if unset
    std::vector<S> r_max;
    std::vector<S> r_min;

    int size() const { return static_cast<int>(points.size()); }
    bool has_weights() const { return !weights.empty(); }

    int index_of(const std::string& id) const {
        for (int i = 0; i < size(); ++i)
            if (points[i] == id) return i;
        return -1;
    }
};

/// k-nearest neighbors under the ambient metric, selected by iterated argmin
/// with ties broken toward the earlier point in the total order.  Equal-
/// distance runs therefore appear in ascending order.  Weights are left
/// unset.
template <typename S>
NeighborhoodSystem<S> knn(const EpMetric<S>& ambient, int k) {
    const int n = ambient.size();
    if (k < 0) throw ParameterError("k must be nonnegative");
    if (k >= n) throw ParameterError("k must be at most |X|-1");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!ambient(i, j).is_finite())
                throw DomainError("knn requires a finite ambient metric; dist(" +
                                  ambient.points[i] + "," + ambient.points[j] + ") is infinite");

    NeighborhoodSystem<S> ns;
    ns.points = ambient.points;
    ns.neighbors.resize(n);
    for (int x = 0; x < n; ++x) {
        std::vector<bool> taken(n, false);
        taken[x] = true;
        for (int t = 0; t < k; ++t) {
            int best = -1;
            for (int y = 0; y < n; ++y) {
                if (taken[y]) continue;
                if (best < 0 || ambient(x, y).value() < ambient(x, best).value()) best = y;
            }
            taken[best] = true;
            ns.neighbors[x].push_back(best);
        }
    }
    return ns;
}

/// Assigns weights per scheme, clamped below by `floor` so that every stored
/// weight is strictly positive.  Ambient distance 0 inside a neighbor list is
/// tolerated only by the ambient scheme (the clamp absorbs it); the scaled
/// and shifted schemes reject it, as they do a degenerate r_x = 0.
template <typename S>
NeighborhoodSystem<S> weights(const NeighborhoodSystem<S>& ns, const EpMetric<S>& ambient,
                              WeightScheme scheme, const S& floor) {
    if (!(floor > S(0))) throw ParameterError("weight floor must be strictly positive");
    if (ns.points != ambient.points)
        throw StructuralError("neighborhood system and ambient metric disagree on points");

    const int n = ns.size();
    NeighborhoodSystem<S> out = ns;
    out.weights.assign(n, {});
    out.r_max.assign(n, S(0));
    out.r_min.assign(n, S(0));

    for (int x = 0; x < n; ++x) {
        const auto& nbrs = ns.neighbors[x];
        if (nbrs.empty()) continue;
        std::vector<S> raw;
        raw.reserve(nbrs.size());
        for (int y : nbrs) {
            if (y == x) throw StructuralError("point " + ns.points[x] + " lists itself as neighbor");
            if (!ambient(x, y).is_finite())
                throw DomainError("infinite ambient distance from " + ns.points[x] + " to " +
                                  ns.points[y]);
            raw.push_back(ambient(x, y).value());
        }
        S r = raw[0], eta = raw[0];
        for (const S& v : raw) {
            if (v > r) r = v;
            if (v < eta) eta = v;
        }
        out.r_max[x] = r;
        out.r_min[x] = eta;

        if (scheme != WeightScheme::ambient) {
            if (r == S(0))
                throw DomainError("all neighbors of " + ns.points[x] +
                                  " are at distance 0 (r_x = 0)");
            for (const S& v : raw)
                if (v == S(0))
                    throw DomainError("duplicate point at distance 0 in N_" + ns.points[x] +
                                      " is not allowed under the " +
                                      std::string(to_string(scheme)) + " scheme");
        }

        auto& ws = out.weights[x];
        ws.reserve(raw.size());
        for (const S& v : raw) {
            S w = v;
            switch (scheme) {
                case WeightScheme::ambient: w = v; break;
                case WeightScheme::scaled: w = S(v / r); break;
                case WeightScheme::shifted: w = S(S(v - eta) / r); break;
            }
            if (w < floor) w = floor;
            ws.push_back(w);
        }
    }
    return out;
}

/// The star ep-metric D_x centered at one point: finite exactly on
/// U_x = {x} u N_x, with D_x(x,y) the spoke weight and D_x(y,z) the sum of
/// the two spoke weights for distinct neighbors.  Only the finite block is
/// stored; everything else is implicitly infinite.
template <typename S>
struct StarMetric {
    std::vector<std::string> points;  // full shared point list
    int center;
    std::vector<int> spokes;    // neighbor indices, construction order
    std::vector<S> spoke_weight;

    Extended<S> dist(int u, int v) const {
        if (u == v) return Extended<S>(S(0));
        S wu{}, wv{};
        bool u_spoke = false, v_spoke = false;
        for (std::size_t t = 0; t < spokes.size(); ++t) {
            if (spokes[t] == u) {
                u_spoke = true;
                wu = spoke_weight[t];
            }
            if (spokes[t] == v) {
                v_spoke = true;
                wv = spoke_weight[t];
            }
        }
        if (u == center && v_spoke) return Extended<S>(wv);
        if (v == center && u_spoke) return Extended<S>(wu);
        if (u_spoke && v_spoke) return Extended<S>(S(wu + wv));
        return Extended<S>::infinity();
    }

    /// Members of U_x in ascending point order.
    std::vector<int> members() const {
        std::vector<int> m = spokes;
        m.push_back(center);
        std::sort(m.begin(), m.end());
        return m;
    }

    EpMetric<S> to_ep_metric() const {
        const int n = static_cast<int>(points.size());
        typename EpMetric<S>::DistMatrix d(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) d(i, j) = dist(i, j);
        return EpMetric<S>{points, std::move(d)};
    }
};

template <typename S>
StarMetric<S> star_metric(const NeighborhoodSystem<S>& ns, int center) {
    if (center < 0 || center >= ns.size()) throw StructuralError("unknown star center");
    if (!ns.has_weights()) throw StructuralError("star metric requires weights to be set");
    for (const S& w : ns.weights[center])
        if (!(w > S(0))) throw StructuralError("star weights must be strictly positive");
    return StarMetric<S>{ns.points, center, ns.neighbors[center], ns.weights[center]};
}

template <typename S>
StarMetric<S> star_metric(const NeighborhoodSystem<S>& ns, const std::string& id) {
    int c = ns.index_of(id);
    if (c < 0) throw StructuralError("unknown point '" + id + "'");
    return star_metric(ns, c);
}

/// The colimit metric of the whole neighborhood system: the wedge of all star
/// metrics over the shared point set.  Star entries are folded into one cost
/// matrix first, so the closure runs once over |X| points.
template <typename S>
EpMetric<S> umap_metric(const NeighborhoodSystem<S>& ns) {
    if (!ns.has_weights()) throw StructuralError("umap metric requires weights to be set");
    const int n = ns.size();
    typename EpMetric<S>::DistMatrix w(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            w(i, j) = i == j ? Extended<S>(S(0)) : Extended<S>::infinity();

    auto relax = [&](int a, int b, const S& v) {
        Extended<S> e(v);
        if (e < w(a, b)) {
            w(a, b) = e;
            w(b, a) = e;
        }
    };
    for (int x = 0; x < n; ++x) {
        const auto& nbrs = ns.neighbors[x];
        const auto& ws = ns.weights[x];
        for (std::size_t a = 0; a < nbrs.size(); ++a) {
            if (!(ws[a] > S(0))) throw StructuralError("weights must be strictly positive");
            relax(x, nbrs[a], ws[a]);
            for (std::size_t b = a + 1; b < nbrs.size(); ++b)
                relax(nbrs[a], nbrs[b], S(ws[a] + ws[b]));
        }
    }
    min_plus_closure<S>(w);
    return EpMetric<S>{ns.points, std::move(w)};
}

/// One failed compatibility condition for an inclusion of neighborhood
/// systems: either a source neighbor is missing from the image neighborhood,
/// or the image weight exceeds the source weight.
struct CompatibilityViolation {
    enum class Kind { missing_neighbor, weight_exceeds };
    Kind kind;
    std::string x, z;  // source point and its neighbor
    std::string message;
};

struct CompatibilityReport {
    bool compatible = true;
    std::vector<CompatibilityViolation> violations;
};

/// Thrown when an operation requires a compatible inclusion and the check
/// fails; carries the full violation list.
struct CompatibilityError : Error {
    std::vector<CompatibilityViolation> violations;

    explicit CompatibilityError(std::vector<CompatibilityViolation> v)
        : Error(compose(v)), violations(std::move(v)) {}

private:
    static std::string compose(const std::vector<CompatibilityViolation>& v) {
        std::ostringstream os;
        os << "incompatible neighborhood systems (" << v.size() << " violation(s))";
        if (!v.empty()) os << ": " << v.front().message;
        return os.str();
    }
};

/// Checks that an injection X -> Y carries each N_x into N'_{i(x)} without
/// increasing the corresponding weights.  `injection` maps source indices to
/// target indices.
template <typename S>
CompatibilityReport inclusion_compatible(const NeighborhoodSystem<S>& source,
                                         const NeighborhoodSystem<S>& target,
                                         const std::vector<int>& injection) {
    const int n = source.size();
    if (static_cast<int>(injection.size()) != n)
        throw StructuralError("injection must map every source point");
    std::vector<bool> hit(target.size(), false);
    for (int v : injection) {
        if (v < 0 || v >= target.size()) throw StructuralError("injection target out of range");
        if (hit[v]) throw StructuralError("injection is not injective");
        hit[v] = true;
    }
    if (!source.has_weights() || !target.has_weights())
        throw StructuralError("compatibility check requires weights on both systems");

    CompatibilityReport report;
    for (int x = 0; x < n; ++x) {
        const int ix = injection[x];
        for (std::size_t t = 0; t < source.neighbors[x].size(); ++t) {
            const int z = source.neighbors[x][t];
            const int iz = injection[z];
            // position of iz within N'_{i(x)}
            int pos = -1;
            for (std::size_t u = 0; u < target.neighbors[ix].size(); ++u)
                if (target.neighbors[ix][u] == iz) {
                    pos = static_cast<int>(u);
                    break;
                }
            if (pos < 0) {
                report.violations.push_back(
                    {CompatibilityViolation::Kind::missing_neighbor, source.points[x],
                     source.points[z],
                     "i(" + source.points[z] + ") is not a neighbor of i(" + source.points[x] +
                         ")"});
                continue;
            }
            const S& wx = source.weights[x][t];
            const S& wy = target.weights[ix][pos];
            if (!approx_leq(wy, wx))
                report.violations.push_back(
                    {CompatibilityViolation::Kind::weight_exceeds, source.points[x],
                     source.points[z],
                     "weight of (i(" + source.points[x] + "),i(" + source.points[z] +
                         ")) exceeds weight of (" + source.points[x] + "," + source.points[z] +
                         ")"});
        }
    }
    report.compatible = report.violations.empty();
    return report;
}

}  // namespace umapstab
