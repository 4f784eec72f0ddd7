#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "umapstab/ep_metric.hpp"
#include "umapstab/neighborhood.hpp"
#include "umapstab/rips.hpp"

namespace umapstab {

/// A distance-compressing injection between two globally connected metric
/// spaces (typically component restrictions of colimit metrics).
/// `injection` maps source indices to target indices; the morphism property
/// d_target(i(x), i(y)) <= d_source(x, y) is checked by the operations, not
/// assumed.
template <typename S>
struct InclusionData {
    EpMetric<S> source;
    EpMetric<S> target;
    std::vector<int> injection;
};

template <typename S>
InclusionData<S> make_inclusion(EpMetric<S> source, EpMetric<S> target,
                                std::vector<int> injection) {
    if (static_cast<int>(injection.size()) != source.size())
        throw StructuralError("injection must map every source point");
    std::vector<bool> hit(target.size(), false);
    for (int v : injection) {
        if (v < 0 || v >= target.size()) throw StructuralError("injection target out of range");
        if (hit[v]) throw StructuralError("injection is not injective");
        hit[v] = true;
    }
    return InclusionData<S>{std::move(source), std::move(target), std::move(injection)};
}

/// Pairs (x, y) of source indices whose image distance exceeds the source
/// distance (beyond tolerance); empty means i is an ep-metric morphism.
template <typename S>
std::vector<std::pair<int, int>> morphism_violations(const InclusionData<S>& inc) {
    std::vector<std::pair<int, int>> out;
    const int n = inc.source.size();
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            if (!approx_leq(inc.target(inc.injection[x], inc.injection[y]), inc.source(x, y)))
                out.push_back({x, y});
    return out;
}

/// The largest factor by which the morphism shrinks a distance:
/// max over distinct pairs of d_source / d_target, at least 1, and 1 by
/// convention when the source has fewer than two points.
template <typename S>
S compression_factor(const InclusionData<S>& inc) {
    auto bad = morphism_violations(inc);
    if (!bad.empty())
        throw DomainError("not an ep-metric morphism: distance of (" +
                          inc.source.points[bad.front().first] + "," +
                          inc.source.points[bad.front().second] + ") grows under i");
    S m(1);
    const int n = inc.source.size();
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            const auto& num = inc.source(x, y);
            const auto& den = inc.target(inc.injection[x], inc.injection[y]);
            if (!num.is_finite() || !den.is_finite())
                throw DomainError("compression factor requires globally connected metric spaces");
            if (den.value() == S(0))
                throw DomainError("compression factor undefined: i(" + inc.source.points[x] +
                                  ") and i(" + inc.source.points[y] + ") are at distance 0");
            S ratio(num.value() / den.value());
            if (ratio > m) m = ratio;
        }
    return m;
}

/// Covering radius of the image: max over target points of the least target
/// distance to the image of the source.
template <typename S>
S covering_radius(const InclusionData<S>& inc) {
    if (inc.target.size() == 0) throw DomainError("covering radius of an empty target");
    S radius(0);
    for (int y = 0; y < inc.target.size(); ++y) {
        bool have = false;
        S best(0);
        for (int x = 0; x < inc.source.size(); ++x) {
            const auto& d = inc.target(y, inc.injection[x]);
            if (!d.is_finite())
                throw DomainError("target point " + inc.target.points[y] +
                                  " is infinitely far from the image");
            if (!have || d.value() < best) {
                best = d.value();
                have = true;
            }
        }
        if (best > radius) radius = best;
    }
    return radius;
}

/// The retraction theta: image points go to their unique preimage; any other
/// target point goes to a nearest source point (earliest in the source order
/// on ties).  Requires r at least the covering radius, so every displacement
/// d(y, i(theta(y))) is <= r.
template <typename S>
std::vector<int> theta_map(const InclusionData<S>& inc, const S& r) {
    const S r_star = covering_radius(inc);
    if (!approx_leq(r_star, r))
        throw ParameterError("r is below the covering radius");

    std::vector<int> preimage(inc.target.size(), -1);
    for (int x = 0; x < inc.source.size(); ++x) preimage[inc.injection[x]] = x;

    std::vector<int> theta(inc.target.size(), -1);
    for (int y = 0; y < inc.target.size(); ++y) {
        if (preimage[y] >= 0) {
            theta[y] = preimage[y];
            continue;
        }
        int best = 0;
        for (int x = 1; x < inc.source.size(); ++x)
            if (inc.target(y, inc.injection[x]).value() <
                inc.target(y, inc.injection[best]).value())
                best = x;
        theta[y] = best;
    }
    return theta;
}

/// One tested scale of an interleaving diagram.  `shifted` is m*(s+2r).
/// `excision_ok` is meaningful only for certificates over neighborhood
/// systems, where the wedge-side components must mirror the colimit side.
template <typename S>
struct ScaleRecord {
    S s;
    S shifted;
    bool upper_ok = false;
    bool lower_ok = false;
    bool excision_ok = true;
};

/// Certificate for the scale-shifted interleaving between the component
/// filtrations of an inclusion: the compression factor m, radius r, the
/// retraction theta, and per-scale triangle verdicts at the component level.
template <typename S>
struct InterleavingCertificate {
    S m{1};
    S r{0};
    std::vector<int> theta;  // target index -> source index

    bool theta_ok = false;       // theta o i = id and displacements <= r
    bool bound_ok = false;       // d_E(theta y1, theta y2) <= m (d_F(y1,y2) + 2r)
    bool contiguity_ok = false;  // sampled subsets sigma u i(theta(sigma)) stay bounded
    std::vector<ScaleRecord<S>> scales;
    bool verdict = false;

    std::vector<std::string> source_points;
    std::vector<std::string> target_points;
};

/// The scales worth testing: component verdicts are piecewise constant
/// between critical values, so we take both critical sets, their images
/// under s -> m(s+2r), and 0.
template <typename S>
std::vector<S> interleaving_scale_grid(const EpMetric<S>& source, const EpMetric<S>& target,
                                       const S& m, const S& r) {
    std::vector<S> base = critical_values(source);
    for (const S& v : critical_values(target)) base.push_back(v);
    std::vector<S> grid = base;
    grid.push_back(S(0));
    for (const S& v : base) grid.push_back(S(m * S(v + S(r + r))));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

namespace detail {

/// Component partitions of one metric at each requested scale, computed once.
template <typename S>
std::map<S, Partition> partition_table(const EpMetric<S>& m, const std::vector<S>& scales) {
    std::map<S, Partition> table;
    for (const S& s : scales)
        if (!table.count(s)) table.insert({s, components_at(m, s)});
    return table;
}

}  // namespace detail

/// Verifies the interleaving diagrams with an explicitly supplied m, r and
/// theta (the seam used by fault-injection tests).  Nothing throws on a bad
/// certificate; failures land in the verdict fields.
template <typename S>
InterleavingCertificate<S> verify_interleaving_with(const InclusionData<S>& inc, const S& m,
                                                    const S& r, const std::vector<int>& theta,
                                                    const std::vector<S>& scales) {
    InterleavingCertificate<S> cert;
    cert.m = m;
    cert.r = r;
    cert.theta = theta;
    cert.source_points = inc.source.points;
    cert.target_points = inc.target.points;

    const int ne = inc.source.size();
    const int nf = inc.target.size();

    if (static_cast<int>(theta.size()) != nf)
        throw StructuralError("theta must assign a source point to every target point");
    for (int t : theta)
        if (t < 0 || t >= ne) throw StructuralError("theta value out of range");

    // theta o i = id, and every displacement stays within r
    bool theta_retracts = true;
    for (int x = 0; x < ne; ++x)
        if (theta[inc.injection[x]] != x) theta_retracts = false;
    bool displacements_ok = true;
    for (int y = 0; y < nf; ++y)
        if (!approx_leq(inc.target(y, inc.injection[theta[y]]), Extended<S>(r)))
            displacements_ok = false;
    cert.theta_ok = theta_retracts && displacements_ok;

    // global displaced-diameter bound, the engine behind every triangle
    cert.bound_ok = true;
    for (int y1 = 0; y1 < nf && cert.bound_ok; ++y1)
        for (int y2 = y1 + 1; y2 < nf; ++y2) {
            const auto& df = inc.target(y1, y2);
            if (!df.is_finite()) continue;
            Extended<S> lhs = inc.source.dist(theta[y1], theta[y2]);
            Extended<S> rhs(S(m * S(df.value() + S(r + r))));
            if (!approx_leq(lhs, rhs)) {
                cert.bound_ok = false;
                break;
            }
        }

    // shifted scales, precomputed partitions
    std::vector<S> all_scales = scales;
    std::map<S, S> shifted_of;
    for (const S& s : scales) {
        S sh(m * S(s + S(r + r)));
        shifted_of.insert({s, sh});
        all_scales.push_back(sh);
    }
    std::sort(all_scales.begin(), all_scales.end());
    all_scales.erase(std::unique(all_scales.begin(), all_scales.end()), all_scales.end());
    auto pe = detail::partition_table(inc.source, all_scales);
    auto pf = detail::partition_table(inc.target, all_scales);

    cert.contiguity_ok = true;
    bool all_scales_ok = true;
    for (const S& s : scales) {
        const S& sh = shifted_of.at(s);
        const Partition& pe_s = pe.at(s);
        const Partition& pe_sh = pe.at(sh);
        const Partition& pf_sh = pf.at(sh);

        ScaleRecord<S> rec;
        rec.s = s;
        rec.shifted = sh;

        // upper triangle: theta(i(x)) = x, and the shift map of the source is
        // a genuine coarsening
        rec.upper_ok = theta_retracts && refines(pe_s, pe_sh);

        // lower triangle at the component level: y and i(theta(y)) merge by
        // the shifted scale
        rec.lower_ok = true;
        for (int y = 0; y < nf; ++y)
            if (!pf_sh.same_block(y, inc.injection[theta[y]])) {
                rec.lower_ok = false;
                break;
            }

        // contiguity spot check: for every qualifying pair sigma = {y1,y2},
        // sigma u i(theta(sigma)) has diameter within the shifted scale
        for (int y1 = 0; y1 < nf && cert.contiguity_ok; ++y1)
            for (int y2 = y1; y2 < nf; ++y2) {
                if (!within_scale(inc.target(y1, y2), Extended<S>(s))) continue;
                const int iy1 = inc.injection[theta[y1]];
                const int iy2 = inc.injection[theta[y2]];
                const int pts[4] = {y1, y2, iy1, iy2};
                bool ok = true;
                for (int a = 0; a < 4 && ok; ++a)
                    for (int b = a + 1; b < 4; ++b)
                        if (!within_scale(inc.target(pts[a], pts[b]), Extended<S>(sh))) {
                            ok = false;
                            break;
                        }
                if (!ok) {
                    cert.contiguity_ok = false;
                    break;
                }
            }

        all_scales_ok = all_scales_ok && rec.upper_ok && rec.lower_ok;
        cert.scales.push_back(rec);
    }

    cert.verdict =
        cert.theta_ok && cert.bound_ok && cert.contiguity_ok && all_scales_ok;
    return cert;
}

/// Verifies the interleaving for an inclusion of metric spaces, computing m,
/// r (the covering radius) and theta from the data.  Throws DomainError when
/// the morphism hypothesis fails.
template <typename S>
InterleavingCertificate<S> verify_poset_interleaving(const InclusionData<S>& inc,
                                                     const std::vector<S>& scales) {
    const S m = compression_factor(inc);
    const S r = covering_radius(inc);
    const std::vector<int> theta = theta_map(inc, r);
    return verify_interleaving_with(inc, m, r, theta, scales);
}

template <typename S>
InterleavingCertificate<S> verify_poset_interleaving(const InclusionData<S>& inc) {
    const S m = compression_factor(inc);
    const S r = covering_radius(inc);
    const std::vector<int> theta = theta_map(inc, r);
    return verify_interleaving_with(inc, m, r, theta,
                                    interleaving_scale_grid(inc.source, inc.target, m, r));
}

/// End-to-end stability certificate for an inclusion of neighborhood
/// systems, on one global component E of the source colimit metric.  The
/// component filtrations are verified twice: on the colimit metrics and on
/// the wedge-of-stars side (pulled back through the excision bijection);
/// the per-scale excision_ok fields record that the two sides agree.
/// Throws CompatibilityError when the neighborhood systems are not
/// compatible along the injection.
template <typename S>
InterleavingCertificate<S> umap_stability_certificate(const NeighborhoodSystem<S>& ns_source,
                                                      const NeighborhoodSystem<S>& ns_target,
                                                      const std::vector<int>& injection,
                                                      const std::vector<int>& component) {
    auto compat = inclusion_compatible(ns_source, ns_target, injection);
    if (!compat.compatible) throw CompatibilityError(compat.violations);
    if (component.empty()) throw StructuralError("component selection is empty");

    const EpMetric<S> dx = umap_metric(ns_source);
    const EpMetric<S> dy = umap_metric(ns_target);

    const GlobalPartition gy = global_components(dy);
    const std::vector<int>& e_global = component;
    const std::vector<int>& f_global = gy.blocks[gy.block_of[injection[e_global.front()]]];
    for (int e : e_global)
        if (!gy.same_block(injection[e], f_global.front()))
            throw StructuralError("image of the component is not contained in one component");

    EpMetric<S> em = restrict_component(dx, e_global);
    EpMetric<S> fm = restrict_component(dy, f_global);

    // local injection E -> F
    std::vector<int> inj_local(e_global.size(), -1);
    for (std::size_t t = 0; t < e_global.size(); ++t) {
        const int target_global = injection[e_global[t]];
        auto it = std::lower_bound(f_global.begin(), f_global.end(), target_global);
        inj_local[t] = static_cast<int>(it - f_global.begin());
    }

    InclusionData<S> inc = make_inclusion(std::move(em), std::move(fm), std::move(inj_local));
    const S m = compression_factor(inc);
    const S r = covering_radius(inc);
    const std::vector<int> theta = theta_map(inc, r);
    const std::vector<S> grid = interleaving_scale_grid(inc.source, inc.target, m, r);

    InterleavingCertificate<S> cert = verify_interleaving_with(inc, m, r, theta, grid);

    // wedge-side verification through the excision bijection
    std::vector<S> all_scales;
    for (const auto& rec : cert.scales) {
        all_scales.push_back(rec.s);
        all_scales.push_back(rec.shifted);
    }
    std::sort(all_scales.begin(), all_scales.end());
    all_scales.erase(std::unique(all_scales.begin(), all_scales.end()), all_scales.end());

    std::map<S, Partition> we, wf, ce, cf;
    for (const S& s : all_scales) {
        we.insert({s, restrict_partition(wedge_components_at(ns_source, s), e_global)});
        wf.insert({s, restrict_partition(wedge_components_at(ns_target, s), f_global)});
        ce.insert({s, components_at(inc.source, s)});
        cf.insert({s, components_at(inc.target, s)});
    }

    const int ne = inc.source.size();
    const int nf = inc.target.size();
    for (auto& rec : cert.scales) {
        const Partition& we_s = we.at(rec.s);
        const Partition& we_sh = we.at(rec.shifted);
        const Partition& wf_s = wf.at(rec.s);
        const Partition& wf_sh = wf.at(rec.shifted);

        bool upper_w = refines(we_s, we_sh);
        for (int x = 0; x < ne && upper_w; ++x)
            if (theta[inc.injection[x]] != x) upper_w = false;
        bool lower_w = true;
        for (int y = 0; y < nf; ++y)
            if (!wf_sh.same_block(y, inc.injection[theta[y]])) {
                lower_w = false;
                break;
            }

        rec.excision_ok = we_s == ce.at(rec.s) && we_sh == ce.at(rec.shifted) &&
                          wf_s == cf.at(rec.s) && wf_sh == cf.at(rec.shifted) &&
                          upper_w == rec.upper_ok && lower_w == rec.lower_ok;
        if (!rec.excision_ok) cert.verdict = false;
    }
    return cert;
}

}  // namespace umapstab
