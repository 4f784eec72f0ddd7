#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "umapstab/ep_metric.hpp"
#include "umapstab/neighborhood.hpp"
#include "umapstab/rips.hpp"
#include "umapstab/stability.hpp"

namespace umapstab {

// nlohmann::json keeps object keys in std::map order, so serialized output
// is byte-deterministic; all scalar values are emitted as formatted strings.
using Json = nlohmann::json;

namespace io {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (!t.empty()) lines.push_back(t);
    }
    return lines;
}

template <typename S>
Extended<S> parse_extended(const std::string& token) {
    if (token == "inf") return Extended<S>::infinity();
    return Extended<S>(ScalarTraits<S>::parse(token));
}

template <typename S>
std::string format_extended(const Extended<S>& v) {
    return v.is_finite() ? ScalarTraits<S>::format(v.value()) : "inf";
}

}  // namespace io

/// Distance-matrix CSV: first row lists the point identifiers in total
/// order; each following row holds one matrix row, entries numeric or the
/// literal `inf`.
template <typename S>
EpMetric<S> load_distance_csv(const std::filesystem::path& path) {
    auto lines = io::read_lines(path);
    if (lines.empty()) throw StructuralError("empty distance file '" + path.string() + "'");
    std::vector<std::string> ids = io::split_csv_line(lines[0]);
    const int n = static_cast<int>(ids.size());
    if (static_cast<int>(lines.size()) != n + 1)
        throw StructuralError("distance file '" + path.string() + "' must have " +
                              std::to_string(n) + " data rows");
    typename EpMetric<S>::DistMatrix dist(n, n);
    for (int i = 0; i < n; ++i) {
        auto fields = io::split_csv_line(lines[i + 1]);
        if (static_cast<int>(fields.size()) != n)
            throw StructuralError("row " + std::to_string(i + 1) + " of '" + path.string() +
                                  "' has " + std::to_string(fields.size()) + " entries, expected " +
                                  std::to_string(n));
        for (int j = 0; j < n; ++j) {
            try {
                dist(i, j) = io::parse_extended<S>(fields[j]);
            } catch (const Error& e) {
                throw StructuralError("bad entry at row " + std::to_string(i + 1) + ", column " +
                                      std::to_string(j + 1) + " of '" + path.string() +
                                      "': " + e.what());
            }
        }
    }
    return make_ep_metric<S>(std::move(ids), std::move(dist));
}

/// Points CSV: one point per row as `id,coord1,coord2,...`; the total order
/// is the order of appearance.  Coordinates must be finite numbers.
template <typename S>
struct PointCloud {
    std::vector<std::string> ids;
    std::vector<std::vector<S>> coords;
};

template <typename S>
PointCloud<S> load_points_csv(const std::filesystem::path& path) {
    auto lines = io::read_lines(path);
    if (lines.empty()) throw StructuralError("empty points file '" + path.string() + "'");
    PointCloud<S> cloud;
    std::size_t dim = 0;
    for (std::size_t row = 0; row < lines.size(); ++row) {
        auto fields = io::split_csv_line(lines[row]);
        if (fields.size() < 2)
            throw StructuralError("row " + std::to_string(row + 1) + " of '" + path.string() +
                                  "' needs an identifier and at least one coordinate");
        if (row == 0) dim = fields.size() - 1;
        if (fields.size() - 1 != dim)
            throw StructuralError("row " + std::to_string(row + 1) + " of '" + path.string() +
                                  "' has inconsistent dimension");
        cloud.ids.push_back(fields[0]);
        std::vector<S> c;
        for (std::size_t t = 1; t < fields.size(); ++t) {
            if (fields[t] == "inf")
                throw StructuralError("coordinate at row " + std::to_string(row + 1) + " of '" +
                                      path.string() + "' is not finite");
            try {
                c.push_back(ScalarTraits<S>::parse(fields[t]));
            } catch (const Error& e) {
                throw StructuralError("bad coordinate at row " + std::to_string(row + 1) +
                                      " of '" + path.string() + "': " + e.what());
            }
        }
        cloud.coords.push_back(std::move(c));
    }
    return cloud;
}

enum class PointMetric { euclidean, manhattan };

/// Pairwise distances of a point cloud.  Euclidean needs square roots and is
/// rejected in rational mode; manhattan is exact in both modes.
template <typename S>
EpMetric<S> point_cloud_metric(const PointCloud<S>& cloud, PointMetric metric) {
    if (metric == PointMetric::euclidean && ScalarTraits<S>::exact)
        throw ParameterError("euclidean distances are irrational; use manhattan in rational mode");
    const int n = static_cast<int>(cloud.ids.size());
    typename EpMetric<S>::DistMatrix dist(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            S acc(0);
            for (std::size_t d = 0; d < cloud.coords[i].size(); ++d) {
                S diff(cloud.coords[i][d] - cloud.coords[j][d]);
                if (metric == PointMetric::manhattan)
                    acc = S(acc + ScalarTraits<S>::abs(diff));
                else
                    acc = S(acc + S(diff * diff));
            }
            if (metric == PointMetric::euclidean) {
                if constexpr (!ScalarTraits<S>::exact) acc = std::sqrt(acc);
            }
            dist(i, j) = Extended<S>(acc);
        }
    return make_ep_metric<S>(cloud.ids, std::move(dist));
}

/// Neighborhood-system JSON: {"points": [...], "neighbors": {id: [id,...]},
/// "weights": {id: [w,...]}}.  Weights are optional; in rational mode
/// non-integer weights must be strings so no precision is lost.
template <typename S>
NeighborhoodSystem<S> load_neighborhood_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open '" + path.string() + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const std::exception& e) {
        throw StructuralError("bad JSON in '" + path.string() + "': " + e.what());
    }
    if (!doc.contains("points") || !doc["points"].is_array())
        throw StructuralError("'" + path.string() + "' needs a points array");

    NeighborhoodSystem<S> ns;
    for (const Json& p : doc["points"]) ns.points.push_back(p.get<std::string>());
    const int n = ns.size();
    if (n == 0) throw StructuralError("point set must be nonempty");
    ns.neighbors.resize(n);

    auto parse_weight = [&](const Json& v) -> S {
        if (v.is_string()) return ScalarTraits<S>::parse(v.get<std::string>());
        if (v.is_number_integer()) return S(static_cast<long>(v.get<long long>()));
        if (v.is_number_float()) {
            if (ScalarTraits<S>::exact)
                throw ParameterError(
                    "rational mode requires string-encoded weights (got a JSON float)");
            return S(v.get<double>());
        }
        throw StructuralError("weight entries must be numbers or strings");
    };

    if (doc.contains("neighbors")) {
        for (const auto& item : doc["neighbors"].items()) {
            const std::string& id = item.key();
            const Json& list = item.value();
            int x = ns.index_of(id);
            if (x < 0) throw StructuralError("unknown point '" + id + "' in neighbors");
            for (const Json& nb : list) {
                const std::string nb_id = nb.get<std::string>();
                int y = ns.index_of(nb_id);
                if (y < 0)
                    throw StructuralError("unknown neighbor '" + nb_id + "' of '" + id + "'");
                ns.neighbors[x].push_back(y);
            }
        }
    }
    if (doc.contains("weights") && !doc["weights"].empty()) {
        ns.weights.assign(n, {});
        for (const auto& item : doc["weights"].items()) {
            const std::string& id = item.key();
            const Json& list = item.value();
            int x = ns.index_of(id);
            if (x < 0) throw StructuralError("unknown point '" + id + "' in weights");
            for (const Json& w : list) ns.weights[x].push_back(parse_weight(w));
        }
        for (int x = 0; x < n; ++x)
            if (ns.weights[x].size() != ns.neighbors[x].size())
                throw StructuralError("weight list of '" + ns.points[x] +
                                      "' does not match its neighbor list");
    }
    return ns;
}

/// Inclusion CSV: one `source-id,target-id` pair per line.  Returns the
/// injection as source-index -> target-index.
template <typename S>
std::vector<int> load_inclusion_csv(const std::filesystem::path& path,
                                    const NeighborhoodSystem<S>& source,
                                    const NeighborhoodSystem<S>& target) {
    auto lines = io::read_lines(path);
    std::vector<int> injection(source.size(), -1);
    for (const auto& line : lines) {
        auto fields = io::split_csv_line(line);
        if (fields.size() != 2)
            throw StructuralError("inclusion file lines must be 'x-id,y-id'");
        int x = source.index_of(fields[0]);
        int y = target.index_of(fields[1]);
        if (x < 0) throw StructuralError("unknown source point '" + fields[0] + "'");
        if (y < 0) throw StructuralError("unknown target point '" + fields[1] + "'");
        if (injection[x] >= 0) throw StructuralError("point '" + fields[0] + "' mapped twice");
        injection[x] = y;
    }
    for (int x = 0; x < source.size(); ++x)
        if (injection[x] < 0)
            throw StructuralError("point '" + source.points[x] + "' is not mapped");
    return injection;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline Json blocks_json(const Partition& p, const std::vector<std::string>& points) {
    Json blocks = Json::array();
    for (const auto& block : p.blocks) {
        Json b = Json::array();
        for (int e : block) b.push_back(points[e]);
        blocks.push_back(b);
    }
    return blocks;
}

template <typename S>
Json dendrogram_json(const Filtration<S>& f, const std::vector<std::string>& points) {
    Json merges = Json::array();
    for (const auto& m : f.merges)
        merges.push_back(Json{{"absorbed", points[m.absorbed]},
                              {"into", points[m.into]},
                              {"s", ScalarTraits<S>::format(m.scale)}});
    Json roots = Json::array();
    for (int r : f.roots) roots.push_back(points[r]);
    return Json{{"merges", merges}, {"roots", roots}};
}

template <typename S>
Json partitions_json(const Filtration<S>& f, const std::vector<std::string>& points) {
    Json parts = Json::array();
    for (std::size_t t = 0; t < f.criticals.size(); ++t)
        parts.push_back(Json{{"blocks", blocks_json(f.partitions[t], points)},
                             {"s", ScalarTraits<S>::format(f.criticals[t])}});
    return Json{{"partitions", parts}};
}

inline Json betti_json(const BettiReport& report) {
    Json betti = Json::array();
    for (long long b : report.betti) betti.push_back(b);
    return Json{{"betti", betti}, {"chi", report.chi}};
}

template <typename S>
Json excision_json(const ExcisionReport<S>& report, const std::vector<std::string>& points) {
    Json diffs = Json::array();
    for (const auto& d : report.diffs)
        diffs.push_back(Json{{"colimit", blocks_json(d.colimit, points)},
                             {"s", ScalarTraits<S>::format(d.scale)},
                             {"wedge", blocks_json(d.wedge, points)}});
    return Json{{"diffs", diffs},
                {"scales_checked", report.scales_checked.size()},
                {"verdict", report.ok}};
}

template <typename S>
Json certificate_json(const InterleavingCertificate<S>& cert) {
    Json theta = Json::object();
    for (std::size_t y = 0; y < cert.theta.size(); ++y)
        theta[cert.target_points[y]] = cert.source_points[cert.theta[y]];
    Json scales = Json::array();
    for (const auto& rec : cert.scales)
        scales.push_back(Json{{"excision_ok", rec.excision_ok},
                              {"lower_ok", rec.lower_ok},
                              {"s", ScalarTraits<S>::format(rec.s)},
                              {"shifted", ScalarTraits<S>::format(rec.shifted)},
                              {"upper_ok", rec.upper_ok}});
    return Json{{"bound_ok", cert.bound_ok},
                {"component", cert.source_points},
                {"contiguity_ok", cert.contiguity_ok},
                {"m", ScalarTraits<S>::format(cert.m)},
                {"metadata",
                 Json{{"mode", ScalarTraits<S>::name()},
                      {"radius_convention",
                       "non-strict: d(y, i(theta(y))) <= r with r the max-min covering radius"}}},
                {"r", ScalarTraits<S>::format(cert.r)},
                {"scales", scales},
                {"theta", theta},
                {"theta_ok", cert.theta_ok},
                {"verdict", cert.verdict}};
}

/// Writes JSON with 2-space indentation and a trailing newline, atomically
/// (write to a temporary in the same directory, then rename).
inline void write_json_atomic(const std::filesystem::path& path, const Json& doc) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw StructuralError("cannot write '" + tmp.string() + "'");
        out << doc.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace umapstab
