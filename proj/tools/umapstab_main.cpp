// Batch front door for the library: dataset ingestion, clustering runs and
// the verification suites, with JSON file outputs.
//
// Exit status: 0 when everything passed, 1 when a requested verdict failed,
// 2 on structural/parameter/domain errors.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#include "umapstab/io.hpp"

namespace fs = std::filesystem;
using namespace umapstab;

namespace {

struct RunConfig {
    std::string input;
    std::string format = "points-csv";  // points-csv | distance-csv | neighborhood-json
    std::string metric = "euclidean";   // euclidean | manhattan
    int k = 1;
    std::string scheme = "ambient";  // ambient | scaled | shifted
    std::string floor = "1e-6";
    std::string mode = "float";  // float | rational
    int cap = 2;
    std::string ambient;  // optional distance-csv for weightless neighborhood files
    std::string out = ".";
};

WeightScheme parse_scheme(const std::string& s) {
    if (s == "ambient") return WeightScheme::ambient;
    if (s == "scaled") return WeightScheme::scaled;
    if (s == "shifted") return WeightScheme::shifted;
    throw ParameterError("unknown weight scheme '" + s + "'");
}

PointMetric parse_point_metric(const std::string& s) {
    if (s == "euclidean") return PointMetric::euclidean;
    if (s == "manhattan") return PointMetric::manhattan;
    throw ParameterError("unknown point metric '" + s + "'");
}

void check_config(const RunConfig& cfg) {
    if (cfg.k < 0) throw ParameterError("k must be nonnegative");
    if (cfg.cap < 1) throw ParameterError("cap must be at least 1");
    parse_scheme(cfg.scheme);
    parse_point_metric(cfg.metric);
}

std::string sanitize_filename(const std::string& id) {
    std::string out;
    for (char c : id)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out;
}

/// Ambient metric of the configured input; only defined for the two matrix-
/// bearing formats.
template <typename S>
EpMetric<S> load_ambient(const RunConfig& cfg) {
    if (cfg.format == "points-csv")
        return point_cloud_metric(load_points_csv<S>(cfg.input), parse_point_metric(cfg.metric));
    if (cfg.format == "distance-csv") return load_distance_csv<S>(cfg.input);
    throw ParameterError("this command needs a points-csv or distance-csv input");
}

/// Neighborhood system with weights, built per the configured format.
template <typename S>
NeighborhoodSystem<S> build_system(const RunConfig& cfg) {
    const S floor = ScalarTraits<S>::parse(cfg.floor);
    if (cfg.format == "neighborhood-json") {
        NeighborhoodSystem<S> ns = load_neighborhood_json<S>(cfg.input);
        if (ns.has_weights()) return ns;
        if (cfg.ambient.empty())
            throw ParameterError(
                "neighborhood file has no weights; provide --ambient <distance-csv> so the "
                "weight scheme can be applied");
        EpMetric<S> ambient = load_distance_csv<S>(cfg.ambient);
        if (ambient.points != ns.points)
            throw StructuralError("--ambient points do not match the neighborhood file");
        return weights(ns, ambient, parse_scheme(cfg.scheme), floor);
    }
    EpMetric<S> ambient = load_ambient<S>(cfg);
    auto violations = validate(ambient);
    if (!violations.empty())
        throw StructuralError("input is not a valid metric: " + violations.front().message);
    NeighborhoodSystem<S> ns = knn(ambient, cfg.k);
    return weights(ns, ambient, parse_scheme(cfg.scheme), floor);
}

template <typename S>
int cmd_cluster(const RunConfig& cfg) {
    NeighborhoodSystem<S> ns = build_system<S>(cfg);
    EpMetric<S> colimit = umap_metric(ns);
    Filtration<S> filtration = merge_tree(colimit);

    fs::create_directories(cfg.out);
    write_json_atomic(fs::path(cfg.out) / "dendrogram.json",
                      dendrogram_json(filtration, colimit.points));
    write_json_atomic(fs::path(cfg.out) / "partitions.json",
                      partitions_json(filtration, colimit.points));

    std::cout << "components at s=inf: " << global_components(colimit).blocks.size() << "\n";
    return 0;
}

template <typename S>
int verify_excision(const RunConfig& cfg) {
    NeighborhoodSystem<S> ns = build_system<S>(cfg);
    ExcisionReport<S> report = excision_check(ns);
    fs::create_directories(cfg.out);
    write_json_atomic(fs::path(cfg.out) / "excision_report.json", excision_json(report, ns.points));
    std::cout << "excision: " << (report.ok ? "PASS" : "FAIL") << " (" << report.scales_checked.size()
              << " scales)\n";
    return report.ok ? 0 : 1;
}

template <typename S>
int verify_remark5(const RunConfig& cfg) {
    EpMetric<S> ambient = load_ambient<S>(cfg);
    const int n = ambient.size();
    if (n > 6)
        throw ResourceError("the wedge-of-circles check is limited to 6 points (got " +
                            std::to_string(n) + ")");
    auto violations = validate(ambient);
    if (!violations.empty())
        throw StructuralError("input is not a valid metric: " + violations.front().message);

    // full neighborhoods: every other point is a neighbor
    NeighborhoodSystem<S> ns = knn(ambient, n - 1);
    ns = weights(ns, ambient, parse_scheme(cfg.scheme), ScalarTraits<S>::parse(cfg.floor));

    const int m = n - 1;
    LabeledComplex complex = wedge_complex(ns, Extended<S>::infinity(), std::max(1, m));
    BettiReport betti = betti_gf2(complex);

    const long long expected_chi = 1 - static_cast<long long>(m) * m;
    const long long expected_b1 = static_cast<long long>(m) * m;
    const long long b0 = betti.betti.empty() ? 0 : betti.betti[0];
    const long long b1 = betti.betti.size() > 1 ? betti.betti[1] : 0;
    const bool pass = betti.chi == expected_chi && b0 == 1 && b1 == expected_b1;

    Json doc = betti_json(betti);
    doc["expected_b0"] = 1;
    doc["expected_b1"] = expected_b1;
    doc["expected_chi"] = expected_chi;
    doc["m"] = m;
    doc["pass"] = pass;
    fs::create_directories(cfg.out);
    write_json_atomic(fs::path(cfg.out) / "remark5_report.json", doc);
    std::cout << "wedge-of-circles: " << (pass ? "PASS" : "FAIL") << " (chi=" << betti.chi
              << ", b1=" << b1 << ")\n";
    return pass ? 0 : 1;
}

template <typename S>
int cmd_verify(const RunConfig& cfg, const std::string& which) {
    int status = 0;
    if (which == "excision" || which == "all") status = std::max(status, verify_excision<S>(cfg));
    if (which == "remark5" || which == "all") status = std::max(status, verify_remark5<S>(cfg));
    if (which != "excision" && which != "remark5" && which != "all")
        throw ParameterError("unknown verification '" + which + "'");
    return status;
}

template <typename S>
int cmd_verify_stability(const RunConfig& cfg_x, const RunConfig& cfg_y,
                         const std::string& inclusion_path, const std::string& out) {
    NeighborhoodSystem<S> ns_x = build_system<S>(cfg_x);
    NeighborhoodSystem<S> ns_y = build_system<S>(cfg_y);
    std::vector<int> injection = load_inclusion_csv(inclusion_path, ns_x, ns_y);

    auto compat = inclusion_compatible(ns_x, ns_y, injection);
    if (!compat.compatible) {
        std::cerr << "error: incompatible neighborhood systems:\n";
        for (const auto& v : compat.violations) std::cerr << "  " << v.message << "\n";
        return 2;
    }

    fs::create_directories(out);
    const GlobalPartition components = global_components(umap_metric(ns_x));
    bool all_ok = true;
    for (const auto& block : components.blocks) {
        InterleavingCertificate<S> cert = umap_stability_certificate(ns_x, ns_y, injection, block);
        const std::string rep = ns_x.points[block.front()];
        write_json_atomic(fs::path(out) / ("certificate_" + sanitize_filename(rep) + ".json"),
                          certificate_json(cert));
        std::cout << "component " << rep << ": " << (cert.verdict ? "PASS" : "FAIL") << "\n";
        all_ok = all_ok && cert.verdict;
    }
    return all_ok ? 0 : 1;
}

void add_config_flags(CLI::App* cmd, RunConfig& cfg, const std::string& suffix = "") {
    cmd->add_option("--input" + suffix, cfg.input, "input file")->required();
    cmd->add_option("--format" + suffix, cfg.format,
                    "points-csv | distance-csv | neighborhood-json");
    cmd->add_option("--metric" + suffix, cfg.metric, "euclidean | manhattan (points-csv only)");
    cmd->add_option("--k" + suffix, cfg.k, "number of nearest neighbors");
    cmd->add_option("--scheme" + suffix, cfg.scheme, "ambient | scaled | shifted");
    cmd->add_option("--floor" + suffix, cfg.floor, "positive lower clamp for weights");
    cmd->add_option("--ambient" + suffix, cfg.ambient,
                    "distance-csv supplying ambient distances for weightless neighborhood files");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vietoris-Rips clustering hierarchies for neighborhood systems, with excision "
                 "and interleaving verification"};
    app.require_subcommand(1);

    RunConfig cfg, cfg_y;
    std::string which = "all";
    std::string inclusion_path, out_dir = ".";

    auto* cluster = app.add_subcommand("cluster", "merge tree and partitions of the colimit metric");
    add_config_flags(cluster, cfg);
    cluster->add_option("--mode", cfg.mode, "float | rational");
    cluster->add_option("--cap", cfg.cap, "maximum homology dimension");
    cluster->add_option("--out", cfg.out, "output directory");

    auto* verify = app.add_subcommand("verify", "excision and wedge-of-circles property suites");
    add_config_flags(verify, cfg);
    verify->add_option("--which", which, "excision | remark5 | all");
    verify->add_option("--mode", cfg.mode, "float | rational");
    verify->add_option("--cap", cfg.cap, "maximum homology dimension");
    verify->add_option("--out", cfg.out, "output directory");

    auto* stability = app.add_subcommand("verify-stability",
                                         "interleaving certificates for an inclusion of systems");
    add_config_flags(stability, cfg, "-x");
    add_config_flags(stability, cfg_y, "-y");
    stability->add_option("--inclusion", inclusion_path, "two-column CSV: x-id,y-id")->required();
    stability->add_option("--mode", cfg.mode, "float | rational");
    stability->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        check_config(cfg);
        const bool rational = cfg.mode == "rational";
        if (cfg.mode != "float" && cfg.mode != "rational")
            throw ParameterError("unknown mode '" + cfg.mode + "'");

        if (app.got_subcommand(cluster))
            return rational ? cmd_cluster<Rational>(cfg) : cmd_cluster<double>(cfg);
        if (app.got_subcommand(verify))
            return rational ? cmd_verify<Rational>(cfg, which) : cmd_verify<double>(cfg, which);
        if (app.got_subcommand(stability)) {
            check_config(cfg_y);
            cfg_y.mode = cfg.mode;
            return rational ? cmd_verify_stability<Rational>(cfg, cfg_y, inclusion_path, out_dir)
                            : cmd_verify_stability<double>(cfg, cfg_y, inclusion_path, out_dir);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
