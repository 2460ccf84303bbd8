#ifndef GQSB_PIPELINE_HPP
#define GQSB_PIPELINE_HPP

// Scenario configuration, the end-to-end pipeline (classify, certify,
// simulate, predict) and its JSON report.
//
// Reports are deterministic: keys keep insertion order and every float is
// rounded to 15 significant digits before serialization.

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"

#include "gqsb/dynamics.hpp"
#include "gqsb/error.hpp"
#include "gqsb/io.hpp"
#include "gqsb/operators.hpp"
#include "gqsb/signed_graph.hpp"
#include "gqsb/spectral.hpp"

namespace gqsb {

inline constexpr const char* tool_version = "0.1.0";

struct ScenarioConfig {
    std::filesystem::path network_path;  // ignored when use_dataset is set
    bool use_dataset = false;
    std::vector<NodeId> dominant_nodes;
    double gamma = 2.0;
    std::optional<EdgeWeights> weights;  // relabel magnitudes by edge class
    std::optional<std::vector<double>> x0;
    std::uint64_t seed = 1;  // x0 ~ U[-1, 1]^n when x0 is absent
    IntegratorOptions integrator;
    bool simulate = true;
};

// Highland Tribes signs relabeled with config.weights (default 10 / -1 / -10)
// relative to the bipartition induced by the dominant nodes.
inline SignedGraph load_highland(const ScenarioConfig& config) {
    const SignedGraph signs = load_highland_signs();
    const Bipartition b = induced_bipartition(signs, config.dominant_nodes);
    return relabel_weights(signs, b, config.weights.value_or(EdgeWeights{}));
}

struct Provenance {
    std::string tool_version;
    std::string network_source;
    std::string network_sha256;
    std::optional<std::uint64_t> seed;  // set when x0 was drawn
};

struct Report {
    SignedGraph graph;
    BalanceClass classification = BalanceClass::UnbalancedSigned;
    std::size_t positive_components = 0;
    std::optional<std::uint64_t> bipartition_count;  // empty on 64-bit overflow
    Bipartition bipartition;
    double gamma = 1.0;
    PolarizationCertificate certificate;
    Vector x0;
    std::optional<Trajectory> trajectory;
    std::optional<OutcomeReport> outcome;
    std::optional<Vector> prediction;
    Provenance provenance;
};

inline std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoError, "sha256 failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int k = 0; k < len; ++k) {
        std::snprintf(buf, sizeof buf, "%02x", digest[k]);
        hex += buf;
    }
    return hex;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Vector seeded_initial_state(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Vector x(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = unit(rng);
    return x;
}

inline Report run_pipeline(const ScenarioConfig& config) {
    const auto source = config.use_dataset ? highland_dataset_path() : config.network_path;
    const std::string bytes = read_file(source);
    SignedGraph g = config.use_dataset ? load_highland(config) : load_network(source);
    Bipartition b = induced_bipartition(g, config.dominant_nodes);
    if (config.weights && !config.use_dataset) g = relabel_weights(g, b, *config.weights);

    const OperatorBundle bundle = generalized_laplacian(g, b, config.gamma);
    PolarizationCertificate cert = certify(g, bundle);

    Vector x0;
    std::optional<std::uint64_t> seed;
    if (config.x0) {
        if (config.x0->size() != g.node_count()) {
            throw Error(ErrorCode::DimensionMismatch, "x0 has " + std::to_string(config.x0->size()) +
                                                          " entries for " +
                                                          std::to_string(g.node_count()) + " nodes");
        }
        x0 = Eigen::Map<const Vector>(config.x0->data(), static_cast<Eigen::Index>(config.x0->size()));
    } else {
        x0 = seeded_initial_state(g.node_count(), config.seed);
        seed = config.seed;
    }

    std::optional<Trajectory> traj;
    std::optional<OutcomeReport> outcome;
    if (config.simulate) {
        traj = integrate(bundle, x0, config.integrator);
        outcome = assess(*traj, b, config.gamma);
    }
    std::optional<Vector> prediction;
    if (cert.verdict == Verdict::AsymmetricPolarization) prediction = predict_final(bundle, cert, x0);

    const std::size_t p = positive_component_count(g);
    return Report{g,
                  classify(g),
                  p,
                  gqsb_bipartition_count(p),
                  std::move(b),
                  config.gamma,
                  std::move(cert),
                  std::move(x0),
                  std::move(traj),
                  outcome,
                  std::move(prediction),
                  Provenance{tool_version, source.string(), sha256_hex(bytes), seed}};
}

// 0 on success, 2 when the certificate is Inconclusive or Divergence.
inline int verdict_exit_code(Verdict v) {
    return (v == Verdict::Inconclusive || v == Verdict::Divergence) ? 2 : 0;
}

// ---- JSON ------------------------------------------------------------------

using Json = nlohmann::ordered_json;

inline double round15(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

inline Json to_json(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round15(v);
}

inline Json to_json(const Vector& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(to_json(v(i)));
    return arr;
}

inline Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vector(m.row(i).transpose())));
    return rows;
}

inline Json to_json(const std::vector<Edge>& edges) {
    Json arr = Json::array();
    for (const Edge& e : edges) arr.push_back(Json::array({e.i, e.j, to_json(e.w)}));
    return arr;
}

inline Json to_json(const Bipartition& b) {
    return Json{{"v1", b.members(Side::V1)}, {"v2", b.members(Side::V2)}};
}

inline Json to_json(const PolarizationCertificate& c) {
    Json j;
    j["verdict"] = to_string(c.verdict);
    j["connected"] = c.connected;
    j["gamma"] = to_json(c.gamma);
    j["spectrum"] = to_json(c.spectrum);
    j["zero_multiplicity"] = c.zero_multiplicity;
    j["zero_tol"] = to_json(c.zero_tol);
    j["forest_edges"] = to_json(c.forest_edges);
    j["resistance"] = to_json(c.resistance);
    j["resistance_min_eig"] = c.resistance_min_eig ? to_json(*c.resistance_min_eig) : Json(nullptr);
    j["resistance_positive_definite"] = c.resistance_positive_definite();
    j["null_right"] = to_json(c.null_right);
    j["null_left"] = to_json(c.null_left);
    return j;
}

inline Json to_json(const OutcomeReport& o) {
    return Json{{"kind", to_string(o.kind)},
                {"v1_value", to_json(o.v1_value)},
                {"v2_value", to_json(o.v2_value)},
                {"ratio", to_json(o.ratio)},
                {"defect", to_json(o.defect)}};
}

inline Json to_json(const Report& r) {
    Json j;
    j["classification"] = to_string(r.classification);
    j["nodes"] = r.graph.node_count();
    j["edges"] = r.graph.edge_count();
    j["positive_components"] = r.positive_components;
    if (r.bipartition_count) {
        j["bipartition_count"] = *r.bipartition_count;
    } else {
        j["bipartition_count"] = "2^" + std::to_string(r.positive_components - 1) + "-1";
    }
    j["bipartition"] = to_json(r.bipartition);
    j["gamma"] = to_json(r.gamma);
    j["certificate"] = to_json(r.certificate);
    j["x0"] = to_json(r.x0);
    if (r.trajectory) {
        j["simulation"] = Json{{"termination", to_string(r.trajectory->terminated)},
                               {"dt", to_json(r.trajectory->dt)},
                               {"steps", r.trajectory->steps},
                               {"t_final", to_json(r.trajectory->times.back())},
                               {"final_state", to_json(r.trajectory->final_state())}};
    } else {
        j["simulation"] = nullptr;
    }
    j["outcome"] = r.outcome ? to_json(*r.outcome) : Json(nullptr);
    j["prediction"] = r.prediction ? to_json(*r.prediction) : Json(nullptr);
    j["provenance"] = Json{{"tool_version", r.provenance.tool_version},
                           {"network_source", r.provenance.network_source},
                           {"network_sha256", r.provenance.network_sha256},
                           {"seed", r.provenance.seed ? Json(*r.provenance.seed) : Json(nullptr)}};
    return j;
}

inline std::string dump_report(const Report& r) { return to_json(r).dump(2) + "\n"; }

}  // namespace gqsb

#endif  // GQSB_PIPELINE_HPP
