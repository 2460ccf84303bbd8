// gqsb: command-line front end for signed-network balance classification,
// polarization certificates and generalized Laplacian flow simulation.
//
// Exit codes: 0 success, 1 error, 2 certificate verdict Inconclusive or
// Divergence.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "gqsb/gqsb.hpp"

namespace fs = std::filesystem;
using namespace gqsb;

namespace {

struct Options {
    std::string network;
    bool highland = false;
    std::string weights;
    std::string dominant;
    double gamma = 2.0;
    std::string x0_path;
    std::uint64_t seed = 1;
    double dt = 0.0;
    double tmax = 1e3;
    std::size_t stride = 1000;
    std::string out_dir;
    std::string format = "json";
    std::string gammas = "0.5,1,2,10";
    unsigned jobs = 0;
};

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
    std::vector<T> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        std::istringstream cell(item);
        T v{};
        if (!(cell >> v) || !(cell >> std::ws).eof()) {
            throw Error(ErrorCode::ParseError, std::string("bad ") + what + " entry '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

std::vector<double> read_x0(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::vector<double> x;
    std::string tok;
    while (in >> tok) {
        std::replace(tok.begin(), tok.end(), ',', ' ');
        std::istringstream cell(tok);
        double v;
        while (cell >> v) x.push_back(v);
    }
    return x;
}

ScenarioConfig make_config(const Options& o) {
    ScenarioConfig c;
    if (o.highland) {
        c.use_dataset = true;
    } else if (o.network.empty()) {
        throw Error(ErrorCode::IoError, "--network PATH or --highland is required");
    }
    c.network_path = o.network;
    if (!o.weights.empty()) {
        auto w = parse_list<double>(o.weights, "weight");
        if (w.size() != 3) throw Error(ErrorCode::ParseError, "--weights needs coop,intra_neg,inter_neg");
        c.weights = EdgeWeights{w[0], w[1], w[2]};
    }
    for (long long d : parse_list<long long>(o.dominant, "dominant node")) {
        if (d < 0) throw Error(ErrorCode::BadIndex, "negative dominant node id");
        c.dominant_nodes.push_back(static_cast<NodeId>(d));
    }
    c.gamma = o.gamma;
    if (!o.x0_path.empty()) c.x0 = read_x0(o.x0_path);
    c.seed = o.seed;
    if (o.dt > 0.0) c.integrator.dt = o.dt;
    else if (o.dt < 0.0) throw Error(ErrorCode::BadStep, "--dt must be > 0");
    c.integrator.t_max = o.tmax;
    c.integrator.store_stride = o.stride;
    return c;
}

SignedGraph load_graph(const Options& o) {
    if (o.highland) {
        auto signs = load_highland_signs();
        if (o.dominant.empty() && o.weights.empty()) return signs;
        return load_highland(make_config(o));
    }
    if (o.network.empty()) throw Error(ErrorCode::IoError, "--network PATH or --highland is required");
    return load_network(o.network);
}

void warn_gamma(double gamma) {
    if (gamma <= 1.0) {
        std::cerr << "warning: gamma = " << gamma
                  << " <= 1; V1 is not dominant (asymmetric polarization needs gamma > 1)\n";
    }
}

void emit(const Options& o, const std::string& filename, const std::string& text) {
    if (o.out_dir.empty()) {
        std::cout << text;
        return;
    }
    fs::create_directories(o.out_dir);
    const fs::path path = fs::path(o.out_dir) / filename;
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
    std::cerr << "wrote " << path.string() << '\n';
}

std::string fmt15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", round15(v));
    return buf;
}

int cmd_classify(const Options& o) {
    const SignedGraph g = load_graph(o);
    const std::size_t p = positive_component_count(g);
    Json j;
    j["classification"] = to_string(classify(g));
    j["nodes"] = g.node_count();
    j["edges"] = g.edge_count();
    j["positive_components"] = p;
    if (auto count = gqsb_bipartition_count(p)) {
        j["bipartition_count"] = *count;
    } else {
        j["bipartition_count"] = "2^" + std::to_string(p - 1) + "-1";
    }
    auto sb = is_structurally_balanced(g);
    auto qsb = is_qsb(g);
    j["sb_bipartition"] = sb ? to_json(*sb) : Json(nullptr);
    j["qsb_bipartition"] = qsb ? to_json(*qsb) : Json(nullptr);
    if (p <= 20) {
        j["condensed_chromatic_number"] = chromatic_number(condense_positive_components(g));
    } else {
        j["condensed_chromatic_number"] = nullptr;
    }
    if (o.format == "csv") {
        std::string csv = "key,value\n";
        for (auto it = j.begin(); it != j.end(); ++it) {
            std::string v = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
            if (v.find(',') != std::string::npos) v = "\"" + v + "\"";
            csv += it.key() + "," + v + "\n";
        }
        emit(o, "classify.csv", csv);
    } else {
        emit(o, "classify.json", j.dump(2) + "\n");
    }
    return 0;
}

int cmd_bipartitions(const Options& o) {
    const SignedGraph g = load_graph(o);
    const auto parts = enumerate_gqsb_bipartitions(g);
    if (o.format == "csv") {
        std::string csv = "index";
        for (NodeId i = 0; i < g.node_count(); ++i) csv += ",n" + std::to_string(i);
        csv += "\n";
        for (std::size_t k = 0; k < parts.size(); ++k) {
            csv += std::to_string(k);
            for (NodeId i = 0; i < g.node_count(); ++i) csv += parts[k].in_v1(i) ? ",1" : ",2";
            csv += "\n";
        }
        emit(o, "bipartitions.csv", csv);
    } else {
        Json arr = Json::array();
        for (const auto& b : parts) arr.push_back(to_json(b));
        emit(o, "bipartitions.json",
             Json{{"count", parts.size()}, {"bipartitions", arr}}.dump(2) + "\n");
    }
    return 0;
}

int cmd_spectrum(const Options& o) {
    const SignedGraph g = load_graph(o);
    std::vector<std::pair<std::string, Vector>> spectra = {
        {"repelling", sym_eigen(repelling_laplacian(g)).values},
        {"opposing", sym_eigen(opposing_laplacian(g)).values},
    };
    if (!o.dominant.empty()) {
        warn_gamma(o.gamma);
        const Bipartition b = induced_bipartition(g, make_config(o).dominant_nodes);
        spectra.emplace_back("generalized", sym_eigen(generalized_laplacian(g, b, o.gamma).laplacian_z).values);
    }
    if (o.format == "csv") {
        std::string csv = "operator,k,eigenvalue\n";
        for (const auto& [name, vals] : spectra) {
            for (Eigen::Index k = 0; k < vals.size(); ++k) {
                csv += name + "," + std::to_string(k) + "," + fmt15(vals(k)) + "\n";
            }
        }
        emit(o, "spectrum.csv", csv);
    } else {
        Json j;
        for (const auto& [name, vals] : spectra) j[name] = to_json(vals);
        emit(o, "spectrum.json", j.dump(2) + "\n");
    }
    return 0;
}

int cmd_certify(const Options& o) {
    warn_gamma(o.gamma);
    ScenarioConfig c = make_config(o);
    c.simulate = false;
    const Report r = run_pipeline(c);
    emit(o, "certificate.json", to_json(r.certificate).dump(2) + "\n");
    return verdict_exit_code(r.certificate.verdict);
}

int cmd_simulate(const Options& o) {
    warn_gamma(o.gamma);
    const Report r = run_pipeline(make_config(o));
    std::ostringstream csv;
    write_trajectory_csv(csv, *r.trajectory);
    Json j;
    j["verdict"] = to_string(r.certificate.verdict);
    j["termination"] = to_string(r.trajectory->terminated);
    j["steps"] = r.trajectory->steps;
    j["dt"] = to_json(r.trajectory->dt);
    j["outcome"] = to_json(*r.outcome);
    j["final_state"] = to_json(r.trajectory->final_state());
    if (o.format == "csv") {
        emit(o, "trajectory.csv", csv.str());
    } else {
        if (!o.out_dir.empty()) emit(o, "trajectory.csv", csv.str());
        emit(o, "outcome.json", j.dump(2) + "\n");
    }
    return verdict_exit_code(r.certificate.verdict);
}

int cmd_predict(const Options& o) {
    warn_gamma(o.gamma);
    ScenarioConfig c = make_config(o);
    c.simulate = false;
    const Report r = run_pipeline(c);
    if (const int code = verdict_exit_code(r.certificate.verdict); code != 0) {
        std::cerr << "no prediction: certificate verdict is " << to_string(r.certificate.verdict) << '\n';
        return code;
    }
    if (!r.prediction) {
        throw Error(ErrorCode::NotPolarizing,
                    std::string("certificate verdict is ") + to_string(r.certificate.verdict));
    }
    if (o.format == "csv") {
        std::string csv = "node,side,x0,x_final\n";
        for (NodeId i = 0; i < r.graph.node_count(); ++i) {
            const auto k = static_cast<Eigen::Index>(i);
            csv += std::to_string(i) + (r.bipartition.in_v1(i) ? ",V1," : ",V2,") + fmt15(r.x0(k)) +
                   "," + fmt15((*r.prediction)(k)) + "\n";
        }
        emit(o, "prediction.csv", csv);
    } else {
        Json j;
        j["gamma"] = to_json(r.gamma);
        j["x0"] = to_json(r.x0);
        j["prediction"] = to_json(*r.prediction);
        emit(o, "prediction.json", j.dump(2) + "\n");
    }
    return 0;
}

int cmd_report(const Options& o) {
    warn_gamma(o.gamma);
    const Report r = run_pipeline(make_config(o));
    emit(o, "report.json", dump_report(r));
    return verdict_exit_code(r.certificate.verdict);
}

// Independent scenarios over a list of γ, one report file per γ.
int cmd_sweep(const Options& o) {
    if (o.out_dir.empty()) throw Error(ErrorCode::IoError, "sweep needs --out DIR");
    const auto gammas = parse_list<double>(o.gammas, "gamma");
    const ScenarioConfig base = make_config(o);
    fs::create_directories(o.out_dir);

    std::vector<std::string> summary(gammas.size());
    std::vector<int> codes(gammas.size(), 0);
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < gammas.size(); k = next++) {
            try {
                ScenarioConfig c = base;
                c.gamma = gammas[k];
                const Report r = run_pipeline(c);
                const fs::path path = fs::path(o.out_dir) / ("report_gamma_" + fmt15(gammas[k]) + ".json");
                std::ofstream(path) << dump_report(r);
                codes[k] = verdict_exit_code(r.certificate.verdict);
                summary[k] = fmt15(gammas[k]) + "," + to_string(r.certificate.verdict) + "," +
                             (r.outcome ? to_string(r.outcome->kind) : "-") + "," +
                             (r.outcome ? fmt15(r.outcome->ratio) : "-");
            } catch (const std::exception& e) {
                std::lock_guard lock(err_mutex);
                std::cerr << "gamma " << gammas[k] << ": " << e.what() << '\n';
                codes[k] = 1;
                summary[k] = fmt15(gammas[k]) + ",error,-,-";
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned jobs = std::min<unsigned>(o.jobs ? o.jobs : hw, static_cast<unsigned>(gammas.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::cout << "gamma,verdict,outcome,ratio\n";
    for (const auto& line : summary) std::cout << line << '\n';
    return *std::max_element(codes.begin(), codes.end());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Signed-network balance, polarization certificates and generalized Laplacian flows"};
    app.require_subcommand(1);
    Options o;

    auto add_network = [&](CLI::App* sub) {
        sub->add_option("--network", o.network, "Edge-list file (\"n m\" header, then \"i j w\")");
        sub->add_flag("--highland", o.highland, "Use the bundled Highland Tribes dataset");
        sub->add_option("--weights", o.weights,
                        "Relabel weights as coop,intra_neg,inter_neg (e.g. 10,-1,-10)");
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", o.out_dir, "Write output files into DIR instead of stdout");
    };
    auto add_scenario = [&](CLI::App* sub, bool dominant_required) {
        add_network(sub);
        auto* dom = sub->add_option("--dominant", o.dominant, "Dominant node ids, e.g. \"0,1\"");
        if (dominant_required) dom->required();
        sub->add_option("--gamma", o.gamma, "Dominance coefficient (> 0)")->capture_default_str();
    };
    auto add_dynamics = [&](CLI::App* sub) {
        auto* x0 = sub->add_option("--x0", o.x0_path, "Initial opinions file (whitespace or comma separated)");
        sub->add_option("--seed", o.seed, "Seed for x0 ~ U[-1,1] when --x0 is absent")
            ->capture_default_str()
            ->excludes(x0);
        sub->add_option("--dt", o.dt, "RK4 step (default 1e-3 / lambda_max)");
        sub->add_option("--tmax", o.tmax, "Integration horizon")->capture_default_str();
        sub->add_option("--stride", o.stride, "Store every k-th step")->capture_default_str();
    };

    auto* classify_cmd = app.add_subcommand("classify", "SB / QSB / GQSB classification");
    add_network(classify_cmd);
    classify_cmd->add_option("--dominant", o.dominant, "Used only with --highland --weights");
    auto* bip_cmd = app.add_subcommand("bipartitions", "Enumerate all GQSB bipartitions");
    add_network(bip_cmd);
    auto* spec_cmd = app.add_subcommand("spectrum", "Spectra of L_r, L_o and (with --dominant) L_g");
    add_scenario(spec_cmd, false);
    auto* cert_cmd = app.add_subcommand("certify", "Effective-resistance polarization certificate");
    add_scenario(cert_cmd, true);
    add_dynamics(cert_cmd);
    auto* sim_cmd = app.add_subcommand("simulate", "Integrate the generalized Laplacian flow");
    add_scenario(sim_cmd, true);
    add_dynamics(sim_cmd);
    auto* pred_cmd = app.add_subcommand("predict", "Closed-form final opinions");
    add_scenario(pred_cmd, true);
    add_dynamics(pred_cmd);
    auto* rep_cmd = app.add_subcommand("report", "Full JSON report");
    add_scenario(rep_cmd, true);
    add_dynamics(rep_cmd);
    auto* sweep_cmd = app.add_subcommand("sweep", "Run one report per gamma in parallel");
    add_scenario(sweep_cmd, true);
    add_dynamics(sweep_cmd);
    sweep_cmd->add_option("--gammas", o.gammas, "Comma-separated gamma values")->capture_default_str();
    sweep_cmd->add_option("--jobs", o.jobs, "Worker threads (default: hardware concurrency)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*classify_cmd) return cmd_classify(o);
        if (*bip_cmd) return cmd_bipartitions(o);
        if (*spec_cmd) return cmd_spectrum(o);
        if (*cert_cmd) return cmd_certify(o);
        if (*sim_cmd) return cmd_simulate(o);
        if (*pred_cmd) return cmd_predict(o);
        if (*rep_cmd) return cmd_report(o);
        if (*sweep_cmd) return cmd_sweep(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
