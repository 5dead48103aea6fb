// signet: analyze signed graphs and run their consensus dynamics.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "signet/acceptance.hpp"
#include "signet/dynamics.hpp"
#include "signet/error.hpp"
#include "signet/gossip.hpp"
#include "signet/graph.hpp"
#include "signet/spectral.hpp"

namespace {

using namespace signet;

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitVerification = 5;

int exit_code_for(const Error& e) {
    switch (e.category()) {
        case ErrorCategory::Usage: return kExitUsage;
        case ErrorCategory::Parse: return kExitParse;
        case ErrorCategory::Precondition: return kExitPrecondition;
        case ErrorCategory::Numeric: return kExitNumeric;
    }
    return kExitUsage;
}

struct CommonArgs {
    std::string graph_path;
    std::string rule_name = "opposing";
    double alpha = 0.1;
    double beta = 0.1;
    std::optional<double> bound;
    std::string x0_spec = "uniform:-1:1:1";
    std::size_t steps = 1000;
    std::size_t runs = 100;
    std::uint64_t seed = 1;
    std::string out_dir;
    std::string config_path;
    bool json = false;
    bool csv = false;
    bool dump_trajectories = false;
};

DynamicsConfig make_config(const CommonArgs& args) {
    DynamicsConfig cfg;
    cfg.rule = args.rule_name == "repelling" ? Rule::Repelling : Rule::Opposing;
    cfg.alpha = args.alpha;
    cfg.beta = args.beta;
    if (args.bound) cfg.bound_A = *args.bound;
    return cfg;
}

/// x0 forms: "uniform:lo:hi[:seed]", "file:PATH", or a comma list "1,0,0.5".
X0Spec parse_x0(const std::string& spec) {
    if (spec.rfind("uniform:", 0) == 0) {
        std::istringstream ss(spec.substr(8));
        std::string lo_s, hi_s, seed_s;
        if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':'))
            raise(ErrorCode::Precondition, "x0 uniform spec needs uniform:lo:hi[:seed]");
        std::optional<std::uint64_t> seed;
        if (std::getline(ss, seed_s, ':')) seed = std::stoull(seed_s);
        return X0Spec::uniform(std::stod(lo_s), std::stod(hi_s), seed);
    }
    std::string payload = spec;
    if (spec.rfind("file:", 0) == 0) {
        std::ifstream in(spec.substr(5));
        if (!in) raise(ErrorCode::ParseError, spec.substr(5) + ": cannot open x0 file");
        std::stringstream buffer;
        buffer << in.rdbuf();
        payload = buffer.str();
    }
    for (char& c : payload)
        if (c == ',' || c == '\n' || c == '\t') c = ' ';
    std::istringstream ss(payload);
    Vector x;
    double v;
    while (ss >> v) x.push_back(v);
    if (x.empty()) raise(ErrorCode::Precondition, "x0 spec '" + spec + "' holds no numbers");
    return X0Spec::fixed(std::move(x));
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::ParseError, path.string() + ": cannot open for writing");
    out << content;
}

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string balance_to_kv(const BalanceResult& b, const std::string& prefix) {
    std::string out = prefix + "_verdict = " + balance_verdict_name(b.verdict) + "\n";
    if (!b.partition.empty()) {
        out += prefix + "_partition =";
        for (std::size_t k = 0; k < b.partition.size(); ++k) {
            out += k ? " |" : " ";
            for (std::size_t i = 0; i < b.partition[k].size(); ++i)
                out += (i ? "," : "") + std::to_string(b.partition[k][i]);
        }
        out += "\n";
    }
    if (!b.gauge.empty()) {
        out += prefix + "_gauge =";
        for (int v : b.gauge) out += v > 0 ? " +1" : " -1";
        out += "\n";
    }
    if (b.negative_subgraph_empty) out += prefix + "_negative_subgraph_empty = true\n";
    return out;
}

nlohmann::json balance_to_json(const BalanceResult& b) {
    nlohmann::json j;
    j["verdict"] = balance_verdict_name(b.verdict);
    if (!b.partition.empty()) j["partition"] = b.partition;
    if (!b.gauge.empty()) j["gauge"] = b.gauge;
    if (b.negative_subgraph_empty) j["negative_subgraph_empty"] = true;
    return j;
}

nlohmann::json diagnostics_to_json(const GraphDiagnostics& d) {
    nlohmann::json j;
    j["connected"] = d.connected;
    j["strongly_connected"] = d.strongly_connected;
    j["positive_connected"] = d.positive_connected;
    j["negative_nonempty"] = d.negative_nonempty;
    j["positive_vertex_connectivity_ge_2"] = d.positive_vertex_connectivity_ge_2;
    nlohmann::json deg = nlohmann::json::array();
    for (const NodeDegrees& nd : d.degrees)
        deg.push_back({{"deg", nd.total}, {"deg_plus", nd.positive}, {"deg_minus", nd.negative}});
    j["degrees"] = deg;
    return j;
}

int run_analyze(const CommonArgs& args) {
    const SignedGraph g = parse_graph_file(args.graph_path);
    const DynamicsConfig cfg = make_config(args);
    cfg.validate();

    BalanceResult strong, weak;
    std::string balance_error;
    try {
        strong = check_structural_balance(g);
        weak = check_weak_balance(g);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DisconnectedGraph) throw;
        balance_error = e.what();
    }
    const GraphDiagnostics& diag = connectivity_report(g);
    const SpectralReport spectral = analyze_spectrum(g, cfg);

    std::string text;
    text += "graph = " + args.graph_path + "\n";
    text += "n = " + std::to_string(g.n()) + "\n";
    text += "directed = " + std::string(g.directed() ? "1" : "0") + "\n";
    text += "rule = " + args.rule_name + "\n";
    text += "alpha = " + fmt6(args.alpha) + "\n";
    text += "beta = " + fmt6(args.beta) + "\n";
    if (balance_error.empty()) {
        text += balance_to_kv(strong, "balance");
        text += balance_to_kv(weak, "weak_balance");
    } else {
        text += "balance_error = " + balance_error + "\n";
    }
    text += "connected = " + std::string(diag.connected ? "true" : "false") + "\n";
    if (g.directed())
        text +=
            "strongly_connected = " + std::string(diag.strongly_connected ? "true" : "false") + "\n";
    text += "positive_connected = " + std::string(diag.positive_connected ? "true" : "false") + "\n";
    text += "negative_nonempty = " + std::string(diag.negative_nonempty ? "true" : "false") + "\n";
    text += "positive_vertex_connectivity_ge_2 = " +
            std::string(diag.positive_vertex_connectivity_ge_2 ? "true" : "false") + "\n";
    text += spectral.to_key_value();

    nlohmann::json j;
    j["graph"] = args.graph_path;
    j["n"] = g.n();
    j["directed"] = g.directed();
    j["rule"] = args.rule_name;
    j["alpha"] = args.alpha;
    j["beta"] = args.beta;
    if (balance_error.empty()) {
        j["balance"] = balance_to_json(strong);
        j["weak_balance"] = balance_to_json(weak);
    } else {
        j["balance_error"] = balance_error;
    }
    j["diagnostics"] = diagnostics_to_json(diag);
    j["spectral"] = nlohmann::json::parse(spectral.to_json());

    std::cout << (args.json ? j.dump(2) + "\n" : text);
    if (!args.out_dir.empty()) {
        write_file(args.out_dir, "analysis.txt", text);
        write_file(args.out_dir, "analysis.json", j.dump(2) + "\n");
    }
    return 0;
}

int run_simulate(const CommonArgs& args) {
    const SignedGraph g = parse_graph_file(args.graph_path);
    const DynamicsConfig cfg = make_config(args);

    const X0Spec spec = parse_x0(args.x0_spec);
    SplitMix64 x0_rng(spec.seed.value_or(args.seed));
    const Vector x0 = spec.realize(static_cast<std::size_t>(g.n()), x0_rng);

    const LimitPrediction pred = predict_limit(g, cfg, x0);
    SimulateOptions opts;
    if (pred.limit) {
        opts.prediction = pred.limit;
        opts.stop_tol = 1e-14;
    }
    const Trajectory traj = simulate(g, cfg, x0, args.steps, opts);

    std::string text = pred.to_key_value();
    text += "steps_run = " + fmt6(traj.times.back()) + "\n";
    text += "terminal =";
    for (double v : traj.terminal_state()) text += " " + fmt6(v);
    text += "\n";

    if (args.json)
        std::cout << pred.to_json() << "\n";
    else
        std::cout << text;
    if (args.csv && args.out_dir.empty()) std::cout << traj.to_csv();
    if (!args.out_dir.empty()) {
        write_file(args.out_dir, "trajectory.csv", traj.to_csv());
        write_file(args.out_dir, "prediction.txt", text);
        write_file(args.out_dir, "prediction.json", pred.to_json() + "\n");
    }
    return 0;
}

int run_gossip(const CommonArgs& args) {
    const SignedGraph g = parse_graph_file(args.graph_path);
    const DynamicsConfig cfg = make_config(args);

    MonteCarloOptions opts;
    opts.runs = args.runs;
    opts.horizon = args.steps;
    opts.seed = args.seed;
    if (cfg.bound_A) {
        opts.context.bound_A = cfg.bound_A;
        const BalanceResult strong = check_structural_balance(g);
        if (strong.balanced()) {
            opts.context.partition = strong.partition;
        } else {
            const BalanceResult weak = check_weak_balance(g);
            if (weak.balanced()) opts.context.partition = weak.partition;
        }
    }
    const X0Spec x0_spec = parse_x0(args.x0_spec);
    const MonteCarloSummary summary = monte_carlo(g, cfg, x0_spec, opts);

    const std::string json = summary.to_json() + "\n";
    std::cout << json;
    if (!args.out_dir.empty()) write_file(args.out_dir, "summary.json", json);

    if (args.dump_trajectories && !args.out_dir.empty()) {
        // Deterministic replay of each run with downsampled state recording.
        const std::uint64_t x0_base =
            x0_spec.seed ? *x0_spec.seed : (opts.seed ^ 0xA5A5A5A5A5A5A5A5ULL);
        for (std::size_t run = 0; run < opts.runs; ++run) {
            SplitMix64 x0_rng(x0_base + run);
            const Vector x0 = x0_spec.realize(static_cast<std::size_t>(g.n()), x0_rng);
            GossipProcess process(g, opts.seed + run);
            GossipMonitorConfig mc;
            mc.record_states_every = std::max<std::size_t>(1, opts.horizon / 1000);
            const GossipRunResult res = run_trajectory(process, cfg, x0, opts.horizon, mc);
            char name[48];
            std::snprintf(name, sizeof name, "run_%04zu.csv", run);
            write_file(args.out_dir, name, res.trajectory.to_csv());
        }
    }
    return 0;
}

int run_critical_beta(const CommonArgs& args) {
    const SignedGraph g = parse_graph_file(args.graph_path);

    const double det = critical_beta_deterministic(g, args.alpha);
    const double gos = critical_beta_gossip(g, args.alpha, pair_selection_mu(g));

    std::string text = "alpha = " + fmt6(args.alpha) + "\n";
    text += "critical_beta_deterministic = " + (std::isinf(det) ? "inf" : fmt6(det)) + "\n";
    text += "critical_beta_gossip = " + (std::isinf(gos) ? "inf" : fmt6(gos)) + "\n";

    nlohmann::json j;
    j["alpha"] = args.alpha;
    j["critical_beta_deterministic"] =
        std::isinf(det) ? nlohmann::json("inf") : nlohmann::json(det);
    j["critical_beta_gossip"] = std::isinf(gos) ? nlohmann::json("inf") : nlohmann::json(gos);

    std::cout << (args.json ? j.dump(2) + "\n" : text);
    if (!args.out_dir.empty()) {
        write_file(args.out_dir, "critical_beta.txt", text);
        write_file(args.out_dir, "critical_beta.json", j.dump(2) + "\n");
    }
    return 0;
}

/// Keys a `key = value` config file may set; everything else in the file
/// (e.g. result fields of a previous report) is ignored.
const std::vector<std::string> kConfigKeys = {"graph", "rule", "alpha", "beta",  "bound", "x0",
                                              "steps", "runs", "seed",  "out"};

/// Expands `--config FILE` into ordinary tokens placed before the explicit
/// flags, so the command line takes precedence. Reports double as configs:
/// they share the flat key-value grammar.
std::vector<std::string> expand_config(const std::vector<std::string>& tokens) {
    std::string config_path;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] == "--config" && i + 1 < tokens.size())
            config_path = tokens[i + 1];
        else if (tokens[i].rfind("--config=", 0) == 0)
            config_path = tokens[i].substr(9);
    }
    if (config_path.empty() || tokens.empty()) return tokens;

    std::ifstream in(config_path);
    if (!in) raise(ErrorCode::ParseError, config_path + ": cannot open config file");
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) continue;
        for (const std::string& known : kConfigKeys) {
            if (key == known) {
                injected.push_back("--" + key);
                injected.push_back(value);
                break;
            }
        }
    }

    // Subcommand name first, then config-derived tokens, then explicit flags.
    std::vector<std::string> out{tokens.front()};
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), tokens.begin() + 1, tokens.end());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"signed-network consensus dynamics toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&args](CLI::App* cmd) {
        cmd->add_option("--config", args.config_path, "key = value file; flags take precedence");
        auto opt = [cmd](const std::string& name, auto& target, const std::string& desc) {
            return cmd->add_option(name, target, desc)
                ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        };
        // Flag-level range checks reject bad numbers as usage errors before
        // any graph is even read; graph-dependent ranges (e.g. alpha versus
        // the maximum degree) surface later as precondition errors.
        const CLI::Validator open_unit_interval(
            [](std::string& value) -> std::string {
                try {
                    const double v = std::stod(value);
                    if (v > 0.0 && v < 1.0) return {};
                } catch (const std::exception&) {
                }
                return "must lie in (0,1)";
            },
            "FLOAT in (0,1)");
        opt("--graph", args.graph_path, "graph file (signet-graph v1)")->required();
        opt("--rule", args.rule_name, "interaction rule")
            ->check(CLI::IsMember({"opposing", "repelling"}));
        opt("--alpha", args.alpha, "positive-edge coupling")->check(open_unit_interval);
        opt("--beta", args.beta, "negative-edge coupling")->check(CLI::NonNegativeNumber);
        opt("--bound", args.bound, "state bound A for projected dynamics")
            ->check(CLI::PositiveNumber);
        opt("--x0", args.x0_spec, "initial state: list, file:PATH, uniform:lo:hi[:seed]");
        opt("--steps", args.steps, "steps (events per run for gossip)")
            ->check(CLI::PositiveNumber);
        opt("--runs", args.runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
        opt("--seed", args.seed, "master seed");
        opt("--out", args.out_dir, "output directory");
        cmd->add_flag("--json", args.json, "machine-readable stdout");
        cmd->add_flag("--csv", args.csv, "print trajectory CSV to stdout");
        cmd->add_flag("--dump-trajectories", args.dump_trajectories,
                      "with --out: write one CSV per Monte Carlo run");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "balance, connectivity and spectral report");
    add_common(analyze);
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "deterministic trajectory + limit");
    add_common(simulate_cmd);
    CLI::App* gossip = app.add_subcommand("gossip", "randomized pairwise Monte Carlo");
    add_common(gossip);
    CLI::App* critical = app.add_subcommand("critical-beta", "critical negative couplings");
    add_common(critical);
    app.add_subcommand("verify", "run the built-in verification suite");

    try {
        std::vector<std::string> tokens(argv + 1, argv + argc);
        tokens = expand_config(tokens);
        // CLI11 consumes tokens in reverse order.
        std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
        return exit_code_for(e);
    }

    try {
        if (analyze->parsed()) return run_analyze(args);
        if (simulate_cmd->parsed()) return run_simulate(args);
        if (gossip->parsed()) return run_gossip(args);
        if (critical->parsed()) return run_critical_beta(args);
        // verify
        return signet::acceptance::run_all(std::cout) ? 0 : kExitVerification;
    } catch (const Error& e) {
        std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
