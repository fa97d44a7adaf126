// betaflow experiment runner: list models, run any of the four processes,
// check identities, and run the full verification battery.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "betaflow/acceptance.hpp"
#include "betaflow/dist.hpp"
#include "betaflow/errors.hpp"
#include "betaflow/identities.hpp"
#include "betaflow/ifs.hpp"
#include "betaflow/models.hpp"
#include "betaflow/parallel.hpp"
#include "betaflow/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTestFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNoConvergence = 3;

struct RunConfig {
    std::string model;
    std::string params_csv;
    std::size_t n_steps = 200;
    std::size_t n_samples = 10000;
    std::uint64_t seed = 42;
    double alpha = 0.001;
    double tol = 1e-12;
    std::string out_path;
    std::string format = "csv";
    std::size_t workers = 1;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("BETAFLOW_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument(
                "BETAFLOW_SEED: not a valid unsigned integer");
        }
    }
    return 42;
}

std::map<std::string, double> parse_params(const std::string& csv) {
    std::map<std::string, double> out;
    if (csv.empty()) return out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::invalid_argument("params: expected key=value, got '" +
                                        item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
            out[key] = v;
        } catch (const std::exception&) {
            throw std::invalid_argument("params: value for '" + key +
                                        "' is not a number: '" + val + "'");
        }
    }
    return out;
}

void write_samples(const RunConfig& cfg, const std::vector<double>& samples) {
    if (cfg.out_path.empty()) return;
    std::ofstream out(cfg.out_path);
    if (!out) {
        throw std::invalid_argument("out: cannot open '" + cfg.out_path + "'");
    }
    if (cfg.format == "csv") {
        out << "index,value\n";
        char buf[64];
        for (std::size_t i = 0; i < samples.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, samples[i]);
            out << buf;
        }
    } else if (cfg.format == "json") {
        nlohmann::json j;
        j["metadata"] = {{"model", cfg.model},
                         {"params", parse_params(cfg.params_csv)},
                         {"seed", cfg.seed},
                         {"n", samples.size()}};
        j["samples"] = samples;
        out << j.dump(2) << '\n';
    } else {
        throw std::invalid_argument("format: must be csv or json, got '" +
                                    cfg.format + "'");
    }
}

void add_common(CLI::App* cmd, RunConfig& cfg, bool with_model) {
    if (with_model) {
        cmd->add_option("--model", cfg.model, "catalog case name")->required();
        cmd->add_option("--params", cfg.params_csv,
                        "model parameters as key=value[,key=value...]");
    }
    cmd->add_option("--n-samples", cfg.n_samples, "number of replicates");
    cmd->add_option("--seed", cfg.seed, "master seed");
    cmd->add_option("--alpha", cfg.alpha, "KS significance level");
    cmd->add_option("--tol", cfg.tol, "convergence tolerance");
    cmd->add_option("--out", cfg.out_path, "output file path");
    cmd->add_option("--format", cfg.format, "output format: csv|json");
    cmd->add_option("--workers", cfg.workers,
                    "worker threads (never changes emitted samples)");
}

int report_and_exit(const betaflow::stats::KsReport& ks,
                    const std::string& what) {
    std::cout << what << ": n=" << ks.n << (ks.m ? " m=" + std::to_string(ks.m) : "")
              << " KS D=" << ks.statistic << " critical=" << ks.critical
              << " -> " << (ks.pass ? "PASS" : "FAIL") << '\n';
    return ks.pass ? kExitOk : kExitTestFailure;
}

// Generates samples of one process for a built catalog case and reports a KS
// verdict against the predicted law when the catalog knows one.
int run_process(const RunConfig& cfg, const std::string& process) {
    const auto params = parse_params(cfg.params_csv);
    const betaflow::models::ModelCase c =
        betaflow::models::build_case(cfg.model, params);
    const betaflow::rng::StreamKey root{cfg.seed, 0, 0};

    std::function<double(betaflow::rng::StreamKey&)> gen;
    std::optional<betaflow::dist::DistSpec> law;
    if (process == "forward") {
        gen = [&c, &cfg](betaflow::rng::StreamKey& key) {
            return betaflow::ifs::forward_run(c.mu, 0.5, cfg.n_steps, key);
        };
        law = c.predicted_limit;
    } else if (process == "backward") {
        gen = [&c, &cfg](betaflow::rng::StreamKey& key) {
            return betaflow::ifs::backward_nest(c.mu, key, cfg.tol).limit;
        };
        law = c.predicted_limit;
    } else if (process == "gamma-chain") {
        if (!c.predicted_limit) {
            throw std::invalid_argument(
                "model: '" + cfg.model +
                "' has no predicted limit, so the gamma-side innovation "
                "shape is undefined");
        }
        const double b = c.predicted_limit->p2;
        gen = [&c, &cfg, b](betaflow::rng::StreamKey& key) {
            return betaflow::ifs::gamma_forward_run(c.mu, b, 1.0, cfg.n_steps,
                                                    key);
        };
        law = c.gamma_limit;
    } else {  // matrix
        gen = [&c, &cfg](betaflow::rng::StreamKey& key) {
            return betaflow::ifs::left_product_run(c.mu, key, cfg.tol).e[0];
        };
        law = c.predicted_limit;
    }

    auto samples = betaflow::parallel::collect_samples(
        cfg.n_samples, betaflow::rng::fork(root, 1), gen, cfg.workers);
    write_samples(cfg, samples);

    std::ostringstream label;
    label << "run-" << process << ' ' << cfg.model;
    if (!cfg.params_csv.empty()) label << '(' << cfg.params_csv << ')';

    if (!law) {
        std::cout << label.str() << ": n=" << samples.size()
                  << " samples written (no predicted limit to test)\n";
        return kExitOk;
    }
    std::sort(samples.begin(), samples.end());
    const auto target = *law;
    const auto ks = betaflow::stats::ks_one_sample(
        samples, [target](double x) { return target.cdf(x); }, cfg.alpha,
        label.str() + " vs " + target.name());
    return report_and_exit(ks, label.str() + " vs " + target.name());
}

int run_list_models() {
    std::printf("%-12s %-42s %-52s %-28s %s\n", "name", "params", "limit",
                "scheme", "notes");
    for (const auto& m : betaflow::models::catalog()) {
        std::printf("%-12s %-42s %-52s %-28s %s\n", m.name.c_str(),
                    m.param_spec.c_str(), m.limit.c_str(), m.scheme.c_str(),
                    m.anchor.c_str());
    }
    return kExitOk;
}

int run_check_identity(const RunConfig& cfg) {
    // A wildcard pattern runs the default suite filtered by name and writes
    // a JSON array of reports; a plain name checks that single identity.
    if (cfg.model.find('*') != std::string::npos ||
        cfg.model.find('?') != std::string::npos) {
        const auto reports = betaflow::identities::run_suite(
            cfg.model, cfg.n_samples, cfg.alpha, cfg.seed);
        std::size_t passed = 0;
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports) {
            if (r.pass) ++passed;
            arr.push_back(nlohmann::json::parse(r.to_json()));
        }
        if (!cfg.out_path.empty()) {
            std::ofstream out(cfg.out_path);
            if (!out) {
                throw std::invalid_argument("out: cannot open '" +
                                            cfg.out_path + "'");
            }
            out << arr.dump(2) << '\n';
        }
        std::cout << "identity suite '" << cfg.model << "': " << passed << '/'
                  << reports.size() << " pass\n";
        return passed == reports.size() ? kExitOk : kExitTestFailure;
    }

    const auto params = parse_params(cfg.params_csv);
    const auto id = betaflow::identities::make_identity(cfg.model, params);
    const betaflow::rng::StreamKey root{cfg.seed, 0, 0};
    const auto ks = betaflow::identities::check_identity(
        id, cfg.n_samples, cfg.alpha, betaflow::rng::fork(root, 9));
    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path);
        if (!out) {
            throw std::invalid_argument("out: cannot open '" + cfg.out_path +
                                        "'");
        }
        out << ks.to_json() << '\n';
    }
    return report_and_exit(ks, "check-identity " + id.name);
}

int run_verify(const RunConfig& cfg) {
    const auto result =
        betaflow::acceptance::run_verify(cfg.seed, cfg.alpha, cfg.workers);
    const std::string path =
        cfg.out_path.empty() ? "verify.json" : cfg.out_path;
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("out: cannot open '" + path + "'");
    }
    out << result.to_json() << '\n';

    for (const auto& c : result.criteria) {
        std::cout << c.summary() << '\n';
    }
    std::cout << "verify: seed=" << result.seed << " alpha=" << result.alpha
              << " items=" << result.total_items
              << " failures=" << result.total_failures << " -> "
              << (result.pass ? "PASS" : "FAIL") << " (" << path << ")\n";
    return result.pass ? kExitOk : kExitTestFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "betaflow: iterated random linear functions on [0,1] - simulation "
        "and statistical verification of beta/gamma limit laws"};
    app.require_subcommand(1);

    RunConfig cfg;
    try {
        cfg.seed = default_seed();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    auto* list_cmd = app.add_subcommand("list-models", "print the catalog");
    auto* fwd_cmd = app.add_subcommand(
        "run-forward", "forward chain X_n = (A-B)X + B after n steps");
    auto* bwd_cmd = app.add_subcommand(
        "run-backward", "backward nested-interval limits");
    auto* gam_cmd = app.add_subcommand(
        "run-gamma-chain", "gamma-side chain X' = AX' + BV on R+");
    auto* mat_cmd = app.add_subcommand(
        "run-matrix", "left products of 2x2 stochastic factors");
    auto* idn_cmd = app.add_subcommand(
        "check-identity", "KS check of one distributional identity");
    auto* ver_cmd = app.add_subcommand(
        "verify", "full verification battery; writes verify.json");

    add_common(fwd_cmd, cfg, true);
    fwd_cmd->add_option("--n-steps", cfg.n_steps, "chain length");
    add_common(bwd_cmd, cfg, true);
    add_common(gam_cmd, cfg, true);
    gam_cmd->add_option("--n-steps", cfg.n_steps, "chain length");
    add_common(mat_cmd, cfg, true);
    idn_cmd->add_option("--model", cfg.model, "identity name")->required();
    idn_cmd->add_option("--params", cfg.params_csv, "identity parameters");
    idn_cmd->add_option("--n-samples", cfg.n_samples, "draws per side");
    idn_cmd->add_option("--seed", cfg.seed, "master seed");
    idn_cmd->add_option("--alpha", cfg.alpha, "KS significance level");
    idn_cmd->add_option("--out", cfg.out_path, "report JSON path");
    ver_cmd->add_option("--seed", cfg.seed, "master seed");
    ver_cmd->add_option("--alpha", cfg.alpha, "per-test significance level");
    ver_cmd->add_option("--out", cfg.out_path, "verdict path (verify.json)");
    ver_cmd->add_option("--workers", cfg.workers,
                        "worker threads (never changes results)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (list_cmd->parsed()) return run_list_models();
        if (fwd_cmd->parsed()) return run_process(cfg, "forward");
        if (bwd_cmd->parsed()) return run_process(cfg, "backward");
        if (gam_cmd->parsed()) return run_process(cfg, "gamma-chain");
        if (mat_cmd->parsed()) return run_process(cfg, "matrix");
        if (idn_cmd->parsed()) return run_check_identity(cfg);
        if (ver_cmd->parsed()) return run_verify(cfg);
    } catch (const betaflow::no_convergence_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNoConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    return kExitConfigError;
}
