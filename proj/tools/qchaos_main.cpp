#include <cstdint>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qchaos/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;       // parse or semantic config problem
constexpr int kExitNumerical = 3;    // solver / quadrature / calibration failure
constexpr int kExitSemantic = 4;     // validate only: parsed but invalid

struct Cli {
    std::string config;
    std::string out;
    std::string cache;
    std::int64_t seed = -1;  // -1: not given
};

nlohmann::json load_config(const std::string& path, int& exit_code) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "qchaos: cannot open config file " << path << "\n";
        exit_code = kExitConfig;
        return {};
    }
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        std::cerr << "qchaos: config is not valid JSON: " << path << "\n";
        exit_code = kExitConfig;
        return {};
    }
    exit_code = kExitOk;
    return j;
}

int run_validate(const Cli& cli) {
    int code = kExitOk;
    nlohmann::json config = load_config(cli.config, code);
    if (code != kExitOk) return code;
    qchaos::ValidationResult v = qchaos::validate_config(config);
    if (v.ok()) return kExitOk;
    for (const auto& e : v.errors) std::cerr << "qchaos: " << e << "\n";
    return kExitSemantic;
}

int run_kind(const std::string& kind, const Cli& cli) {
    int code = kExitOk;
    nlohmann::json config = load_config(cli.config, code);
    if (code != kExitOk) return code;
    if (config.value("experiment", kind) != kind) {
        std::cerr << "qchaos: config declares experiment \"" << config.value("experiment", "")
                  << "\" but the " << kind << " subcommand was invoked\n";
        return kExitConfig;
    }
    config["experiment"] = kind;

    qchaos::RunOptions opts;
    opts.config_path = cli.config;
    opts.out_dir = cli.out;
    opts.cache_dir = cli.cache;
    if (cli.seed >= 0) opts.seed = static_cast<uint64_t>(cli.seed);
    try {
        qchaos::RunManifest m = qchaos::run_experiment(config, opts);
        std::cout << "qchaos: " << kind << " wrote " << m.artifacts.size()
                  << " artifact(s) in " << m.wall_seconds << " s\n";
        for (const auto& e : m.cache_events) std::cerr << "qchaos: " << e << "\n";
        return kExitOk;
    } catch (const qchaos::ConfigError& e) {
        std::cerr << "qchaos: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qchaos::Error& e) {
        std::cerr << "qchaos: numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qchaos: exactly solvable quantum ergodicity experiments"};
    app.require_subcommand(1);

    const char* kinds[] = {"egorov",      "trace",     "qe-catmap",     "qe-laplace",
                           "weyl-count",  "disk-mass", "proof-chain",   "husimi-export",
                           "scar-scan"};
    Cli cli;
    std::vector<CLI::App*> subs;
    for (const char* kind : kinds) {
        CLI::App* sub = app.add_subcommand(kind);
        sub->add_option("--config", cli.config, "experiment config (JSON)")->required();
        sub->add_option("--out", cli.out, "output directory");
        sub->add_option("--cache", cli.cache, "spectral cache directory (default $QCHAOS_CACHE)");
        sub->add_option("--seed", cli.seed, "seed for in-cluster eigenbasis rotations");
        subs.push_back(sub);
    }
    CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("--config", cli.config, "experiment config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) return run_validate(cli);
    for (size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) return run_kind(kinds[i], cli);
    return kExitConfig;
}
