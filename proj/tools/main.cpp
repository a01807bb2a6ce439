// skelhedge command-line driver.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "skelhedge/experiment.hpp"

namespace {

enum Exit : int {
    kOk = 0,
    kRuntime = 1,
    kUsage = 2,
    kUnknownPreset = 3,
    kBadParameterFile = 4,
    kUnwritable = 5,
};

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw OutputError("cannot write '" + path + "'");
    return f;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace skelhedge;

    CLI::App app{"Hedging with random skeletons of Brownian motion", "skelhedge"};
    app.require_subcommand(1, 1);

    auto* run = app.add_subcommand("run", "run a preset or a parameter file");
    std::optional<std::string> preset, model_file, k, outer, inner, hpd, sims, seed, threads;
    std::string out, dump_grid_path, dump_zeta_path;
    bool quiet = false;
    run->add_option("--preset", preset, "preset name (see `skelhedge presets`)");
    run->add_option("--model-file", model_file, "key = value parameter file with [sections]");
    run->add_option("--k", k, "skeleton level(s), comma separated");
    run->add_option("--outer", outer, "outer replications");
    run->add_option("--inner", inner, "inner continuations per replication");
    run->add_option("--hedges-per-day", hpd, "hedges per trading day, comma separated");
    run->add_option("--sims", sims, "backtest simulations");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--threads", threads, "worker threads");
    run->add_option("--out", out, "CSV output path (metadata goes to <out>.meta)");
    run->add_option("--dump-grid", dump_grid_path, "write one skeleton grid as CSV and exit");
    run->add_option("--dump-zeta", dump_zeta_path, "write F and zeta~ as CSV and exit");
    run->add_flag("-q,--quiet", quiet, "no progress summary");

    app.add_subcommand("presets", "list preset names");

    if (argc < 2) {
        std::cerr << app.help();
        return kUsage;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    if (app.got_subcommand("presets")) {
        for (const auto& name : preset_names()) std::cout << name << "\n";
        return kOk;
    }

    if (!preset && !model_file) {
        std::cerr << "run: need --preset or --model-file\n\n" << run->help();
        return kUsage;
    }

    ExperimentConfig cfg;
    try {
        if (preset) cfg = preset_config(*preset);
    } catch (const UnknownPreset& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUnknownPreset;
    }
    try {
        if (model_file) apply_config_file(cfg, *model_file);
    } catch (const UnknownPreset& e) {
        std::cerr << "error: " << model_file.value() << ": " << e.what() << "\n";
        return kUnknownPreset;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << model_file.value() << ": " << e.what() << "\n";
        return kBadParameterFile;
    }
    try {
        auto set = [&](const char* key, const std::optional<std::string>& v) {
            if (v) apply_setting(cfg, "experiment", key, *v);
        };
        set("k", k);
        set("outer", outer);
        set("inner", inner);
        set("hedges_per_day", hpd);
        set("sims", sims);
        set("seed", seed);
        set("threads", threads);
        if (!out.empty()) cfg.out = out;
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return model_file ? kBadParameterFile : kUsage;
    }

    try {
        if (!dump_grid_path.empty() || !dump_zeta_path.empty()) {
            if (!dump_grid_path.empty()) {
                auto f = open_output(dump_grid_path);
                dump_grid(f, cfg);
            }
            if (!dump_zeta_path.empty()) {
                auto f = open_output(dump_zeta_path);
                dump_zeta(f, cfg);
            }
            return kOk;
        }

        std::optional<std::ofstream> csv, meta;
        if (!cfg.out.empty()) {
            csv = open_output(cfg.out);
            meta = open_output(cfg.out + ".meta");
        }
        const auto rows = run_experiment(cfg, [&](const ResultRow& r) {
            if (!quiet) write_summary(csv ? std::cout : std::cerr, {r});
        });
        if (csv) {
            write_csv(*csv, rows);
            write_metadata(*meta, cfg);
            if (!*csv || !*meta) throw OutputError("write failed for '" + cfg.out + "'");
        } else {
            write_csv(std::cout, rows);
        }
    } catch (const OutputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUnwritable;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kOk;
}
