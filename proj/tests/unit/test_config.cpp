#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "skelhedge/experiment.hpp"

using namespace skelhedge;

namespace {

std::string csv_of(const ExperimentConfig& cfg) {
    std::ostringstream os;
    write_csv(os, run_experiment(cfg), false);
    return os.str();
}

int run_cli(const std::string& args) {
    const std::string bin = SKELHEDGE_CLI_PATH;
    if (bin.empty()) return -1;
    const int rc = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST(Config, ParsesSectionsAndComments) {
    std::istringstream in(
        "# comment\nseed = 7\n[model]\nkind = cev # inline\n  beta=1.6 \n\n[payoff]\nkind=digital\n");
    const auto s = parse_config_text(in);
    EXPECT_EQ(s.at("experiment").at("seed"), "7");
    EXPECT_EQ(s.at("model").at("kind"), "cev");
    EXPECT_EQ(s.at("model").at("beta"), "1.6");
    EXPECT_EQ(s.at("payoff").at("kind"), "digital");
}

TEST(Config, SyntaxErrors) {
    std::istringstream a("[model\n"), b("novalue\n"), c("= 3\n");
    EXPECT_THROW(parse_config_text(a), ConfigError);
    EXPECT_THROW(parse_config_text(b), ConfigError);
    EXPECT_THROW(parse_config_text(c), ConfigError);
}

TEST(Config, ApplyOverridesPreset) {
    std::istringstream in("preset = cev-digital\nk = 4\nhedges_per_day = 2\n[model]\nsigma = 0.25\n");
    ExperimentConfig cfg;
    apply_sections(cfg, parse_config_text(in));
    EXPECT_EQ(cfg.preset, "cev-digital");
    EXPECT_EQ(cfg.k_list, std::vector<int>{4});
    EXPECT_EQ(cfg.hedges_per_day, std::vector<double>{2.0});
    EXPECT_EQ(cfg.cev.sigma, 0.25);
    EXPECT_EQ(cfg.cev.beta, 1.6);
    EXPECT_EQ(cfg.sims, 200u);
}

TEST(Config, RejectsBadValues) {
    ExperimentConfig cfg;
    EXPECT_THROW(apply_setting(cfg, "experiment", "outer", "-3"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "experiment", "outer", "3x"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "experiment", "bogus", "1"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "nosuch", "k", "1"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "payoff", "kind", "asian"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "experiment", "preset", "nope"), UnknownPreset);
    cfg = preset_config("cev-digital");
    cfg.k_list = {13};
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.k_list = {3};
    cfg.outer = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, PresetsAreValid) {
    EXPECT_EQ(preset_names().size(), 6u);
    for (const auto& name : preset_names()) {
        const auto cfg = preset_config(name);
        EXPECT_NO_THROW(cfg.validate()) << name;
        EXPECT_EQ(cfg.preset, name);
    }
    EXPECT_THROW(preset_config("heston"), UnknownPreset);
    const auto put = preset_config("heston-put-lrm");
    EXPECT_NEAR(put.heston.y0 * put.heston.y0, 0.02, 1e-15);
    const auto mv = preset_config("heston-onetouch-mv");
    EXPECT_EQ(mv.strategy, StrategyKind::MeanVariance);
    EXPECT_EQ(mv.hedge_measure, Measure::VarianceOptimal);
}

TEST(Config, InitialVarianceKey) {
    ExperimentConfig cfg = preset_config("heston-onetouch-fs");
    apply_setting(cfg, "model", "initial_variance", "0.09");
    EXPECT_NEAR(cfg.heston.y0, 0.3, 1e-15);
    EXPECT_THROW(apply_setting(cfg, "model", "initial_variance", "0"), ConfigError);
}

TEST(Config, DescribeRoundTrips) {
    const auto cfg = preset_config("blac-bs");
    ConfigSections s;
    for (const auto& [sec, key, value] : describe(cfg)) s[sec][key] = value;
    ExperimentConfig back;
    apply_sections(back, s);
    EXPECT_EQ(back.bs.vol, cfg.bs.vol);
    EXPECT_EQ(back.bs.correlation, cfg.bs.correlation);
    EXPECT_EQ(back.payoff.level, 76.0);
    EXPECT_EQ(back.outer, 20000u);
}

TEST(Csv, QuotingFollowsRfc4180) {
    EXPECT_EQ(csv_quote("plain"), "plain");
    EXPECT_EQ(csv_quote("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_quote("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_quote("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, HeaderAndRow) {
    ResultRow r;
    r.preset = "x";
    r.k = 3;
    r.hedges_per_day = 2.0;
    std::ostringstream os;
    write_csv(os, {r});
    const std::string s = os.str();
    EXPECT_EQ(s.rfind("# skelhedge csv schema 1\r\n", 0), 0u);
    EXPECT_NE(s.find("preset,model,measure,payoff,k,hedges_per_day"), std::string::npos);
    EXPECT_NE(s.find("hedging_error,st_dev,percent_error,aborted,runtime_s\r\n"), std::string::npos);
    EXPECT_EQ(csv_columns().size(), csv_fields(r).size());
}

TEST(Experiment, CsvIndependentOfThreads) {
    auto cfg = preset_config("cev-onetouch");
    cfg.k_list = {3};
    cfg.hedges_per_day = {1.0};
    cfg.sims = 6;
    cfg.outer = 5;
    cfg.inner = 2;
    const std::string a = csv_of(cfg);
    cfg.threads = 3;
    EXPECT_EQ(a, csv_of(cfg));

    auto h = preset_config("heston-put-lrm");
    h.outer = 30;
    h.inner = 2;
    const std::string b = csv_of(h);
    h.threads = 4;
    EXPECT_EQ(b, csv_of(h));
}

TEST(Experiment, DumpsGridAndZeta) {
    auto cfg = preset_config("heston-onetouch-fs");
    std::ostringstream g, z;
    dump_grid(g, cfg);
    dump_zeta(z, cfg, 11);
    EXPECT_EQ(g.str().rfind("time,coordinate,sign\r\n", 0), 0u);
    EXPECT_NE(g.str().find(",2,"), std::string::npos);
    const std::string zs = z.str();
    EXPECT_EQ(std::count(zs.begin(), zs.end(), '\n'), 12);
    EXPECT_THROW(dump_zeta(z, preset_config("cev-digital")), ConfigError);
}

TEST(Cli, ExitCodes) {
    if (std::string(SKELHEDGE_CLI_PATH).empty()) GTEST_SKIP() << "CLI not built";
    EXPECT_EQ(run_cli(""), 2);
    EXPECT_EQ(run_cli("run"), 2);
    EXPECT_EQ(run_cli("run --bogus"), 2);
    EXPECT_EQ(run_cli("run --preset nope"), 3);
    const auto bad = temp_file("skelhedge_bad.ini", "[model]\nvolatility = 1\n");
    EXPECT_EQ(run_cli("run --preset cev-digital --model-file " + bad.string()), 4);
    EXPECT_EQ(run_cli("run --model-file /nonexistent/file.ini"), 4);
    EXPECT_EQ(run_cli("run --preset cev-digital --out /nonexistent/dir/out.csv"), 5);
    EXPECT_EQ(run_cli("presets"), 0);
    const auto out = std::filesystem::temp_directory_path() / "skelhedge_cli.csv";
    EXPECT_EQ(run_cli("run --preset heston-put-lrm --outer 20 --inner 2 -q --out " + out.string()), 0);
    EXPECT_TRUE(std::filesystem::exists(out.string() + ".meta"));
    std::ifstream f(out);
    std::string first;
    std::getline(f, first);
    EXPECT_EQ(first, "# skelhedge csv schema 1\r");
}
