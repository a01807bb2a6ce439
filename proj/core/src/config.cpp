#include "skelhedge/config.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace skelhedge {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    for (char c : v) {
        if (c == ',' || c == ' ' || c == '\t' || c == ';') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else {
            item.push_back(c);
        }
    }
    if (!item.empty()) out.push_back(item);
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for '" + key + "': '" + v + "'");
    }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
    std::uint64_t x = 0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc() || r.ptr != end)
        throw ConfigError("invalid non-negative integer for '" + key + "': '" + v + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("invalid boolean for '" + key + "': '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& s : split_list(v)) out.push_back(to_double(key, s));
    if (out.empty()) throw ConfigError("empty list for '" + key + "'");
    return out;
}

std::string num(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + num(xs[i]);
    return out;
}

std::vector<std::vector<double>> constant_correlation(std::size_t d, double r) {
    std::vector<std::vector<double>> c(d, std::vector<double>(d, r));
    for (std::size_t i = 0; i < d; ++i) c[i][i] = 1.0;
    return c;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"blac-bs",          "cev-digital",
                                                "cev-onetouch",     "heston-put-lrm",
                                                "heston-onetouch-fs", "heston-onetouch-mv"};
    return names;
}

ExperimentConfig preset_config(std::string_view name) {
    ExperimentConfig c;
    c.preset = std::string(name);
    if (name == "blac-bs") {
        c.kind = ExperimentKind::Hedge;
        c.model = ModelKind::BlackScholesMulti;
        c.bs.spot.assign(5, 100.0);
        c.bs.vol = {0.35, 0.35, 0.38, 0.35, 0.40};
        c.bs.correlation = constant_correlation(5, 0.4);
        c.payoff = PayoffSpec::blac(76.0);
        c.k_list = {3};
        c.outer = 20000;
        c.inner = 500;
        c.directions = 1;
    } else if (name == "cev-digital" || name == "cev-onetouch") {
        c.kind = ExperimentKind::Backtest;
        c.model = ModelKind::Cev;
        c.cev = {100.0, 0.2, 1.6, 0.0, 0.0};
        c.payoff = name == "cev-digital" ? PayoffSpec::digital(95.0) : PayoffSpec::one_touch(105.0);
        c.k_list = {3, 4};
        c.hedges_per_day = {1.0, 2.0};
        c.sims = name == "cev-digital" ? 200 : 600;
        c.outer = 200;
        c.inner = 10;
    } else if (name == "heston-put-lrm") {
        c.kind = ExperimentKind::Hedge;
        c.model = ModelKind::Heston;
        c.heston = {100.0, std::sqrt(0.02), 2.5, 0.04, 0.3, 0.0, 0.0, 0.0};
        c.payoff = PayoffSpec::put(100.0);
        c.k_list = {3};
        c.outer = 5000;
        c.inner = 100;
        c.cost_increment = true;
    } else if (name == "heston-onetouch-fs" || name == "heston-onetouch-mv") {
        c.kind = ExperimentKind::Backtest;
        c.model = ModelKind::Heston;
        c.heston = {100.0, 0.3, 3.63, 0.04, 0.3, -0.53, 0.0, 0.01};
        c.payoff = PayoffSpec::one_touch(105.0);
        c.k_list = {3, 4};
        c.hedges_per_day = {1.0, 2.0};
        c.sims = 600;
        c.outer = 200;
        c.inner = 10;
        if (name == "heston-onetouch-mv") {
            c.hedge_measure = Measure::VarianceOptimal;
            c.strategy = StrategyKind::MeanVariance;
        }
    } else {
        throw UnknownPreset("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

ConfigSections parse_config_text(std::istream& in) {
    ConfigSections out;
    std::string section = "experiment";
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        out[section][key] = trim(std::string_view(t).substr(eq + 1));
    }
    return out;
}

void apply_setting(ExperimentConfig& c, const std::string& section, const std::string& key,
                   const std::string& v) {
    auto bad = [&] { return ConfigError("unknown key '" + key + "' in section [" + section + "]"); };
    if (section == "experiment") {
        if (key == "preset") {
            const std::string out = c.out;
            c = preset_config(v);
            c.out = out;
        } else if (key == "kind") {
            if (v == "hedge") c.kind = ExperimentKind::Hedge;
            else if (v == "backtest") c.kind = ExperimentKind::Backtest;
            else throw ConfigError("kind must be hedge or backtest");
        } else if (key == "k") {
            c.k_list.clear();
            for (const auto& s : split_list(v)) c.k_list.push_back(static_cast<int>(to_uint(key, s)));
            if (c.k_list.empty()) throw ConfigError("empty k list");
        } else if (key == "hedges_per_day") {
            c.hedges_per_day = to_doubles(key, v);
        } else if (key == "outer") {
            c.outer = to_uint(key, v);
        } else if (key == "inner") {
            c.inner = to_uint(key, v);
        } else if (key == "sims") {
            c.sims = to_uint(key, v);
        } else if (key == "seed") {
            c.seed = to_uint(key, v);
        } else if (key == "threads") {
            c.threads = static_cast<int>(to_uint(key, v));
        } else if (key == "maturity") {
            c.maturity = to_double(key, v);
        } else if (key == "trading_days") {
            c.trading_days = static_cast<int>(to_uint(key, v));
        } else if (key == "physical_k") {
            c.physical_k = static_cast<int>(to_uint(key, v));
        } else if (key == "directions") {
            c.directions = static_cast<int>(to_uint(key, v));
        } else if (key == "antithetic") {
            c.antithetic = to_bool(key, v);
        } else if (key == "cost_increment") {
            c.cost_increment = to_bool(key, v);
        } else if (key == "measure") {
            if (v == "minimal") c.hedge_measure = Measure::MinimalMartingale;
            else if (v == "variance-optimal") c.hedge_measure = Measure::VarianceOptimal;
            else throw ConfigError("measure must be minimal or variance-optimal");
        } else if (key == "strategy") {
            if (v == "pure") c.strategy = StrategyKind::Pure;
            else if (v == "mean-variance") c.strategy = StrategyKind::MeanVariance;
            else throw ConfigError("strategy must be pure or mean-variance");
        } else if (key == "vomm_dynamics") {
            if (v == "hobson") c.vomm_dynamics = VommDynamics::Hobson;
            else if (v == "minimal") c.vomm_dynamics = VommDynamics::Minimal;
            else throw ConfigError("vomm_dynamics must be hobson or minimal");
        } else if (key == "sampler") {
            if (v == "table") c.sampler = ExitTimeMethod::Table;
            else if (v == "gamma") c.sampler = ExitTimeMethod::Gamma;
            else throw ConfigError("sampler must be table or gamma");
        } else if (key == "out") {
            c.out = v;
        } else {
            throw bad();
        }
    } else if (section == "model") {
        if (key == "kind") {
            if (v == "black-scholes") c.model = ModelKind::BlackScholesMulti;
            else if (v == "cev") c.model = ModelKind::Cev;
            else if (v == "heston") c.model = ModelKind::Heston;
            else throw ConfigError("model kind must be black-scholes, cev or heston");
            return;
        }
        if (c.model == ModelKind::BlackScholesMulti) {
            if (key == "spot") c.bs.spot = to_doubles(key, v);
            else if (key == "vol") c.bs.vol = to_doubles(key, v);
            else if (key == "drift") c.bs.drift = to_doubles(key, v);
            else if (key == "rate") c.bs.rate = to_double(key, v);
            else if (key == "correlation") {
                const auto xs = to_doubles(key, v);
                const std::size_t d = c.bs.spot.size();
                if (xs.size() == 1) {
                    c.bs.correlation = constant_correlation(d, xs[0]);
                } else if (xs.size() == d * d) {
                    c.bs.correlation.assign(d, std::vector<double>(d));
                    for (std::size_t i = 0; i < d * d; ++i) c.bs.correlation[i / d][i % d] = xs[i];
                } else {
                    throw ConfigError("correlation needs 1 or d*d values (set spot first)");
                }
            } else throw bad();
        } else if (c.model == ModelKind::Cev) {
            const double x = to_double(key, v);
            if (key == "spot") c.cev.spot = x;
            else if (key == "sigma") c.cev.sigma = x;
            else if (key == "beta") c.cev.beta = x;
            else if (key == "rate") c.cev.rate = x;
            else if (key == "drift") c.cev.drift = x;
            else throw bad();
        } else {
            const double x = to_double(key, v);
            if (key == "spot") c.heston.spot = x;
            else if (key == "y0") c.heston.y0 = x;
            else if (key == "initial_variance") {
                if (!(x > 0.0)) throw ConfigError("initial_variance must be positive");
                c.heston.y0 = std::sqrt(x);
            } else if (key == "kappa") c.heston.kappa = x;
            else if (key == "theta") c.heston.theta = x;
            else if (key == "sigma") c.heston.sigma = x;
            else if (key == "rho") c.heston.rho = x;
            else if (key == "rate") c.heston.rate = x;
            else if (key == "drift") c.heston.drift = x;
            else throw bad();
        }
    } else if (section == "payoff") {
        if (key == "kind") {
            static const std::map<std::string, PayoffKind> kinds{
                {"put", PayoffKind::EuropeanPut},       {"call", PayoffKind::EuropeanCall},
                {"digital", PayoffKind::Digital},       {"one-touch", PayoffKind::OneTouch},
                {"blac", PayoffKind::BlacDownOut},      {"terminal-price", PayoffKind::TerminalPrice},
                {"constant", PayoffKind::Constant}};
            const auto it = kinds.find(v);
            if (it == kinds.end()) throw ConfigError("unknown payoff kind '" + v + "'");
            c.payoff.kind = it->second;
        } else if (key == "level" || key == "strike" || key == "barrier") {
            c.payoff.level = to_double(key, v);
        } else {
            throw bad();
        }
    } else {
        throw ConfigError("unknown section [" + section + "]");
    }
}

void apply_sections(ExperimentConfig& cfg, const ConfigSections& sections) {
    // The preset resets everything, and the model kind decides which keys are valid.
    if (auto e = sections.find("experiment"); e != sections.end())
        if (auto p = e->second.find("preset"); p != e->second.end())
            apply_setting(cfg, "experiment", "preset", p->second);
    if (auto m = sections.find("model"); m != sections.end())
        if (auto kd = m->second.find("kind"); kd != m->second.end())
            apply_setting(cfg, "model", "kind", kd->second);
    if (auto m = sections.find("model"); m != sections.end())
        if (auto sp = m->second.find("spot"); sp != m->second.end())
            apply_setting(cfg, "model", "spot", sp->second);
    for (const auto& [section, kv] : sections)
        for (const auto& [key, value] : kv) {
            if ((section == "experiment" && key == "preset") ||
                (section == "model" && (key == "kind" || key == "spot")))
                continue;
            apply_setting(cfg, section, key, value);
        }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open parameter file '" + path + "'");
    apply_sections(cfg, parse_config_text(in));
}

void ExperimentConfig::validate() const {
    if (k_list.empty()) throw ConfigError("k list is empty");
    for (int k : k_list)
        if (k < 1 || k > 12) throw ConfigError("k must be in 1..12");
    if (outer < 1 || inner < 1) throw ConfigError("outer and inner must be >= 1");
    if (kind == ExperimentKind::Backtest && sims < 1) throw ConfigError("sims must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (!(maturity > 0.0)) throw ConfigError("maturity must be positive");
    if (trading_days < 1) throw ConfigError("trading_days must be >= 1");
    for (double h : hedges_per_day)
        if (!(h > 0.0)) throw ConfigError("hedges_per_day must be positive");
    try {
        payoff.validate();
        (void)physical_model();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (strategy == StrategyKind::MeanVariance) {
        if (model != ModelKind::Heston) throw ConfigError("mean-variance strategy needs the Heston model");
        if (kind != ExperimentKind::Backtest) throw ConfigError("mean-variance strategy needs a backtest");
        try {
            (void)hobson_params(heston);
        } catch (const std::domain_error& e) {
            throw ConfigError(e.what());
        }
    }
}

MarketModel ExperimentConfig::physical_model() const {
    switch (model) {
        case ModelKind::BlackScholesMulti: return MarketModel::black_scholes(bs);
        case ModelKind::Cev: return MarketModel::cev(cev);
        case ModelKind::Heston: return MarketModel::heston(heston);
    }
    throw ConfigError("unknown model");
}

std::vector<std::array<std::string, 3>> describe(const ExperimentConfig& c) {
    std::vector<std::array<std::string, 3>> out;
    auto add = [&](const char* s, const char* k, std::string v) { out.push_back({s, k, std::move(v)}); };
    add("experiment", "preset", c.preset);
    add("experiment", "kind", c.kind == ExperimentKind::Hedge ? "hedge" : "backtest");
    std::string ks;
    for (std::size_t i = 0; i < c.k_list.size(); ++i) ks += (i ? "," : "") + std::to_string(c.k_list[i]);
    add("experiment", "k", ks);
    add("experiment", "hedges_per_day", join(c.hedges_per_day));
    add("experiment", "outer", std::to_string(c.outer));
    add("experiment", "inner", std::to_string(c.inner));
    add("experiment", "sims", std::to_string(c.sims));
    add("experiment", "seed", std::to_string(c.seed));
    add("experiment", "maturity", num(c.maturity));
    add("experiment", "trading_days", std::to_string(c.trading_days));
    add("experiment", "physical_k", std::to_string(c.physical_k));
    add("experiment", "directions", std::to_string(c.directions));
    add("experiment", "antithetic", c.antithetic ? "true" : "false");
    add("experiment", "cost_increment", c.cost_increment ? "true" : "false");
    add("experiment", "measure", c.hedge_measure == Measure::VarianceOptimal ? "variance-optimal" : "minimal");
    add("experiment", "strategy", c.strategy == StrategyKind::Pure ? "pure" : "mean-variance");
    add("experiment", "vomm_dynamics", c.vomm_dynamics == VommDynamics::Hobson ? "hobson" : "minimal");
    add("experiment", "sampler", c.sampler == ExitTimeMethod::Table ? "table" : "gamma");
    add("model", "kind", to_string(c.model));
    switch (c.model) {
        case ModelKind::BlackScholesMulti: {
            add("model", "spot", join(c.bs.spot));
            add("model", "vol", join(c.bs.vol));
            if (!c.bs.drift.empty()) add("model", "drift", join(c.bs.drift));
            add("model", "rate", num(c.bs.rate));
            std::vector<double> flat;
            for (const auto& row : c.bs.correlation) flat.insert(flat.end(), row.begin(), row.end());
            add("model", "correlation", join(flat));
            break;
        }
        case ModelKind::Cev:
            add("model", "spot", num(c.cev.spot));
            add("model", "sigma", num(c.cev.sigma));
            add("model", "beta", num(c.cev.beta));
            add("model", "rate", num(c.cev.rate));
            add("model", "drift", num(c.cev.drift));
            break;
        case ModelKind::Heston:
            add("model", "spot", num(c.heston.spot));
            add("model", "y0", num(c.heston.y0));
            add("model", "kappa", num(c.heston.kappa));
            add("model", "theta", num(c.heston.theta));
            add("model", "sigma", num(c.heston.sigma));
            add("model", "rho", num(c.heston.rho));
            add("model", "rate", num(c.heston.rate));
            add("model", "drift", num(c.heston.drift));
            break;
    }
    add("payoff", "kind", to_string(c.payoff.kind));
    add("payoff", "level", num(c.payoff.level));
    return out;
}

}  // namespace skelhedge
