#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skelhedge/hedger.hpp"

namespace skelhedge {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownPreset : public ConfigError {
public:
    using ConfigError::ConfigError;
};

enum class ExperimentKind { Hedge, Backtest };
enum class StrategyKind { Pure, MeanVariance };

struct ExperimentConfig {
    std::string preset = "custom";
    ExperimentKind kind = ExperimentKind::Hedge;

    ModelKind model = ModelKind::BlackScholesMulti;
    BlackScholesParams bs;
    CevParams cev;
    HestonParams heston;
    PayoffSpec payoff;

    Measure hedge_measure = Measure::MinimalMartingale;
    StrategyKind strategy = StrategyKind::Pure;
    VommDynamics vomm_dynamics = VommDynamics::Hobson;

    std::vector<int> k_list{3};
    std::vector<double> hedges_per_day{1.0};
    std::size_t outer = 1000;
    std::size_t inner = 500;
    std::size_t sims = 100;
    std::uint64_t seed = 42;
    int threads = 1;
    double maturity = 1.0;
    int trading_days = 22;
    int physical_k = 0;
    int directions = 0;
    bool antithetic = false;
    bool cost_increment = false;
    ExitTimeMethod sampler = ExitTimeMethod::Table;

    std::string out;

    void validate() const;
    MarketModel physical_model() const;
};

const std::vector<std::string>& preset_names();
ExperimentConfig preset_config(std::string_view name);

// Flat "key = value" text with [section] headers; '#' starts a comment.
using ConfigSections = std::map<std::string, std::map<std::string, std::string>>;
ConfigSections parse_config_text(std::istream& in);

// Applies one key; throws ConfigError on unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                   const std::string& value);
void apply_sections(ExperimentConfig& cfg, const ConfigSections& sections);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

// Every setting as (section, key, value), in a stable order.
std::vector<std::array<std::string, 3>> describe(const ExperimentConfig& cfg);

}  // namespace skelhedge
