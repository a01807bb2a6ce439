#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skelhedge/config.hpp"

namespace skelhedge {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

// One CSV row per (k, hedges/day). Hedge-only runs leave the backtest columns empty.
struct ResultRow {
    std::string preset;
    std::string model;
    std::string measure;
    std::string payoff;
    int k = 0;
    std::optional<double> hedges_per_day;
    std::optional<std::size_t> simulations;
    std::size_t outer = 0;
    std::size_t inner = 0;
    std::uint64_t seed = 0;
    double hedge = 0.0;
    double hedge_std_error = 0.0;
    double price = 0.0;
    double price_std_error = 0.0;
    std::optional<double> cost_increment;
    std::optional<double> cost_increment_std_error;
    std::optional<double> hedging_error;
    std::optional<double> st_dev;
    std::optional<double> percent_error;
    std::size_t aborted = 0;
    double runtime_s = 0.0;
};

std::string csv_quote(const std::string& field);
std::vector<std::string> csv_columns();
std::vector<std::string> csv_fields(const ResultRow& row);

// Header comment line with the schema version, column header, then rows.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool with_runtime = true);
void write_metadata(std::ostream& out, const ExperimentConfig& cfg);
void write_summary(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace skelhedge
