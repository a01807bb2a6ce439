#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "skelhedge/config.hpp"
#include "skelhedge/report.hpp"

namespace skelhedge {

using ProgressFn = std::function<void(const ResultRow&)>;

// Runs every (k, hedges/day) combination of the configuration.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

// Model the hedge ratios are computed under.
MarketModel hedging_model(const ExperimentConfig& cfg);

// Skeleton of the first replication at the first k: time,coordinate,sign (1-based coordinates).
void dump_grid(std::ostream& out, const ExperimentConfig& cfg);

// t, F(T - t) and zeta~_t on a uniform grid of `points` dates; Heston only.
void dump_zeta(std::ostream& out, const ExperimentConfig& cfg, int points = 101);

}  // namespace skelhedge
