#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "skelhedge/market.hpp"
#include "skelhedge/payoff.hpp"
#include "skelhedge/skeleton.hpp"

namespace skelhedge {

struct EstimatorConfig {
    int k = 3;
    std::size_t outer_paths = 1000;
    std::size_t inner_paths = 500;
    std::uint64_t seed = 1;
    int threads = 1;
    bool antithetic = false;
    // Number of leading hedge ratios wanted (0 = all traded assets). The
    // volatility factor is upper triangular, so theta^1..theta^n only need
    // the first n derivative directions.
    int directions = 0;
    std::size_t event_cap = kDefaultEventCap;
};

// Conditional claim at a restart point: model clock at 0, state and running
// extrema observed so far, remaining horizon.
struct ConditionalProblem {
    MarketModel model;
    MarketState state;
    PathMonitor monitor;
    double horizon = 1.0;

    static ConditionalProblem at_origin(const MarketModel& model, double horizon);
};

struct DerivativeSample {
    double value = 0.0;  // (E[H | incl] - E[H | excl]) / (2^-k eta)
    double price = 0.0;  // mean of all continuation payoffs
};

// One outer replication of the derivative in direction j (0-based driver).
DerivativeSample estimate_derivative(const ConditionalProblem& problem, const PayoffSpec& payoff,
                                     int k, int j, std::size_t inner_paths, std::uint64_t seed,
                                     std::uint64_t replication, bool antithetic = false,
                                     std::size_t event_cap = kDefaultEventCap);

struct DerivativeEstimate {
    int coordinate = 0;
    double value = 0.0;
    double std_error = 0.0;
    std::size_t inner_paths = 0;
    std::size_t outer_paths = 0;  // replications kept
    int k = 0;
};

struct HedgeRatio {
    std::vector<double> theta;
    std::vector<double> theta_std_error;
    std::vector<DerivativeEstimate> derivatives;
    std::vector<double> spot;
    std::vector<std::vector<double>> diffusion;  // diag(S) sigma restricted to traded drivers
    double price = 0.0;
    double price_std_error = 0.0;
    bool settled = false;
    std::size_t aborted = 0;
};

HedgeRatio estimate_hedge(const ConditionalProblem& problem, const PayoffSpec& payoff,
                          const EstimatorConfig& config);

// Derivative estimates in the non-traded directions d..p-1.
std::vector<DerivativeEstimate> estimate_cost_increment(const ConditionalProblem& problem,
                                                        const PayoffSpec& payoff,
                                                        const EstimatorConfig& config);

// theta = phi^T [diag(S) sigma]^{-1} for an upper-triangular diag(S) sigma.
std::vector<double> hedge_from_derivatives(const std::vector<std::vector<double>>& diffusion,
                                           const std::vector<double>& phi);

}  // namespace skelhedge
