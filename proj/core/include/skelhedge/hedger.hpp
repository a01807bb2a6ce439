#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "skelhedge/gkw.hpp"
#include "skelhedge/measures.hpp"

namespace skelhedge {

struct TradingCalendar {
    std::vector<double> dates;  // 0 = s_0 < ... < s_q = T

    static TradingCalendar uniform(double maturity, std::size_t intervals);
    // trading_days per unit of model time (the paper's month has 22).
    static TradingCalendar from_hedges_per_day(double maturity, double hedges_per_day,
                                               int trading_days = 22);

    double maturity() const { return dates.back(); }
    std::size_t intervals() const { return dates.size() - 1; }
    void validate() const;
};

enum class HedgeStrategy { Pure, MeanVariance };

struct BacktestConfig {
    EstimatorConfig estimator;  // per-date budget; estimator.seed is the master seed
    std::size_t simulations = 100;
    int physical_k = 0;         // skeleton level of the physical path, 0 = estimator.k
    bool keep_ratios = false;   // store per-date hedge ratios in the report
};

struct ReplicationRecord {
    double payoff = 0.0;
    double replicated = 0.0;  // H^ = price + sum theta dS
    double gamma = 0.0;
    bool aborted = false;
    std::string reason;
    std::vector<double> ratios;  // asset-0 position per date
};

struct HedgeReport {
    double price = 0.0;
    double price_std_error = 0.0;
    double hedge0 = 0.0;  // theta^1 at s_0
    double hedge0_std_error = 0.0;
    double mean_gamma = 0.0;
    double gamma_std_dev = 0.0;
    double gamma_std_error = 0.0;
    double percent_error = 0.0;  // 100 gamma / price
    std::size_t simulations = 0;
    std::size_t aborted = 0;
    std::size_t estimator_aborts = 0;  // dropped inner replications
    int k = 0;
    std::size_t dates = 0;
    std::uint64_t seed = 0;
    std::vector<ReplicationRecord> replications;
};

struct MeanVarianceSetup {
    HobsonParams hobson;
    double z0 = 0.0;
    double maturity = 1.0;
};

HedgeReport run_backtest(const MarketModel& model_p, const MarketModel& model_q,
                         const PayoffSpec& payoff, const TradingCalendar& calendar,
                         const BacktestConfig& config);

// Same as run_backtest with the mean-variance feedback strategy on top of the
// hedge computed under model_q.
HedgeReport run_backtest_mean_variance(const MarketModel& model_p, const MarketModel& model_q,
                                       const PayoffSpec& payoff, const TradingCalendar& calendar,
                                       const BacktestConfig& config,
                                       const MeanVarianceSetup& setup);

// Heston hedged under the minimal martingale measure.
HedgeReport run_backtest_fs_heston(const HestonParams& params, const PayoffSpec& payoff,
                                   const TradingCalendar& calendar, const BacktestConfig& config);

HedgeReport run_backtest_mv_heston(const HestonParams& params, const PayoffSpec& payoff,
                                   const TradingCalendar& calendar, const BacktestConfig& config,
                                   VommDynamics dynamics = VommDynamics::Hobson);

}  // namespace skelhedge

namespace skelhedge {

// Estimator run at trading date i of simulation n from the observed state and
// running extrema; depends on nothing after s_i.
HedgeRatio hedge_at_date(const MarketModel& model_q, const PayoffSpec& payoff,
                         const TradingCalendar& calendar, std::size_t i, const MarketState& state,
                         const PathMonitor& monitor, const BacktestConfig& config,
                         std::uint64_t simulation);

// Physical path observed at the calendar dates.
struct ObservedPath {
    std::vector<MarketState> states;
    std::vector<PathMonitor> monitors;
    double payoff = 0.0;
};

ObservedPath simulate_observed_path(const MarketModel& model_p, const PayoffSpec& payoff,
                                    const TradingCalendar& calendar, int k, std::uint64_t seed,
                                    std::uint64_t simulation);

}  // namespace skelhedge
