#include "skelhedge/hedger.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "skelhedge/parallel.hpp"

namespace skelhedge {

TradingCalendar TradingCalendar::uniform(double maturity, std::size_t intervals) {
    if (!(maturity > 0.0)) throw std::invalid_argument("calendar: maturity must be positive");
    if (intervals < 1) throw std::invalid_argument("calendar: need at least one interval");
    TradingCalendar c;
    c.dates.resize(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
        c.dates[i] = maturity * static_cast<double>(i) / static_cast<double>(intervals);
    c.dates.back() = maturity;
    return c;
}

TradingCalendar TradingCalendar::from_hedges_per_day(double maturity, double hedges_per_day,
                                                     int trading_days) {
    if (!(hedges_per_day > 0.0)) throw std::invalid_argument("calendar: hedges per day must be positive");
    const double n = std::round(hedges_per_day * trading_days * maturity);
    return uniform(maturity, static_cast<std::size_t>(std::max(1.0, n)));
}

void TradingCalendar::validate() const {
    if (dates.size() < 2 || dates.front() != 0.0)
        throw std::invalid_argument("calendar must start at 0 and have an interval");
    for (std::size_t i = 1; i < dates.size(); ++i)
        if (!(dates[i] > dates[i - 1])) throw std::invalid_argument("calendar dates must increase");
}

ObservedPath simulate_observed_path(const MarketModel& model_p, const PayoffSpec& payoff,
                                    const TradingCalendar& calendar, int k, std::uint64_t seed,
                                    std::uint64_t simulation) {
    const int p = model_p.drivers();
    const double step = level_step(k);
    SkeletonCursor cur(k, p);
    for (int i = 0; i < p; ++i)
        cur.restart(i, 0.0, RandomStream(seed, stream_id(simulation, StreamRole::Physical, i)));
    ObservedPath out;
    MarketState s = model_p.initial_state();
    PathMonitor mon(s, model_p.assets());
    out.states.reserve(calendar.dates.size());
    out.monitors.reserve(calendar.dates.size());
    for (double date : calendar.dates) {
        while (cur.next_time() <= date) {
            const SkeletonEvent e = cur.pop();
            model_p.step(s, e.time - s.time, e.coordinate, e.sign * step);
            mon.observe(s);
        }
        out.states.push_back(s);
        out.monitors.push_back(mon);
    }
    out.payoff = payoff_value(payoff, s, mon);
    return out;
}

namespace {

EstimatorConfig date_config(const BacktestConfig& cfg, std::uint64_t simulation, std::size_t i) {
    EstimatorConfig e = cfg.estimator;
    e.seed = stream_id(cfg.estimator.seed, simulation, i);
    e.threads = 1;
    return e;
}

}  // namespace

HedgeRatio hedge_at_date(const MarketModel& model_q, const PayoffSpec& payoff,
                         const TradingCalendar& calendar, std::size_t i, const MarketState& state,
                         const PathMonitor& monitor, const BacktestConfig& cfg,
                         std::uint64_t simulation) {
    const ShiftedModel sh = shift_model(model_q, state, calendar.dates[i], calendar.maturity());
    const ConditionalProblem problem{sh.model, sh.state, monitor, sh.horizon};
    return estimate_hedge(problem, payoff, date_config(cfg, simulation, i));
}

namespace {

HedgeReport backtest(const MarketModel& model_p, const MarketModel& model_q,
                     const PayoffSpec& payoff, const TradingCalendar& calendar,
                     const BacktestConfig& cfg, const MeanVarianceSetup* mv) {
    calendar.validate();
    payoff.validate();
    if (model_p.measure() != Measure::Physical)
        throw std::invalid_argument("backtest: model_p must be under the physical measure");
    if (model_q.measure() == Measure::Physical)
        throw std::invalid_argument("backtest: model_q must be under a martingale measure");
    if (cfg.simulations < 1) throw std::invalid_argument("backtest: need at least one simulation");
    const int d = model_p.assets();
    const std::size_t q = calendar.intervals();
    const int kp = cfg.physical_k > 0 ? cfg.physical_k : cfg.estimator.k;

    // Every simulation shares the date-0 problem.
    EstimatorConfig cfg0 = cfg.estimator;
    cfg0.seed = stream_id(cfg.estimator.seed, 0xD0D0u);
    const HedgeRatio h0 = estimate_hedge(
        ConditionalProblem::at_origin(model_q, calendar.maturity()), payoff, cfg0);

    HedgeReport rep;
    rep.price = h0.price;
    rep.price_std_error = h0.price_std_error;
    rep.hedge0 = h0.theta.empty() ? 0.0 : h0.theta[0];
    rep.hedge0_std_error = h0.theta_std_error.empty() ? 0.0 : h0.theta_std_error[0];
    rep.simulations = cfg.simulations;
    rep.k = cfg.estimator.k;
    rep.dates = q;
    rep.seed = cfg.estimator.seed;
    rep.replications.resize(cfg.simulations);
    std::vector<std::size_t> inner_aborts(cfg.simulations, 0);

    parallel_for(cfg.simulations, cfg.estimator.threads, [&](std::size_t n) {
        ReplicationRecord& r = rep.replications[n];
        try {
            const ObservedPath path =
                simulate_observed_path(model_p, payoff, calendar, kp, cfg.estimator.seed, n);
            r.payoff = path.payoff;
            double gain = 0.0;
            MeanVarianceState mvs;
            if (mv) {
                mvs.z_tilde = mv->z0;
                mvs.initial_capital = h0.price;
            }
            for (std::size_t i = 0; i < q; ++i) {
                std::optional<HedgeRatio> est;
                const HedgeRatio* h = &h0;
                if (i > 0) {
                    est = hedge_at_date(model_q, payoff, calendar, i, path.states[i],
                                        path.monitors[i], cfg, n);
                    h = &*est;
                    inner_aborts[n] += est->aborted;
                }
                const MarketState& now = path.states[i];
                const MarketState& next = path.states[i + 1];
                if (mv) {
                    mvs.zeta = zeta_tilde(calendar.dates[i], mv->hobson, mv->z0, mv->maturity);
                    const double ds = next.price[0] - now.price[0];
                    const double theta = h->theta.empty() ? 0.0 : h->theta[0];
                    const MeanVarianceStep st =
                        mean_variance_strategy_step(mvs, theta, h->price, ds);
                    mvs = st.state;
                    if (cfg.keep_ratios) r.ratios.push_back(st.position);
                } else {
                    for (int a = 0; a < static_cast<int>(h->theta.size()) && a < d; ++a)
                        gain += h->theta[a] * (next.price[a] - now.price[a]);
                    if (cfg.keep_ratios) r.ratios.push_back(h->theta.empty() ? 0.0 : h->theta[0]);
                }
            }
            if (mv) gain = mvs.gain;
            r.replicated = h0.price + gain;
            r.gamma = r.payoff - r.replicated;
        } catch (const SimulationAbort& e) {
            r.aborted = true;
            r.reason = e.what();
        } catch (const DensityAbort& e) {
            r.aborted = true;
            r.reason = e.what();
        } catch (const std::domain_error& e) {
            r.aborted = true;
            r.reason = e.what();
        }
    });

    std::vector<double> gammas;
    for (std::size_t n = 0; n < cfg.simulations; ++n) {
        rep.estimator_aborts += inner_aborts[n];
        if (rep.replications[n].aborted)
            ++rep.aborted;
        else
            gammas.push_back(rep.replications[n].gamma);
    }
    const SampleStats st = sample_stats(gammas);
    rep.mean_gamma = st.mean;
    rep.gamma_std_dev = st.std_dev;
    rep.gamma_std_error = st.std_error;
    rep.percent_error = rep.price != 0.0 ? 100.0 * rep.mean_gamma / rep.price : 0.0;
    return rep;
}

}  // namespace

HedgeReport run_backtest(const MarketModel& model_p, const MarketModel& model_q,
                         const PayoffSpec& payoff, const TradingCalendar& calendar,
                         const BacktestConfig& config) {
    return backtest(model_p, model_q, payoff, calendar, config, nullptr);
}

HedgeReport run_backtest_mean_variance(const MarketModel& model_p, const MarketModel& model_q,
                                       const PayoffSpec& payoff, const TradingCalendar& calendar,
                                       const BacktestConfig& config,
                                       const MeanVarianceSetup& setup) {
    if (model_p.assets() != 1) throw std::invalid_argument("mean-variance backtest needs one asset");
    return backtest(model_p, model_q, payoff, calendar, config, &setup);
}

HedgeReport run_backtest_fs_heston(const HestonParams& params, const PayoffSpec& payoff,
                                   const TradingCalendar& calendar, const BacktestConfig& config) {
    const MarketModel p = MarketModel::heston(params, Measure::Physical);
    return run_backtest(p, minimal_measure(p), payoff, calendar, config);
}

HedgeReport run_backtest_mv_heston(const HestonParams& params, const PayoffSpec& payoff,
                                   const TradingCalendar& calendar, const BacktestConfig& config,
                                   VommDynamics dynamics) {
    const MarketModel p = MarketModel::heston(params, Measure::Physical);
    const double T = calendar.maturity();
    MeanVarianceSetup setup;
    setup.hobson = hobson_params(params);
    setup.z0 = z_tilde_0(setup.hobson, params.y0, T);
    setup.maturity = T;
    return run_backtest_mean_variance(p, variance_optimal_measure(p, T, dynamics), payoff,
                                      calendar, config, setup);
}

}  // namespace skelhedge
