#include "skelhedge/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

namespace skelhedge {

namespace {

EstimatorConfig estimator_config(const ExperimentConfig& c, int k) {
    EstimatorConfig e;
    e.k = k;
    e.outer_paths = c.outer;
    e.inner_paths = c.inner;
    e.seed = c.seed;
    e.threads = c.threads;
    e.antithetic = c.antithetic;
    e.directions = c.directions;
    return e;
}

ResultRow base_row(const ExperimentConfig& c, int k) {
    ResultRow r;
    r.preset = c.preset;
    r.model = to_string(c.model);
    r.measure = to_string(c.hedge_measure);
    r.payoff = to_string(c.payoff.kind);
    r.k = k;
    r.outer = c.outer;
    r.inner = c.inner;
    r.seed = c.seed;
    return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ResultRow run_hedge(const ExperimentConfig& c, const MarketModel& q, int k) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto problem = ConditionalProblem::at_origin(q, c.maturity);
    const auto cfg = estimator_config(c, k);
    const HedgeRatio h = estimate_hedge(problem, c.payoff, cfg);
    ResultRow r = base_row(c, k);
    r.hedge = h.theta.empty() ? 0.0 : h.theta[0];
    r.hedge_std_error = h.theta_std_error.empty() ? 0.0 : h.theta_std_error[0];
    r.price = h.price;
    r.price_std_error = h.price_std_error;
    r.aborted = h.aborted;
    if (c.cost_increment && q.drivers() > q.assets()) {
        const auto cost = estimate_cost_increment(problem, c.payoff, cfg);
        r.cost_increment = cost.front().value;
        r.cost_increment_std_error = cost.front().std_error;
    }
    r.runtime_s = seconds_since(t0);
    return r;
}

ResultRow run_one_backtest(const ExperimentConfig& c, const MarketModel& p, const MarketModel& q,
                           int k, double hpd) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto calendar = TradingCalendar::from_hedges_per_day(c.maturity, hpd, c.trading_days);
    BacktestConfig bt;
    bt.estimator = estimator_config(c, k);
    bt.simulations = c.sims;
    bt.physical_k = c.physical_k;
    HedgeReport rep;
    if (c.strategy == StrategyKind::MeanVariance) {
        MeanVarianceSetup setup;
        setup.hobson = hobson_params(c.heston);
        setup.z0 = z_tilde_0(setup.hobson, c.heston.y0, c.maturity);
        setup.maturity = c.maturity;
        rep = run_backtest_mean_variance(p, q, c.payoff, calendar, bt, setup);
    } else {
        rep = run_backtest(p, q, c.payoff, calendar, bt);
    }
    ResultRow r = base_row(c, k);
    r.hedges_per_day = hpd;
    r.simulations = c.sims;
    r.hedge = rep.hedge0;
    r.hedge_std_error = rep.hedge0_std_error;
    r.price = rep.price;
    r.price_std_error = rep.price_std_error;
    r.hedging_error = rep.mean_gamma;
    r.st_dev = rep.gamma_std_dev;
    r.percent_error = rep.percent_error;
    r.aborted = rep.aborted;
    r.runtime_s = seconds_since(t0);
    return r;
}

}  // namespace

MarketModel hedging_model(const ExperimentConfig& c) {
    const MarketModel p = c.physical_model();
    switch (c.hedge_measure) {
        case Measure::Physical: return p;
        case Measure::MinimalMartingale: return minimal_measure(p);
        case Measure::VarianceOptimal: return variance_optimal_measure(p, c.maturity, c.vomm_dynamics);
    }
    return minimal_measure(p);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& c, const ProgressFn& progress) {
    c.validate();
    set_exit_time_method(c.sampler);
    const MarketModel p = c.physical_model();
    const MarketModel q = hedging_model(c);
    std::vector<ResultRow> rows;
    for (int k : c.k_list) {
        if (c.kind == ExperimentKind::Hedge) {
            rows.push_back(run_hedge(c, q, k));
            if (progress) progress(rows.back());
            continue;
        }
        for (double hpd : c.hedges_per_day) {
            rows.push_back(run_one_backtest(c, p, q, k, hpd));
            if (progress) progress(rows.back());
        }
    }
    return rows;
}

void dump_grid(std::ostream& out, const ExperimentConfig& c) {
    c.validate();
    set_exit_time_method(c.sampler);
    const MarketModel p = c.physical_model();
    const SkeletonGrid g = sample_grid(c.k_list.front(), p.drivers(), c.maturity, c.seed, 0);
    out << "time,coordinate,sign\r\n";
    char buf[64];
    for (const auto& e : g.events) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,%d\r\n", e.time, e.coordinate + 1, e.sign);
        out << buf;
    }
}

void dump_zeta(std::ostream& out, const ExperimentConfig& c, int points) {
    if (c.model != ModelKind::Heston) throw ConfigError("--dump-zeta needs the Heston model");
    if (points < 2) throw ConfigError("need at least two points");
    HobsonParams h;
    try {
        h = hobson_params(c.heston);
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    const double T = c.maturity;
    const double z0 = z_tilde_0(h, c.heston.y0, T);
    out << "t,F,zeta\r\n";
    char buf[96];
    for (int i = 0; i < points; ++i) {
        const double t = i + 1 == points ? T : T * i / (points - 1);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\r\n", t, hobson_F(T - t, h),
                      zeta_tilde(t, h, z0, T));
        out << buf;
    }
}

}  // namespace skelhedge
