#include "skelhedge/gkw.hpp"

#include <cmath>
#include <stdexcept>

#include "skelhedge/parallel.hpp"

namespace skelhedge {

ConditionalProblem ConditionalProblem::at_origin(const MarketModel& model, double horizon) {
    const MarketState s = model.initial_state();
    return {model, s, PathMonitor(s, model.assets()), horizon};
}

namespace {

double continue_path(const MarketModel& model, const PayoffSpec& h, MarketState s,
                     PathMonitor mon, double horizon, SkeletonCursor& cur, double step,
                     std::size_t cap) {
    const bool watch = h.path_dependent();
    std::size_t n = 0;
    for (;;) {
        if (cur.next_time() > horizon) break;
        const SkeletonEvent e = cur.pop();
        model.step(s, e.time - s.time, e.coordinate, e.sign * step);
        if (watch) {
            mon.observe(s);
            if (auto v = settled_value(h, mon)) return *v;
        }
        if (++n > cap) throw SimulationAbort("continuation exceeded the event cap");
    }
    return payoff_value(h, s, mon);
}

}  // namespace

DerivativeSample estimate_derivative(const ConditionalProblem& problem, const PayoffSpec& h,
                                     int k, int j, std::size_t inner_paths, std::uint64_t seed,
                                     std::uint64_t replication, bool antithetic,
                                     std::size_t cap) {
    const MarketModel& model = problem.model;
    const int p = model.drivers();
    if (j < 0 || j >= p) throw std::out_of_range("estimate_derivative: direction out of range");
    if (inner_paths < 1) throw std::invalid_argument("estimate_derivative: inner_paths must be >= 1");
    if (auto v = settled_value(h, problem.monitor)) return {0.0, *v};

    const double scale = level_scale(k);
    const double step = level_step(k);
    const double horizon = problem.horizon;

    // Prefix up to the first hit of coordinate j.
    SkeletonCursor prefix(k, p);
    for (int i = 0; i < p; ++i)
        prefix.restart(i, 0.0, RandomStream(seed, stream_id(replication, j, StreamRole::Prefix, i)));
    MarketState s = problem.state;
    PathMonitor mon = problem.monitor;
    double last[SkeletonCursor::kMaxCoordinates] = {};
    std::size_t n = 0;
    for (;;) {
        const int i = prefix.next_coordinate();
        if (prefix.next_time(i) > horizon) return {0.0, payoff_value(h, s, mon)};
        if (i == j) break;
        const SkeletonEvent e = prefix.pop();
        model.step(s, e.time - s.time, e.coordinate, e.sign * step);
        mon.observe(s);
        last[i] = e.time;
        if (++n > cap) throw SimulationAbort("prefix exceeded the event cap");
    }
    const double t_prev = s.time;
    const double t_hit = prefix.next_time(j);
    const int eta = prefix.next_sign(j);

    const MarketState s_ex = s;
    const PathMonitor mon_ex = mon;
    if (auto v = settled_value(h, mon_ex)) return {0.0, *v};
    MarketState s_in = s;
    model.step(s_in, t_hit - t_prev, j, eta * step);
    PathMonitor mon_in = mon;
    mon_in.observe(s_in);

    double sum_in = 0.0, sum_ex = 0.0;
    for (std::size_t m = 0; m < inner_paths; ++m) {
        SkeletonCursor incl(k, p), excl(k, p);
        const bool flip = antithetic && (m % 2 == 1);
        incl.set_flip(flip);
        excl.set_flip(flip);
        for (int i = 0; i < p; ++i) {
            const RandomStream cs(seed, stream_id(replication, j, StreamRole::Continuation, m, i));
            RandomStream rs(seed, stream_id(replication, j, StreamRole::Residual, m, i));
            const double r_time = t_prev + scale * sample_exit_residual((t_prev - last[i]) / scale, rs);
            const int r_sign = rs.sign();
            excl.schedule(i, r_time, r_sign, cs);
            if (i == j) {
                incl.restart(i, t_hit, cs);
            } else if (r_time > t_hit) {
                incl.schedule(i, r_time, r_sign, cs);
            } else {
                RandomStream alt(seed, stream_id(replication, j, StreamRole::ResidualAlt, m, i));
                const double a_time = t_hit + scale * sample_exit_residual((t_hit - last[i]) / scale, alt);
                incl.schedule(i, a_time, alt.sign(), cs);
            }
        }
        sum_in += continue_path(model, h, s_in, mon_in, horizon, incl, step, cap);
        sum_ex += continue_path(model, h, s_ex, mon_ex, horizon, excl, step, cap);
    }
    const double inner = static_cast<double>(inner_paths);
    return {(sum_in - sum_ex) / (inner * step * eta), 0.5 * (sum_in + sum_ex) / inner};
}

namespace {

struct DirectionResult {
    DerivativeEstimate estimate;
    std::vector<double> prices;
    std::size_t aborted = 0;
};

DirectionResult run_direction(const ConditionalProblem& problem, const PayoffSpec& h,
                              const EstimatorConfig& cfg, int j) {
    const std::size_t outer = cfg.outer_paths;
    std::vector<double> values(outer), prices(outer);
    std::vector<char> ok(outer, 0);
    parallel_for(outer, cfg.threads, [&](std::size_t r) {
        try {
            const auto smp = estimate_derivative(problem, h, cfg.k, j, cfg.inner_paths, cfg.seed, r,
                                                 cfg.antithetic, cfg.event_cap);
            values[r] = smp.value;
            prices[r] = smp.price;
            ok[r] = 1;
        } catch (const SimulationAbort&) {
            ok[r] = 0;
        }
    });
    DirectionResult out;
    std::vector<double> kept;
    kept.reserve(outer);
    for (std::size_t r = 0; r < outer; ++r) {
        if (!ok[r]) {
            ++out.aborted;
            continue;
        }
        kept.push_back(values[r]);
        out.prices.push_back(prices[r]);
    }
    const SampleStats st = sample_stats(kept);
    out.estimate = {j, st.mean, st.std_error, cfg.inner_paths, kept.size(), cfg.k};
    return out;
}

void check_config(const EstimatorConfig& cfg) {
    if (cfg.k < 1) throw std::invalid_argument("estimator: k must be >= 1");
    if (cfg.outer_paths < 1 || cfg.inner_paths < 1)
        throw std::invalid_argument("estimator: path counts must be >= 1");
}

}  // namespace

std::vector<double> hedge_from_derivatives(const std::vector<std::vector<double>>& m,
                                           const std::vector<double>& phi) {
    const std::size_t n = phi.size();
    std::vector<double> theta(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = i + 1; l < m.size(); ++l)
            if (m[l][i] != 0.0) throw std::invalid_argument("diag(S) sigma must be upper triangular");
        double s = phi[i];
        for (std::size_t l = 0; l < i; ++l) s -= m[l][i] * theta[l];
        if (m[i][i] == 0.0 && s == 0.0) continue;  // no exposure in a frozen direction
        if (!(std::abs(m[i][i]) > 1e-300) || !std::isfinite(m[i][i]))
            throw std::domain_error("singular diag(S) sigma");
        theta[i] = s / m[i][i];
    }
    return theta;
}

HedgeRatio estimate_hedge(const ConditionalProblem& problem, const PayoffSpec& h,
                          const EstimatorConfig& cfg) {
    check_config(cfg);
    const MarketModel& model = problem.model;
    const int d = model.assets();
    const int nd = cfg.directions > 0 ? std::min(cfg.directions, d) : d;

    HedgeRatio out;
    out.spot.assign(problem.state.price.begin(), problem.state.price.begin() + d);
    out.diffusion.assign(d, std::vector<double>(d, 0.0));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) out.diffusion[a][b] = model.diffusion(problem.state, a, b);

    if (auto v = settled_value(h, problem.monitor)) {
        out.settled = true;
        out.price = *v;
        out.theta.assign(nd, 0.0);
        out.theta_std_error.assign(nd, 0.0);
        return out;
    }

    std::vector<double> phi, prices;
    for (int j = 0; j < nd; ++j) {
        DirectionResult r = run_direction(problem, h, cfg, j);
        phi.push_back(r.estimate.value);
        out.derivatives.push_back(r.estimate);
        prices.insert(prices.end(), r.prices.begin(), r.prices.end());
        out.aborted += r.aborted;
    }
    out.theta = hedge_from_derivatives(out.diffusion, phi);

    // Directions use independent streams, so the variances add.
    out.theta_std_error.assign(nd, 0.0);
    for (int l = 0; l < nd; ++l) {
        if (out.derivatives[l].std_error == 0.0) continue;
        std::vector<double> unit(nd, 0.0);
        unit[l] = 1.0;
        const auto col = hedge_from_derivatives(out.diffusion, unit);
        for (int i = 0; i < nd; ++i) {
            const double se = col[i] * out.derivatives[l].std_error;
            out.theta_std_error[i] += se * se;
        }
    }
    for (double& v : out.theta_std_error) v = std::sqrt(v);

    const SampleStats ps = sample_stats(prices);
    out.price = ps.mean;
    out.price_std_error = ps.std_error;
    return out;
}

std::vector<DerivativeEstimate> estimate_cost_increment(const ConditionalProblem& problem,
                                                        const PayoffSpec& h,
                                                        const EstimatorConfig& cfg) {
    check_config(cfg);
    const int d = problem.model.assets(), p = problem.model.drivers();
    if (p == d) throw std::invalid_argument("complete market has zero orthogonal component");
    std::vector<DerivativeEstimate> out;
    for (int j = d; j < p; ++j) out.push_back(run_direction(problem, h, cfg, j).estimate);
    return out;
}

}  // namespace skelhedge
