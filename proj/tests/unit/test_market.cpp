#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "skelhedge/market.hpp"
#include "skelhedge/measures.hpp"

using namespace skelhedge;

namespace {

BlackScholesParams one_asset(double vol, double drift = 0.0) {
    BlackScholesParams p;
    p.spot = {100.0};
    p.vol = {vol};
    p.drift = {drift};
    return p;
}

std::vector<std::vector<double>> constant_corr(int d, double r) {
    std::vector<std::vector<double>> c(d, std::vector<double>(d, r));
    for (int i = 0; i < d; ++i) c[i][i] = 1.0;
    return c;
}

struct Moments {
    double mean, second, se;
};

Moments terminal_moments(const MarketModel& m, int k, int reps, std::uint64_t seed, int asset = 0) {
    double s = 0, s2 = 0;
    for (int r = 0; r < reps; ++r) {
        const auto g = sample_grid(k, m.drivers(), 1.0, seed, r);
        const double x = simulate_path(m, g, m.initial_state()).terminal().price[asset];
        s += x;
        s2 += x * x;
    }
    const double mean = s / reps;
    return {mean, s2 / reps, std::sqrt((s2 / reps - mean * mean) / reps)};
}

}  // namespace

TEST(UpperFactor, ReproducesCorrelationAndIsUpperTriangular) {
    const auto c = constant_corr(5, 0.4);
    const auto u = upper_factor(c);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            if (i > j) EXPECT_EQ(u[i][j], 0.0);
            double s = 0.0;
            for (int l = 0; l < 5; ++l) s += u[i][l] * u[j][l];
            EXPECT_NEAR(s, c[i][j], 1e-14);
        }
}

TEST(UpperFactor, RejectsInvalidMatrices) {
    EXPECT_THROW(upper_factor({{1.0, 0.5}, {0.4, 1.0}}), std::invalid_argument);
    EXPECT_THROW(upper_factor({{1.0, 1.5}, {1.5, 1.0}}), std::invalid_argument);
    EXPECT_THROW(upper_factor({{2.0, 0.0}, {0.0, 1.0}}), std::invalid_argument);
    EXPECT_NO_THROW(upper_factor({{1.0, 1.0}, {1.0, 1.0}}));
}

TEST(BlackScholes, ZeroVolatilityFreezesPrices) {
    const auto m = MarketModel::black_scholes(one_asset(0.0));
    const auto g = sample_grid(3, 1, 1.0, 1, 0);
    const auto path = simulate_path(m, g, m.initial_state());
    for (const auto& s : path.states) EXPECT_EQ(s.price[0], 100.0);
}

TEST(BlackScholes, ExactLognormalStep) {
    const auto m = MarketModel::black_scholes(one_asset(0.3), Measure::MinimalMartingale);
    MarketState s = m.initial_state();
    m.step(s, 0.01, 0, 0.125);
    EXPECT_NEAR(s.price[0], 100.0 * std::exp(0.3 * 0.125 - 0.5 * 0.09 * 0.01), 1e-12);
    EXPECT_DOUBLE_EQ(s.time, 0.01);
    EXPECT_EQ(m.diffusion(m.initial_state(), 0, 0), 100.0 * 0.3);
}

TEST(BlackScholes, PhysicalDriftEntersOnlyUnderP) {
    const auto p = MarketModel::black_scholes(one_asset(0.2, 0.05));
    MarketState a = p.initial_state(), b = a;
    p.step(a, 0.5, 0, 0.0);
    minimal_measure(p).step(b, 0.5, 0, 0.0);
    EXPECT_NEAR(a.price[0], 100.0 * std::exp((0.05 - 0.02) * 0.5), 1e-12);
    EXPECT_NEAR(b.price[0], 100.0 * std::exp(-0.02 * 0.5), 1e-12);
}

TEST(BlackScholes, DiscountedPriceIsMartingale) {
    const auto m = MarketModel::black_scholes(one_asset(0.3), Measure::MinimalMartingale);
    const auto mo = terminal_moments(m, 4, 20000, 3);
    EXPECT_NEAR(mo.mean, 100.0, 4.0 * mo.se);
    // E S_T^2 = S0^2 exp(sigma^2 T) in the limit; the skeleton is within a few 4^-k.
    EXPECT_NEAR(mo.second / (100.0 * 100.0), std::exp(0.09), 0.01);
}

TEST(BlackScholes, CorrelationOfLogReturns) {
    BlackScholesParams p;
    p.spot = {100.0, 100.0};
    p.vol = {0.3, 0.3};
    p.correlation = constant_corr(2, 0.4);
    const auto m = MarketModel::black_scholes(p, Measure::MinimalMartingale);
    const int reps = 20000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int r = 0; r < reps; ++r) {
        const auto g = sample_grid(3, 2, 1.0, 17, r);
        const auto s = simulate_path(m, g, m.initial_state()).terminal();
        const double x = std::log(s.price[0] / 100.0), y = std::log(s.price[1] / 100.0);
        sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
    }
    const double n = reps;
    const double cov = sxy / n - sx / n * sy / n;
    const double corr = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
    EXPECT_NEAR(corr, 0.4, 0.03);
}

TEST(Cev, BetaTwoIsBlackScholes) {
    const auto c = MarketModel::cev({100.0, 0.25, 2.0, 0.0, 0.0}, Measure::MinimalMartingale);
    const auto b = MarketModel::black_scholes(one_asset(0.25), Measure::MinimalMartingale);
    const auto g = sample_grid(4, 1, 1.0, 4, 0);
    const auto pc = simulate_path(c, g, c.initial_state());
    const auto pb = simulate_path(b, g, b.initial_state());
    for (std::size_t i = 0; i < pc.states.size(); ++i)
        EXPECT_NEAR(pc.states[i].price[0], pb.states[i].price[0], 1e-10 * pb.states[i].price[0]);
}

TEST(Cev, MilsteinStepAndDiffusion) {
    const auto m = MarketModel::cev({100.0, 0.2, 1.6, 0.0, 0.0}, Measure::MinimalMartingale);
    MarketState s = m.initial_state();
    const double x = 0.125, dt = 0.02;
    m.step(s, dt, 0, x);
    const double sb = std::pow(100.0, 0.8);
    const double expect = 100.0 + 0.2 * sb * x + 0.5 * 0.04 * 0.8 * (sb * sb / 100.0) * (x * x - dt);
    EXPECT_NEAR(s.price[0], expect, 1e-12);
    EXPECT_NEAR(m.diffusion(m.initial_state(), 0, 0), 0.2 * sb, 1e-12);
}

TEST(Cev, StaysPositiveAndMartingale) {
    const auto m = MarketModel::cev({1.0, 1.5, 1.0, 0.0, 0.0}, Measure::MinimalMartingale);
    const auto mo = terminal_moments(m, 3, 5000, 8);
    EXPECT_GT(mo.mean, 0.0);
    const auto q = MarketModel::cev({100.0, 0.2, 1.6, 0.0, 0.0}, Measure::MinimalMartingale);
    const auto mq = terminal_moments(q, 4, 20000, 9);
    EXPECT_NEAR(mq.mean, 100.0, 4.0 * mq.se);
}

TEST(Heston, DegenerateIsBlackScholes) {
    // sigma = 0 and Sigma_0 = theta keep the variance at theta.
    HestonParams h{100.0, 0.2, 2.0, 0.04, 0.0, 0.0, 0.0, 0.0};
    const auto m = MarketModel::heston(h, Measure::MinimalMartingale);
    const auto b = MarketModel::black_scholes(one_asset(0.2), Measure::MinimalMartingale);
    const auto g = sample_grid(4, 2, 1.0, 6, 0);
    const auto ph = simulate_path(m, g, m.initial_state());
    MarketState sb = b.initial_state();
    const double step = level_step(4);
    for (std::size_t i = 0; i < g.events.size(); ++i) {
        const auto& e = g.events[i];
        b.step(sb, e.time - sb.time, 0, e.coordinate == 0 ? e.sign * step : 0.0);
        EXPECT_NEAR(ph.states[i + 1].variance, 0.04, 1e-15);
        EXPECT_NEAR(ph.states[i + 1].price[0], sb.price[0], 1e-10 * sb.price[0]);
    }
}

TEST(Heston, VarianceSchemeStep) {
    HestonParams h{100.0, 0.2, 2.0, 0.04, 0.3, -0.5, 0.0, 0.0};
    const auto m = MarketModel::heston(h, Measure::MinimalMartingale);
    MarketState s = m.initial_state();
    m.step(s, 0.01, 1, 0.125);
    const double dz = std::sqrt(1.0 - 0.25) * 0.125;
    EXPECT_NEAR(s.variance, 0.04 + 2.0 * (2.0 * 0.04 - 2.0 * 0.04) * 0.01 + 2.0 * 0.3 * 0.2 * dz, 1e-15);
    EXPECT_NEAR(s.price[0], 100.0 * std::exp(-0.5 * 0.04 * 0.01), 1e-12);
    EXPECT_EQ(m.diffusion(m.initial_state(), 0, 1), 0.0);
}

TEST(Heston, FullTruncationKeepsFinite) {
    HestonParams h{100.0, 0.1, 0.5, 0.01, 1.0, -0.9, 0.0, 0.0};
    const auto m = MarketModel::heston(h, Measure::MinimalMartingale);
    for (int r = 0; r < 200; ++r) {
        const auto g = sample_grid(3, 2, 1.0, 12, r);
        const auto s = simulate_path(m, g, m.initial_state()).terminal();
        EXPECT_TRUE(std::isfinite(s.price[0]) && s.price[0] > 0.0);
        EXPECT_TRUE(std::isfinite(s.variance));
    }
}

TEST(Heston, MinimalMeasureShiftsKappa) {
    HestonParams h{100.0, 0.2, 2.0, 0.04, 0.3, -0.5, 0.0, 0.1};
    const auto p = MarketModel::heston(h);
    const auto q = minimal_measure(p);
    MarketState a = q.initial_state();
    q.step(a, 0.01, 0, 0.0);
    const double kq = 2.0 + 0.3 * -0.5 * 0.1;
    EXPECT_NEAR(a.variance, 0.04 + 2.0 * (2.0 * 0.04 - kq * 0.04) * 0.01, 1e-15);
    MarketState b = p.initial_state();
    p.step(b, 0.01, 0, 0.0);
    EXPECT_NEAR(b.price[0], 100.0 * std::exp(-0.5 * 0.04 * 0.01 + 0.1 * 0.04 * 0.01), 1e-12);
}

TEST(Shift, RerootsClockAndHorizon) {
    HestonParams h{100.0, 0.3, 3.63, 0.04, 0.3, -0.53, 0.0, 0.01};
    const auto q = variance_optimal_measure(MarketModel::heston(h), 1.0);
    MarketState obs = q.initial_state();
    obs.time = 0.4;
    obs.price[0] = 103.0;
    const auto sh = shift_model(q, obs, 0.4, 1.0);
    EXPECT_EQ(sh.state.time, 0.0);
    EXPECT_DOUBLE_EQ(sh.horizon, 0.6);
    EXPECT_DOUBLE_EQ(sh.model.time_offset(), 0.4);
    MarketState a = obs, b = sh.state;
    q.step(a, 0.05, 1, 0.125);
    sh.model.step(b, 0.05, 1, 0.125);
    EXPECT_EQ(a.variance, b.variance);
    EXPECT_EQ(a.price[0], b.price[0]);
    EXPECT_THROW(shift_model(q, obs, 1.5, 1.0), std::invalid_argument);
}

TEST(Path, NoLookAhead) {
    const auto m = MarketModel::black_scholes(one_asset(0.3), Measure::MinimalMartingale);
    auto g = sample_grid(3, 1, 1.0, 30, 0);
    auto g2 = g;
    for (auto& e : g2.events)
        if (e.time > 0.5) e.sign = -e.sign;
    const auto a = simulate_path(m, g, m.initial_state());
    const auto b = simulate_path(m, g2, m.initial_state());
    EXPECT_EQ(a.at(0.5).price[0], b.at(0.5).price[0]);
    EXPECT_EQ(a.at(0.25).price[0], b.at(0.25).price[0]);
}

TEST(StepPrice, OneIncrementPerDriver) {
    const auto m = MarketModel::heston({}, Measure::MinimalMartingale);
    const double two[] = {0.1, 0.1}, one[] = {0.0, 0.1}, bad[] = {0.1};
    EXPECT_THROW(step_price(m, m.initial_state(), 0.01, two), std::invalid_argument);
    EXPECT_THROW(step_price(m, m.initial_state(), 0.01, bad), std::invalid_argument);
    EXPECT_THROW(step_price(m, m.initial_state(), 0.0, one), std::invalid_argument);
    const auto s = step_price(m, m.initial_state(), 0.01, one);
    EXPECT_NE(s.variance, m.initial_state().variance);
}

TEST(Models, ValidateParameters) {
    EXPECT_THROW(MarketModel::black_scholes(one_asset(-0.1)), std::invalid_argument);
    EXPECT_THROW(MarketModel::cev({-1.0, 0.2, 1.6, 0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(MarketModel::heston({100.0, 0.2, 0.0, 0.04, 0.3, 0.0, 0.0, 0.0}),
                 std::invalid_argument);
    EXPECT_THROW(MarketModel::heston({100.0, 0.2, 1.0, 0.04, 0.3, 1.5, 0.0, 0.0}),
                 std::invalid_argument);
}
