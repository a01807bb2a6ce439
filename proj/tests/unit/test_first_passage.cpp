#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <vector>

#include "skelhedge/first_passage.hpp"
#include "skelhedge/rng.hpp"

using namespace skelhedge;

namespace {

using boost::math::quadrature::gauss_kronrod;

double integrate(auto f, double a, double b) { return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13); }

double ks_one_sample(std::vector<double> x, auto cdf) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= t) ++i;
        while (j < b.size() && b[j] <= t) ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

// Critical values at the 1% level.
double ks_crit(double n) { return 1.628 / std::sqrt(n); }
double ks_crit(double n, double m) { return 1.628 * std::sqrt((n + m) / (n * m)); }

// Exit time of a fine Euler walk from [-1, 1] with the Brownian-bridge crossing correction.
double euler_exit_time(RandomStream& rng, double dt) {
    double x = 0.0, t = 0.0;
    const double sd = std::sqrt(dt);
    for (;;) {
        const double y = x + sd * standard_normal(rng);
        t += dt;
        if (std::abs(y) >= 1.0) return t - 0.5 * dt;
        const double pu = std::exp(-2.0 * (1.0 - x) * (1.0 - y) / dt);
        const double pl = std::exp(-2.0 * (1.0 + x) * (1.0 + y) / dt);
        if (rng.uniform() < pu + pl) return t - 0.5 * dt;
        x = y;
    }
}

std::vector<double> draw(double (*f)(RandomStream&), std::size_t n, std::uint64_t stream) {
    RandomStream rng(2024, stream);
    std::vector<double> out(n);
    for (auto& v : out) v = f(rng);
    return out;
}

}  // namespace

TEST(ExitTimeLaw, DensityIntegratesToOne) {
    const double mass = integrate([](double t) { return exit_time_density(t); }, 0.0, 40.0);
    EXPECT_NEAR(mass, 1.0, 1e-10);
}

TEST(ExitTimeLaw, MeanOneVarianceTwoThirds) {
    const double m1 = integrate([](double t) { return t * exit_time_density(t); }, 0.0, 60.0);
    const double m2 = integrate([](double t) { return t * t * exit_time_density(t); }, 0.0, 60.0);
    EXPECT_NEAR(m1, 1.0, 1e-9);
    EXPECT_NEAR(m2 - m1 * m1, 2.0 / 3.0, 1e-9);
}

TEST(ExitTimeLaw, SeriesAgreeAcrossTheSwitch) {
    EXPECT_NEAR(exit_time_density(0.6 - 1e-12), exit_time_density(0.6 + 1e-12), 1e-10);
    EXPECT_NEAR(exit_time_survival(0.6 - 1e-12), exit_time_survival(0.6 + 1e-12), 1e-10);
}

TEST(ExitTimeLaw, SurvivalIsTailIntegral) {
    for (double t : {0.05, 0.3, 0.6, 1.0, 2.5, 6.0}) {
        const double tail = integrate([](double s) { return exit_time_density(s); }, t, 60.0);
        EXPECT_NEAR(exit_time_survival(t), tail, 1e-10) << t;
    }
    EXPECT_DOUBLE_EQ(exit_time_cdf(0.0), 0.0);
}

TEST(ExitTimeLaw, GammaEnvelopeBoundsDensityRatio) {
    double sup = 0.0;
    for (double t = 1e-3; t < 30.0; t += 1e-3)
        sup = std::max(sup, exit_time_density(t) / ExitTimeProposal::density(t));
    EXPECT_LE(sup, ExitTimeProposal::bound);
    EXPECT_GT(sup, 0.99 * ExitTimeProposal::bound);
}

class Sampler : public ::testing::TestWithParam<int> {
protected:
    double (*fn() const)(RandomStream&) {
        return GetParam() == 0 ? &sample_exit_time_table : &sample_exit_time_gamma;
    }
};

TEST_P(Sampler, MomentsMatch) {
    const auto x = draw(fn(), 400000, 1 + GetParam());
    double s = 0, s2 = 0;
    for (double v : x) {
        s += v;
        s2 += v * v;
    }
    const double n = x.size(), mean = s / n, var = s2 / n - mean * mean;
    EXPECT_NEAR(mean, 1.0, 5.0 * std::sqrt(2.0 / 3.0 / n));
    EXPECT_NEAR(var, 2.0 / 3.0, 0.01);
}

TEST_P(Sampler, KolmogorovSmirnovAgainstAnalyticCdf) {
    const auto x = draw(fn(), 200000, 10 + GetParam());
    EXPECT_LT(ks_one_sample(x, exit_time_cdf), ks_crit(x.size()));
}

TEST_P(Sampler, QuantilesMatchInvertedCdf) {
    const auto x0 = draw(fn(), 200000, 20 + GetParam());
    auto x = x0;
    std::sort(x.begin(), x.end());
    for (double p : {0.01, 0.1, 0.5, 0.9, 0.99}) {
        boost::math::tools::eps_tolerance<double> tol(50);
        std::uintmax_t it = 200;
        const auto r = boost::math::tools::bisect(
            [p](double t) { return exit_time_cdf(t) - p; }, 1e-3, 20.0, tol, it);
        const double q = 0.5 * (r.first + r.second);
        const double se = std::sqrt(p * (1 - p) / x.size()) / exit_time_density(q);
        EXPECT_NEAR(x[static_cast<std::size_t>(p * x.size())], q, 5.0 * se) << p;
    }
}

INSTANTIATE_TEST_SUITE_P(Methods, Sampler, ::testing::Values(0, 1),
                         [](const auto& info) { return info.param == 0 ? "Table" : "Gamma"; });

TEST(ExitTimeSampler, TwoSampleKsAgainstFineEuler) {
    RandomStream rng(77, 1);
    std::vector<double> euler(20000);
    for (auto& v : euler) v = euler_exit_time(rng, 2e-4);
    const auto x = draw(&sample_exit_time, 20000, 30);
    EXPECT_LT(ks_two_sample(x, euler), ks_crit(x.size(), euler.size()));
}

TEST(ExitTimeSampler, ResidualMatchesConditionalLaw) {
    for (double age : {0.1, 0.5, 1.5, 4.0}) {
        RandomStream rng(5, static_cast<std::uint64_t>(age * 100));
        std::vector<double> x(100000);
        for (auto& v : x) v = sample_exit_residual(age, rng);
        const double sa = exit_time_survival(age);
        auto cdf = [&](double r) { return 1.0 - exit_time_survival(age + r) / sa; };
        EXPECT_LT(ks_one_sample(x, cdf), ks_crit(x.size())) << age;
    }
}

TEST(ExitTimeSampler, MethodSwitch) {
    EXPECT_EQ(exit_time_method(), ExitTimeMethod::Table);
    RandomStream a(1, 1), b(1, 1);
    set_exit_time_method(ExitTimeMethod::Gamma);
    const double g = sample_exit_time(a);
    set_exit_time_method(ExitTimeMethod::Table);
    EXPECT_EQ(g, sample_exit_time_gamma(b));
}

TEST(FirstPassage, ScaledDurationAndFairSign) {
    RandomStream rng(3, 3);
    const int n = 400000;
    int up = 0;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const Passage p = sample_first_passage(rng, 3);
        ASSERT_TRUE(p.sign == 1 || p.sign == -1);
        up += p.sign == 1;
        s += p.duration;
    }
    EXPECT_NEAR(static_cast<double>(up) / n, 0.5, 0.002);
    EXPECT_NEAR(s / n, std::ldexp(1.0, -6), 0.01 * std::ldexp(1.0, -6));
    EXPECT_EQ(level_step(3), 0.125);
    EXPECT_EQ(level_scale(3), 1.0 / 64.0);
}
