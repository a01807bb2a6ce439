#include "skelhedge/first_passage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace skelhedge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2Over8 = kPi * kPi / 8.0;
constexpr double kSeriesSwitch = 0.6;
constexpr int kMaxTerms = 64;

// n-th term of the long-time (eigenfunction) density series.
double long_term(int n, double t) {
    const double m = 2 * n + 1;
    return 0.5 * kPi * m * std::exp(-m * m * kPi2Over8 * t);
}

// n-th term of the short-time (image) density series.
double short_term(int n, double t) {
    const double m = 2 * n + 1;
    return 2.0 * m / std::sqrt(2.0 * kPi * t * t * t) * std::exp(-m * m / (2.0 * t));
}

template <class Term>
double alternating_sum(Term term, double t) {
    double s = 0.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        const double a = term(n, t);
        s += (n % 2 == 0) ? a : -a;
        if (a < 1e-17 * std::abs(s)) break;
    }
    return s;
}

// Decides y <= f(t) from alternating partial sums; both series alternate with
// decreasing terms on their side of the switch point.
template <class Term>
bool below_density(double y, double t, Term term) {
    double s = 0.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        const double a = term(n, t);
        if (n % 2 == 0) {
            s += a;
            if (y > s) return false;
        } else {
            s -= a;
            if (y < s) return true;
        }
    }
    return y <= s;
}

}  // namespace

double exit_time_density(double t) {
    if (!(t > 0.0)) return 0.0;
    return t < kSeriesSwitch ? alternating_sum(short_term, t) : alternating_sum(long_term, t);
}

double exit_time_survival(double t) {
    if (!(t > 0.0)) return 1.0;
    double s = 0.0;
    if (t < kSeriesSwitch) {
        for (int n = 0; n < kMaxTerms; ++n) {
            const double a = std::erfc((2 * n + 1) / std::sqrt(2.0 * t));
            s += (n % 2 == 0) ? a : -a;
            if (a < 1e-18) break;
        }
        return 1.0 - 2.0 * s;
    }
    for (int n = 0; n < kMaxTerms; ++n) {
        const double m = 2 * n + 1;
        const double a = std::exp(-m * m * kPi2Over8 * t) / m;
        s += (n % 2 == 0) ? a : -a;
        if (a < 1e-18 * std::abs(s)) break;
    }
    return 4.0 / kPi * s;
}

double ExitTimeProposal::density(double t) {
    if (!(t > 0.0)) return 0.0;
    return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(t) - rate * t -
                    std::lgamma(shape));
}

double sample_exit_time_gamma(RandomStream& rng) {
    static const double log_norm =
        ExitTimeProposal::shape * std::log(ExitTimeProposal::rate) -
        std::lgamma(ExitTimeProposal::shape);
    for (;;) {
        const double t = standard_gamma(ExitTimeProposal::shape, rng) / ExitTimeProposal::rate;
        const double g = std::exp(log_norm + (ExitTimeProposal::shape - 1.0) * std::log(t) -
                                  ExitTimeProposal::rate * t);
        const double y = rng.uniform() * ExitTimeProposal::bound * g;
        const bool ok = t < kSeriesSwitch ? below_density(y, t, short_term)
                                          : below_density(y, t, long_term);
        if (ok) return t;
    }
}

double sample_exit_residual(double age, RandomStream& rng) {
    if (!(age > 0.0)) return sample_exit_time(rng);
    const double tail = exit_time_survival(age);
    if (tail >= 0.3) {
        for (;;) {
            const double t = sample_exit_time(rng);
            if (t > age) return t - age;
        }
    }
    // Invert S(t) = u S(age) on the long-time branch, where log S is nearly linear.
    const double target = std::log(rng.uniform() * tail);
    double t = std::max(age, (std::log(4.0 / kPi) - target) / kPi2Over8);
    for (int it = 0; it < 60; ++it) {
        const double s = exit_time_survival(t);
        const double step = (std::log(s) - target) * s / exit_time_density(t);
        t += step;
        if (t <= age) t = age + 1e-12;
        if (std::abs(step) < 1e-14 * t) break;
    }
    return t - age;
}

namespace {

// Equal-width cells on [0, kTableEnd] with envelope fmax >= f and squeeze
// fmin <= f per cell, plus one tail entry, drawn through a Walker alias table.
struct EnvelopeTable {
    static constexpr int kEntries = 4096;
    static constexpr int kCells = kEntries - 1;
    static constexpr double kTableEnd = 8.0;
    double width = kTableEnd / kCells;
    double fmax[kCells];
    double ratio[kCells];  // fmin / fmax
    double prob[kEntries];
    int alias[kEntries];
    double tail_survival;

    EnvelopeTable() {
        constexpr int kSub = 16;
        double mass[kEntries];
        double total = 0.0;
        for (int c = 0; c < kCells; ++c) {
            double hi = 0.0, lo = 1e300;
            for (int s = 0; s <= kSub; ++s) {
                const double f = exit_time_density(width * (c + double(s) / kSub));
                hi = std::max(hi, f);
                lo = std::min(lo, f);
            }
            fmax[c] = hi * (1.0 + 1e-6) + 1e-300;
            ratio[c] = lo * (1.0 - 1e-6) / fmax[c];
            mass[c] = fmax[c] * width;
            total += mass[c];
        }
        tail_survival = exit_time_survival(kTableEnd);
        mass[kCells] = tail_survival;
        total += tail_survival;

        // Vose alias construction.
        double scaled[kEntries];
        int small[kEntries], large[kEntries];
        int ns = 0, nl = 0;
        for (int i = 0; i < kEntries; ++i) {
            scaled[i] = mass[i] * kEntries / total;
            (scaled[i] < 1.0 ? small[ns++] : large[nl++]) = i;
        }
        while (ns > 0 && nl > 0) {
            const int s = small[--ns], l = large[--nl];
            prob[s] = scaled[s];
            alias[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            (scaled[l] < 1.0 ? small[ns++] : large[nl++]) = l;
        }
        while (nl > 0) {
            const int l = large[--nl];
            prob[l] = 1.0;
            alias[l] = l;
        }
        while (ns > 0) {
            const int s = small[--ns];
            prob[s] = 1.0;
            alias[s] = s;
        }
    }
};

const EnvelopeTable& envelope_table() {
    static const EnvelopeTable table;
    return table;
}

std::atomic<ExitTimeMethod> g_method{ExitTimeMethod::Table};

}  // namespace

double sample_exit_time_table(RandomStream& rng) {
    const EnvelopeTable& tb = envelope_table();
    for (;;) {
        const std::uint64_t r = rng();
        int cell = static_cast<int>(r >> 52);
        const double coin = static_cast<double>(r & ((std::uint64_t(1) << 52) - 1)) * 0x1.0p-52;
        if (coin >= tb.prob[cell]) cell = tb.alias[cell];
        if (cell == EnvelopeTable::kCells)
            return EnvelopeTable::kTableEnd + sample_exit_residual(EnvelopeTable::kTableEnd, rng);
        const double t = tb.width * (cell + rng.uniform());
        const double w = rng.uniform();
        if (w <= tb.ratio[cell]) return t;
        if (w * tb.fmax[cell] <= exit_time_density(t)) return t;
    }
}

void set_exit_time_method(ExitTimeMethod method) { g_method.store(method); }
ExitTimeMethod exit_time_method() { return g_method.load(); }

double sample_exit_time(RandomStream& rng) {
    return g_method.load(std::memory_order_relaxed) == ExitTimeMethod::Table
               ? sample_exit_time_table(rng)
               : sample_exit_time_gamma(rng);
}

Passage sample_first_passage(RandomStream& rng, int k) {
    const double tau = sample_exit_time(rng);
    return {tau * level_scale(k), rng.sign()};
}

}  // namespace skelhedge
