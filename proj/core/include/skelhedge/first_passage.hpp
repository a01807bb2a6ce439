#pragma once

#include <cmath>

#include "skelhedge/rng.hpp"

namespace skelhedge {

// Law of the exit time tau of a standard Brownian motion from [-1, 1].
// E tau = 1, Var tau = 2/3.
double exit_time_density(double t);
double exit_time_survival(double t);
inline double exit_time_cdf(double t) { return 1.0 - exit_time_survival(t); }

// Gamma proposal used by the rejection sampler.
struct ExitTimeProposal {
    static constexpr double shape = 1.09022;
    static constexpr double rate = 1.2337005501361697;  // pi^2 / 8
    static constexpr double bound = 1.2438;             // >= sup f / g
    static double density(double t);
};

// One draw of tau by the Burq-Jones gamma rejection with series squeeze.
double sample_exit_time_gamma(RandomStream& rng);

// One draw of tau by rejection from a tabulated piecewise-constant envelope
// on [0, 8] plus the exact tail beyond 8. Same law, fewer transcendentals.
double sample_exit_time_table(RandomStream& rng);

enum class ExitTimeMethod { Table, Gamma };

// Method used by sample_exit_time; process-wide, Table by default.
void set_exit_time_method(ExitTimeMethod method);
ExitTimeMethod exit_time_method();

double sample_exit_time(RandomStream& rng);

// tau - age conditional on tau > age.
double sample_exit_residual(double age, RandomStream& rng);

struct Passage {
    double duration;
    int sign;
};

// Time for a Brownian motion to move by 2^-k from its current level, and the
// direction of the move.
inline double level_scale(int k) { return std::ldexp(1.0, -2 * k); }
inline double level_step(int k) { return std::ldexp(1.0, -k); }

Passage sample_first_passage(RandomStream& rng, int k);

}  // namespace skelhedge
