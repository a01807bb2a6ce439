#pragma once

#include <stdexcept>

#include "skelhedge/hobson.hpp"
#include "skelhedge/market.hpp"

namespace skelhedge {

// nu = 0: drop the traded drift; Heston variance dynamics follow from the
// Girsanov shift of W^1 only.
MarketModel minimal_measure(const MarketModel& physical);

enum class VommDynamics { Hobson, Minimal };

HobsonParams hobson_params(const HestonParams& h);

// Model under the variance-optimal measure. Complete markets coincide with
// the minimal measure.
MarketModel variance_optimal_measure(const MarketModel& physical, double maturity,
                                     VommDynamics dynamics = VommDynamics::Hobson);

class DensityAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MeanVarianceState {
    double z_tilde = 1.0;          // running Z~
    double gain = 0.0;             // accumulated int eta dS
    double initial_capital = 0.0;  // E_P~[H]
    double zeta = 0.0;             // zeta~ at the current date
};

struct MeanVarianceStep {
    double position;
    MeanVarianceState state;
};

// eta = theta - (zeta~/Z~)(V - initial - gain); then Z~ += zeta~ dS, gain += eta dS.
MeanVarianceStep mean_variance_strategy_step(const MeanVarianceState& state, double theta_pure,
                                             double v_prev, double ds);

}  // namespace skelhedge
