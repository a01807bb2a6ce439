#include "skelhedge/measures.hpp"

#include <cmath>

namespace skelhedge {

MarketModel minimal_measure(const MarketModel& physical) {
    return physical.with_measure(Measure::MinimalMartingale);
}

HobsonParams hobson_params(const HestonParams& h) {
    return HobsonParams::make(h.kappa, h.theta, h.sigma, h.rho, h.drift - h.rate);
}

MarketModel variance_optimal_measure(const MarketModel& physical, double maturity,
                                     VommDynamics dynamics) {
    if (physical.kind() != ModelKind::Heston || dynamics == VommDynamics::Minimal)
        return physical.with_measure(Measure::VarianceOptimal);
    return physical.with_measure(Measure::VarianceOptimal)
        .with_variance_optimal_schedule(hobson_params(physical.heston()), maturity);
}

MeanVarianceStep mean_variance_strategy_step(const MeanVarianceState& state, double theta_pure,
                                             double v_prev, double ds) {
    if (!(state.z_tilde > 0.0))
        throw DensityAbort("variance-optimal density proxy is not positive");
    double position = theta_pure;
    if (state.zeta != 0.0)
        position -= state.zeta / state.z_tilde * (v_prev - state.initial_capital - state.gain);
    MeanVarianceState next = state;
    next.z_tilde += state.zeta * ds;
    next.gain += position * ds;
    if (!(next.z_tilde > 0.0)) throw DensityAbort("variance-optimal density proxy crossed zero");
    return {position, next};
}

}  // namespace skelhedge
