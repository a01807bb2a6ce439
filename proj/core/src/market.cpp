#include "skelhedge/market.hpp"

#include <algorithm>
#include <cmath>

namespace skelhedge {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::BlackScholesMulti: return "black-scholes";
        case ModelKind::Cev: return "cev";
        case ModelKind::Heston: return "heston";
    }
    return "unknown";
}

std::string to_string(Measure measure) {
    switch (measure) {
        case Measure::Physical: return "physical";
        case Measure::MinimalMartingale: return "minimal";
        case Measure::VarianceOptimal: return "variance-optimal";
    }
    return "unknown";
}

std::vector<std::vector<double>> upper_factor(const std::vector<std::vector<double>>& c) {
    const std::size_t n = c.size();
    for (const auto& row : c)
        if (row.size() != n) throw std::invalid_argument("correlation matrix must be square");
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(c[i][i] - 1.0) > 1e-12)
            throw std::invalid_argument("correlation matrix must have unit diagonal");
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(c[i][j] - c[j][i]) > 1e-12)
                throw std::invalid_argument("correlation matrix must be symmetric");
    }
    // Cholesky of the index-reversed matrix, reversed back.
    std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
    auto rc = [&](std::size_t i, std::size_t j) { return c[n - 1 - i][n - 1 - j]; };
    for (std::size_t j = 0; j < n; ++j) {
        double d = rc(j, j);
        for (std::size_t m = 0; m < j; ++m) d -= l[j][m] * l[j][m];
        if (d < -1e-10) throw std::invalid_argument("correlation matrix is not positive semidefinite");
        l[j][j] = d > 1e-14 ? std::sqrt(d) : 0.0;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = rc(i, j);
            for (std::size_t m = 0; m < j; ++m) s -= l[i][m] * l[j][m];
            if (l[j][j] > 0.0)
                l[i][j] = s / l[j][j];
            else if (std::abs(s) > 1e-10)
                throw std::invalid_argument("correlation matrix is not positive semidefinite");
        }
    }
    std::vector<std::vector<double>> u(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) u[i][j] = l[n - 1 - i][n - 1 - j];
    return u;
}

MarketModel MarketModel::black_scholes(BlackScholesParams params, Measure measure) {
    const std::size_t d = params.spot.size();
    if (d == 0 || d > static_cast<std::size_t>(kMaxAssets))
        throw std::invalid_argument("black-scholes: unsupported number of assets");
    if (params.vol.size() != d) throw std::invalid_argument("black-scholes: vol size mismatch");
    if (params.drift.empty()) params.drift.assign(d, params.rate);
    if (params.drift.size() != d) throw std::invalid_argument("black-scholes: drift size mismatch");
    if (params.correlation.empty()) {
        params.correlation.assign(d, std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < d; ++i) params.correlation[i][i] = 1.0;
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (!(params.spot[i] > 0.0)) throw std::invalid_argument("black-scholes: spot must be positive");
        if (!(params.vol[i] >= 0.0)) throw std::invalid_argument("black-scholes: vol must be >= 0");
    }
    MarketModel m;
    m.kind_ = ModelKind::BlackScholesMulti;
    m.measure_ = measure;
    m.assets_ = m.drivers_ = static_cast<int>(d);
    m.factor_ = upper_factor(params.correlation);
    m.bs_ = std::move(params);
    m.refresh();
    return m;
}

MarketModel MarketModel::cev(CevParams params, Measure measure) {
    if (!(params.spot > 0.0)) throw std::invalid_argument("cev: spot must be positive");
    if (!(params.sigma >= 0.0)) throw std::invalid_argument("cev: sigma must be >= 0");
    MarketModel m;
    m.kind_ = ModelKind::Cev;
    m.measure_ = measure;
    m.assets_ = m.drivers_ = 1;
    m.cev_ = params;
    m.refresh();
    return m;
}

MarketModel MarketModel::heston(HestonParams params, Measure measure) {
    if (!(params.spot > 0.0)) throw std::invalid_argument("heston: spot must be positive");
    if (!(params.kappa > 0.0) || !(params.theta > 0.0) || !(params.y0 > 0.0))
        throw std::invalid_argument("heston: kappa, theta and y0 must be positive");
    if (!(params.sigma >= 0.0)) throw std::invalid_argument("heston: sigma must be >= 0");
    if (!(std::abs(params.rho) <= 1.0)) throw std::invalid_argument("heston: |rho| must be <= 1");
    if (!std::isfinite(params.m())) throw std::invalid_argument("heston: m must be finite");
    MarketModel m;
    m.kind_ = ModelKind::Heston;
    m.measure_ = measure;
    m.assets_ = 1;
    m.drivers_ = 2;
    m.heston_ = params;
    m.refresh();
    return m;
}

void MarketModel::refresh() {
    loading_.fill(0.0);
    half_var_.fill(0.0);
    excess_.fill(0.0);
    if (kind_ == ModelKind::BlackScholesMulti) {
        for (int i = 0; i < assets_; ++i) {
            for (int j = 0; j < drivers_; ++j)
                loading_[i * kMaxAssets + j] = bs_.vol[i] * factor_[i][j];
            half_var_[i] = 0.5 * bs_.vol[i] * bs_.vol[i];
            excess_[i] = bs_.drift[i] - bs_.rate;
        }
    } else if (kind_ == ModelKind::Cev) {
        excess_[0] = cev_.drift - cev_.rate;
    } else {
        excess_[0] = heston_.drift - heston_.rate;
    }
}

MarketModel MarketModel::with_measure(Measure measure) const {
    MarketModel m = *this;
    m.measure_ = measure;
    return m;
}

MarketModel MarketModel::with_time_offset(double offset) const {
    MarketModel m = *this;
    m.time_offset_ = offset;
    return m;
}

MarketModel MarketModel::with_variance_optimal_schedule(const HobsonParams& hobson,
                                                        double maturity) const {
    if (kind_ != ModelKind::Heston)
        throw std::invalid_argument("variance-optimal schedule applies to Heston only");
    MarketModel m = *this;
    m.vomm_ = VommSchedule{hobson, maturity};
    return m;
}

MarketModel MarketModel::with_spot(std::span<const double> spot) const {
    MarketModel m = *this;
    if (static_cast<int>(spot.size()) != assets_)
        throw std::invalid_argument("with_spot: size mismatch");
    if (kind_ == ModelKind::BlackScholesMulti)
        m.bs_.spot.assign(spot.begin(), spot.end());
    else if (kind_ == ModelKind::Cev)
        m.cev_.spot = spot[0];
    else
        m.heston_.spot = spot[0];
    return m;
}

MarketModel MarketModel::with_vol_level(double y0) const {
    if (kind_ != ModelKind::Heston) throw std::invalid_argument("with_vol_level: Heston only");
    MarketModel m = *this;
    m.heston_.y0 = y0;
    return m;
}

MarketState MarketModel::initial_state() const {
    MarketState s;
    switch (kind_) {
        case ModelKind::BlackScholesMulti:
            for (int i = 0; i < assets_; ++i) s.price[i] = bs_.spot[i];
            break;
        case ModelKind::Cev: s.price[0] = cev_.spot; break;
        case ModelKind::Heston:
            s.price[0] = heston_.spot;
            s.variance = heston_.y0 * heston_.y0;
            break;
    }
    return s;
}

void MarketModel::step(MarketState& s, double dt, int driver, double increment) const {
    const bool physical = measure_ == Measure::Physical;
    switch (kind_) {
        case ModelKind::BlackScholesMulti: {
            for (int i = 0; i < assets_; ++i) {
                double x = loading_[i * kMaxAssets + driver] * increment - half_var_[i] * dt;
                if (physical) x += excess_[i] * dt;
                s.price[i] *= std::exp(x);
            }
            break;
        }
        case ModelKind::Cev: {
            const double S = s.price[0];
            const double mu = physical ? excess_[0] : 0.0;
            if (cev_.beta == 2.0) {
                s.price[0] = S * std::exp(cev_.sigma * increment +
                                          (mu - 0.5 * cev_.sigma * cev_.sigma) * dt);
            } else {
                const double half_beta = 0.5 * cev_.beta;
                const double sb = std::pow(S, half_beta);
                const double next = S + mu * S * dt + cev_.sigma * sb * increment +
                                    0.5 * cev_.sigma * cev_.sigma * half_beta * (sb * sb / S) *
                                        (increment * increment - dt);
                s.price[0] = std::max(next, 1e-12);
            }
            break;
        }
        case ModelKind::Heston: {
            const HestonParams& h = heston_;
            const double vp = s.variance > 0.0 ? s.variance : 0.0;
            const double y = std::sqrt(vp);
            const double dw1 = driver == 0 ? increment : 0.0;
            const double dw2 = driver == 1 ? increment : 0.0;
            double log_step = y * dw1 - 0.5 * vp * dt;
            double kappa = h.kappa;
            if (physical) {
                log_step += excess_[0] * vp * dt;
            } else {
                kappa += h.sigma * h.rho * excess_[0];
                if (measure_ == Measure::VarianceOptimal && vomm_) {
                    const double tau = vomm_->maturity - (time_offset_ + s.time);
                    kappa += h.sigma * h.sigma * (1.0 - h.rho * h.rho) *
                             hobson_F(std::max(tau, 0.0), vomm_->hobson);
                }
            }
            s.price[0] *= std::exp(log_step);
            const double dz = h.rho * dw1 + std::sqrt(1.0 - h.rho * h.rho) * dw2;
            s.variance += 2.0 * (h.kappa * h.theta - kappa * vp) * dt + 2.0 * h.sigma * y * dz;
            break;
        }
    }
    s.time += dt;
    for (int i = 0; i < assets_; ++i)
        if (!std::isfinite(s.price[i]) || !(s.price[i] > 0.0))
            throw SimulationAbort("non-finite or non-positive price after step");
    if (!std::isfinite(s.variance)) throw SimulationAbort("non-finite variance after step");
}

double MarketModel::diffusion(const MarketState& s, int asset, int driver) const {
    switch (kind_) {
        case ModelKind::BlackScholesMulti: return s.price[asset] * loading_[asset * kMaxAssets + driver];
        case ModelKind::Cev:
            return driver == 0 ? cev_.sigma * std::pow(s.price[0], 0.5 * cev_.beta) : 0.0;
        case ModelKind::Heston: return driver == 0 ? s.price[0] * s.vol_level() : 0.0;
    }
    return 0.0;
}

MarketState step_price(const MarketModel& model, MarketState state, double dt,
                       std::span<const double> increments) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_price: dt must be positive");
    if (static_cast<int>(increments.size()) != model.drivers())
        throw std::invalid_argument("step_price: one increment per driver required");
    int active = 0, nonzero = 0;
    for (std::size_t j = 0; j < increments.size(); ++j)
        if (increments[j] != 0.0) {
            active = static_cast<int>(j);
            ++nonzero;
        }
    if (nonzero > 1) throw std::invalid_argument("step_price: at most one nonzero increment");
    model.step(state, dt, active, nonzero ? increments[active] : 0.0);
    return state;
}

const MarketState& StatePath::at(double t) const {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t n = static_cast<std::size_t>(it - times.begin());
    return states[n == 0 ? 0 : n - 1];
}

StatePath simulate_path(const MarketModel& model, const SkeletonGrid& grid,
                        const MarketState& initial) {
    if (grid.p < model.drivers())
        throw std::invalid_argument("simulate_path: grid has fewer coordinates than model drivers");
    StatePath path;
    path.horizon = grid.horizon;
    path.times.reserve(grid.events.size() + 1);
    path.states.reserve(grid.events.size() + 1);
    path.times.push_back(initial.time);
    path.states.push_back(initial);
    MarketState s = initial;
    const double h = level_step(grid.k);
    for (const auto& e : grid.events) {
        if (e.coordinate < model.drivers())
            model.step(s, e.time - s.time, e.coordinate, e.sign * h);
        path.times.push_back(e.time);
        path.states.push_back(s);
    }
    return path;
}

ShiftedModel shift_model(const MarketModel& model, const MarketState& observed, double s,
                         double maturity) {
    if (s < 0.0 || s > maturity) throw std::invalid_argument("shift_model: date outside [0, T]");
    MarketState start = observed;
    start.time = 0.0;
    return {model.with_time_offset(model.time_offset() + s), start, maturity - s};
}

}  // namespace skelhedge
