#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skelhedge/hobson.hpp"
#include "skelhedge/skeleton.hpp"

namespace skelhedge {

inline constexpr int kMaxAssets = 8;

enum class ModelKind { BlackScholesMulti, Cev, Heston };
enum class Measure { Physical, MinimalMartingale, VarianceOptimal };

std::string to_string(ModelKind kind);
std::string to_string(Measure measure);

// Thrown when a simulated state stops being finite; the replication is dropped.
class SimulationAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MarketState {
    std::array<double, kMaxAssets> price{};
    double variance = 0.0;  // Heston Sigma = Y^2
    double time = 0.0;      // time since the model's origin

    double vol_level() const { return variance > 0.0 ? std::sqrt(variance) : 0.0; }
};

struct BlackScholesParams {
    std::vector<double> spot;
    std::vector<double> vol;    // |sigma^i|
    std::vector<double> drift;  // b_i, empty means r
    std::vector<std::vector<double>> correlation;
    double rate = 0.0;
};

struct CevParams {
    double spot = 100.0;
    double sigma = 0.2;
    double beta = 2.0;
    double rate = 0.0;
    double drift = 0.0;
};

struct HestonParams {
    double spot = 100.0;
    double y0 = 0.2;
    double kappa = 1.0;
    double theta = 0.04;
    double sigma = 0.3;
    double rho = 0.0;
    double rate = 0.0;
    double drift = 0.0;  // b

    double m() const { return theta - sigma * sigma / (2.0 * kappa); }
};

// Dynamics of the discounted prices (and Heston variance) driven by the skeleton.
class MarketModel {
public:
    static MarketModel black_scholes(BlackScholesParams params, Measure measure = Measure::Physical);
    static MarketModel cev(CevParams params, Measure measure = Measure::Physical);
    static MarketModel heston(HestonParams params, Measure measure = Measure::Physical);

    ModelKind kind() const { return kind_; }
    Measure measure() const { return measure_; }
    int assets() const { return assets_; }
    int drivers() const { return drivers_; }

    const BlackScholesParams& bs() const { return bs_; }
    const CevParams& cev() const { return cev_; }
    const HestonParams& heston() const { return heston_; }
    // Upper-triangular factor with U U^T = correlation.
    const std::vector<std::vector<double>>& factor() const { return factor_; }

    // Offset of the model clock relative to the original time origin.
    double time_offset() const { return time_offset_; }

    MarketModel with_measure(Measure measure) const;
    MarketModel with_time_offset(double offset) const;
    // Variance-optimal drift correction sigma^2 (1 - rho^2) F(T - t) on the variance.
    MarketModel with_variance_optimal_schedule(const HobsonParams& hobson, double maturity) const;
    bool has_variance_optimal_schedule() const { return vomm_.has_value(); }
    MarketModel with_spot(std::span<const double> spot) const;
    MarketModel with_vol_level(double y0) const;

    MarketState initial_state() const;

    // One skeleton event: coordinate `driver` moved by `increment` after `dt`.
    void step(MarketState& s, double dt, int driver, double increment) const;

    // Coefficient of dW^driver in dS^asset, i.e. (diag(S) sigma)_{asset, driver}.
    double diffusion(const MarketState& s, int asset, int driver) const;

private:
    ModelKind kind_ = ModelKind::BlackScholesMulti;
    Measure measure_ = Measure::Physical;
    int assets_ = 1;
    int drivers_ = 1;
    double time_offset_ = 0.0;

    BlackScholesParams bs_;
    CevParams cev_;
    HestonParams heston_;

    std::vector<std::vector<double>> factor_;
    std::array<double, kMaxAssets * kMaxAssets> loading_{};  // vol_i * U_ij
    std::array<double, kMaxAssets> half_var_{};
    std::array<double, kMaxAssets> excess_{};  // b_i - r

    struct VommSchedule {
        HobsonParams hobson;
        double maturity;
    };
    std::optional<VommSchedule> vomm_;

    void refresh();
};

// Upper-triangular U with U U^T = c; throws if c is not positive semidefinite.
std::vector<std::vector<double>> upper_factor(const std::vector<std::vector<double>>& c);

// Spec-style step: one increment per driver, at most one nonzero.
MarketState step_price(const MarketModel& model, MarketState state, double dt,
                       std::span<const double> increments);

struct StatePath {
    std::vector<double> times;          // initial time, then every event time
    std::vector<MarketState> states;    // same length as times
    double horizon = 0.0;

    const MarketState& at(double t) const;
    const MarketState& terminal() const { return states.back(); }
};

StatePath simulate_path(const MarketModel& model, const SkeletonGrid& grid,
                        const MarketState& initial);

struct ShiftedModel {
    MarketModel model;
    MarketState state;
    double horizon;
};

// Re-roots the model at an observed state at date s for simulation on [0, T - s].
ShiftedModel shift_model(const MarketModel& model, const MarketState& observed, double s,
                         double maturity);

}  // namespace skelhedge
