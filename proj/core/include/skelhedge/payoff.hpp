#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>

#include "skelhedge/market.hpp"

namespace skelhedge {

enum class PayoffKind {
    EuropeanPut,
    EuropeanCall,
    Digital,
    OneTouch,
    BlacDownOut,
    TerminalPrice,
    Constant,
};

std::string to_string(PayoffKind kind);

// Discounted claim. `level` is the strike, barrier, lock level or constant
// depending on the kind; single-asset payoffs read asset 0.
struct PayoffSpec {
    PayoffKind kind = PayoffKind::EuropeanPut;
    double level = 100.0;

    static PayoffSpec put(double strike) { return {PayoffKind::EuropeanPut, strike}; }
    static PayoffSpec call(double strike) { return {PayoffKind::EuropeanCall, strike}; }
    static PayoffSpec digital(double strike) { return {PayoffKind::Digital, strike}; }
    static PayoffSpec one_touch(double barrier) { return {PayoffKind::OneTouch, barrier}; }
    static PayoffSpec blac(double lock) { return {PayoffKind::BlacDownOut, lock}; }
    static PayoffSpec terminal_price() { return {PayoffKind::TerminalPrice, 0.0}; }
    static PayoffSpec constant(double c) { return {PayoffKind::Constant, c}; }

    bool path_dependent() const {
        return kind == PayoffKind::OneTouch || kind == PayoffKind::BlacDownOut;
    }
    void validate() const;
};

// Running extrema of the asset prices at monitored points.
class PathMonitor {
public:
    PathMonitor() = default;
    PathMonitor(const MarketState& s, int assets);

    void observe(const MarketState& s) {
        for (int i = 0; i < assets_; ++i) {
            min_[i] = std::min(min_[i], s.price[i]);
            max_[i] = std::max(max_[i], s.price[i]);
        }
    }

    int assets() const { return assets_; }
    double running_min(int i) const { return min_[i]; }
    double running_max(int i) const { return max_[i]; }

private:
    int assets_ = 0;
    std::array<double, kMaxAssets> min_{};
    std::array<double, kMaxAssets> max_{};
};

// H given the terminal state and the running extrema up to maturity.
double payoff_value(const PayoffSpec& h, const MarketState& terminal, const PathMonitor& monitor);

// Value of H if it no longer depends on the future of the path.
std::optional<double> settled_value(const PayoffSpec& h, const PathMonitor& monitor);

double evaluate(const PayoffSpec& h, const StatePath& path, int assets);

}  // namespace skelhedge
