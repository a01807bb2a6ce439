#include "skelhedge/payoff.hpp"

#include <algorithm>
#include <stdexcept>

namespace skelhedge {

std::string to_string(PayoffKind kind) {
    switch (kind) {
        case PayoffKind::EuropeanPut: return "put";
        case PayoffKind::EuropeanCall: return "call";
        case PayoffKind::Digital: return "digital";
        case PayoffKind::OneTouch: return "one-touch";
        case PayoffKind::BlacDownOut: return "blac";
        case PayoffKind::TerminalPrice: return "terminal-price";
        case PayoffKind::Constant: return "constant";
    }
    return "unknown";
}

void PayoffSpec::validate() const {
    switch (kind) {
        case PayoffKind::TerminalPrice: return;
        case PayoffKind::Constant:
            if (!(level >= 0.0)) throw std::invalid_argument("constant payoff must be >= 0");
            return;
        default:
            if (!(level > 0.0))
                throw std::invalid_argument(to_string(kind) + ": level must be positive");
    }
}

PathMonitor::PathMonitor(const MarketState& s, int assets) : assets_(assets) {
    for (int i = 0; i < assets; ++i) min_[i] = max_[i] = s.price[i];
}

namespace {

// Survives unless two or more assets have breached the lock level.
int breaches(const PathMonitor& m, double level) {
    int n = 0;
    for (int i = 0; i < m.assets(); ++i)
        if (!(m.running_min(i) > level)) ++n;
    return n;
}

}  // namespace

double payoff_value(const PayoffSpec& h, const MarketState& s, const PathMonitor& m) {
    switch (h.kind) {
        case PayoffKind::EuropeanPut: return std::max(h.level - s.price[0], 0.0);
        case PayoffKind::EuropeanCall: return std::max(s.price[0] - h.level, 0.0);
        case PayoffKind::Digital: return s.price[0] < h.level ? 1.0 : 0.0;
        case PayoffKind::OneTouch: return m.running_max(0) > h.level ? 1.0 : 0.0;
        case PayoffKind::BlacDownOut: return breaches(m, h.level) >= 2 ? 0.0 : 1.0;
        case PayoffKind::TerminalPrice: return s.price[0];
        case PayoffKind::Constant: return h.level;
    }
    return 0.0;
}

std::optional<double> settled_value(const PayoffSpec& h, const PathMonitor& m) {
    switch (h.kind) {
        case PayoffKind::OneTouch:
            if (m.running_max(0) > h.level) return 1.0;
            return std::nullopt;
        case PayoffKind::BlacDownOut:
            if (breaches(m, h.level) >= 2) return 0.0;
            return std::nullopt;
        case PayoffKind::Constant: return h.level;
        default: return std::nullopt;
    }
}

double evaluate(const PayoffSpec& h, const StatePath& path, int assets) {
    PathMonitor m(path.states.front(), assets);
    for (const auto& s : path.states) m.observe(s);
    return payoff_value(h, path.terminal(), m);
}

}  // namespace skelhedge
