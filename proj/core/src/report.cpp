#include "skelhedge/report.hpp"

#include <cstdio>
#include <iomanip>
#include <ostream>

namespace skelhedge {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

}  // namespace

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> csv_columns() {
    return {"preset",          "model",          "measure",
            "payoff",          "k",              "hedges_per_day",
            "simulations",     "outer",          "inner",
            "seed",            "hedge",          "hedge_std_error",
            "price",           "price_std_error", "cost_increment",
            "cost_increment_std_error", "hedging_error", "st_dev",
            "percent_error",   "aborted",        "runtime_s"};
}

std::vector<std::string> csv_fields(const ResultRow& r) {
    return {r.preset,
            r.model,
            r.measure,
            r.payoff,
            std::to_string(r.k),
            fmt(r.hedges_per_day),
            r.simulations ? std::to_string(*r.simulations) : std::string(),
            std::to_string(r.outer),
            std::to_string(r.inner),
            std::to_string(r.seed),
            fmt(r.hedge),
            fmt(r.hedge_std_error),
            fmt(r.price),
            fmt(r.price_std_error),
            fmt(r.cost_increment),
            fmt(r.cost_increment_std_error),
            fmt(r.hedging_error),
            fmt(r.st_dev),
            fmt(r.percent_error),
            std::to_string(r.aborted),
            fmt(r.runtime_s)};
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool with_runtime) {
    auto line = [&](std::vector<std::string> f) {
        if (!with_runtime) f.pop_back();
        for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << csv_quote(f[i]);
        out << "\r\n";
    };
    out << "# skelhedge csv schema " << kCsvSchemaVersion << "\r\n";
    line(csv_columns());
    for (const auto& r : rows) line(csv_fields(r));
}

void write_metadata(std::ostream& out, const ExperimentConfig& cfg) {
    out << "# skelhedge run metadata\n";
    out << "software_version = " << kVersion << "\n";
    out << "csv_schema = " << kCsvSchemaVersion << "\n";
    out << "threads = " << cfg.threads << "\n";
    std::string section;
    for (const auto& [s, k, v] : describe(cfg)) {
        if (s != section) {
            out << "\n[" << s << "]\n";
            section = s;
        }
        out << k << " = " << v << "\n";
    }
}

void write_summary(std::ostream& out, const std::vector<ResultRow>& rows) {
    for (const auto& r : rows) {
        out << r.preset << "  " << r.model << "/" << r.payoff << "  measure=" << r.measure
            << "  k=" << r.k;
        if (r.hedges_per_day) out << "  hedges/day=" << fmt(*r.hedges_per_day);
        out << "\n";
        if (r.hedging_error) {
            out << "  hedging error " << fmt(*r.hedging_error) << "  st. dev. " << fmt(*r.st_dev)
                << "  price " << fmt(r.price) << "  % error " << fmt(*r.percent_error)
                << "  (" << *r.simulations << " sims, " << r.aborted << " aborted)\n";
            out << "  hedge at 0 " << fmt(r.hedge) << " +- " << fmt(r.hedge_std_error) << "\n";
        } else {
            out << "  hedge " << fmt(r.hedge) << " +- " << fmt(r.hedge_std_error) << "  price "
                << fmt(r.price) << " +- " << fmt(r.price_std_error) << "\n";
            if (r.cost_increment)
                out << "  cost increment " << fmt(*r.cost_increment) << " +- "
                    << fmt(*r.cost_increment_std_error) << "\n";
        }
        out << "  runtime " << std::fixed << std::setprecision(2) << r.runtime_s << " s\n"
            << std::defaultfloat;
    }
}

}  // namespace skelhedge
