#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "skelhedge/first_passage.hpp"
#include "skelhedge/rng.hpp"

namespace skelhedge {

inline constexpr std::size_t kDefaultEventCap = 10'000'000;

// Hitting times of one coordinate through successive +-2^-k levels.
// Coordinates are 0-based.
struct LevelCrossingClock {
    int k = 1;
    int coordinate = 0;
    std::vector<double> times;
    std::vector<int> signs;

    std::size_t size() const { return times.size(); }
    // Walk value after the first n events.
    double walk_value(std::size_t n) const;
    // Number of events with time <= t.
    std::size_t count_until(double t) const;
};

// Appends i.i.d. passages until the last time exceeds the horizon.
LevelCrossingClock extend_clock(LevelCrossingClock clock, double horizon, RandomStream& rng,
                                std::size_t cap = kDefaultEventCap);

// Drops events after t except the first one beyond t.
LevelCrossingClock truncate_clock(const LevelCrossingClock& clock, double t);

struct SkeletonEvent {
    double time;
    int coordinate;
    int sign;
};

struct SkeletonGrid {
    int k = 1;
    int p = 1;
    double horizon = 0.0;
    std::vector<SkeletonEvent> events;
};

// Union of per-coordinate events up to the horizon, sorted by time; equal
// times are ordered by coordinate.
SkeletonGrid merge_partition(std::span<const LevelCrossingClock> clocks, double horizon);

// Restriction of a grid to one coordinate (without the post-horizon event).
LevelCrossingClock restrict_grid(const SkeletonGrid& grid, int coordinate);

struct StepPath {
    std::vector<double> times;   // jump times
    std::vector<double> values;  // value after each jump
    double value_at(double t) const;
    double terminal() const { return values.empty() ? 0.0 : values.back(); }
};

// A^{k,j}: the coordinate's walk as a right-continuous step function.
StepPath reconstruct_walk(const SkeletonGrid& grid, int coordinate);

// Clocks for p coordinates, one stream per coordinate keyed by (replication, coordinate).
std::vector<LevelCrossingClock> sample_clocks(int k, int p, double horizon, std::uint64_t seed,
                                              std::uint64_t replication,
                                              std::size_t cap = kDefaultEventCap);

SkeletonGrid sample_grid(int k, int p, double horizon, std::uint64_t seed,
                         std::uint64_t replication);

// Streams the merged skeleton forward without storing it. Each coordinate
// carries its next event and the stream its later excursions are drawn from.
class SkeletonCursor {
public:
    static constexpr int kMaxCoordinates = 8;

    SkeletonCursor(int k, int p);

    int k() const { return k_; }
    int p() const { return p_; }

    // Schedules the outstanding event of coordinate i; subsequent excursions come from rng.
    void schedule(int i, double time, int sign, const RandomStream& rng);

    // Draws a fresh excursion for coordinate i starting at time t.
    void restart(int i, double t, const RandomStream& rng);

    // Reverses the sign of every event drawn from here on.
    void set_flip(bool flip) { flip_ = flip; }

    int next_coordinate() const;
    double next_time() const { return next_[next_coordinate()]; }
    double next_time(int i) const { return next_[i]; }
    int next_sign(int i) const { return sign_[i]; }
    const RandomStream& stream(int i) const { return rng_[i]; }

    // Returns the earliest pending event and replaces it with the coordinate's
    // following excursion.
    SkeletonEvent pop();

    std::size_t events_popped() const { return popped_; }

private:
    int k_;
    int p_;
    double scale_;
    bool flip_ = false;
    std::size_t popped_ = 0;
    double next_[kMaxCoordinates];
    int sign_[kMaxCoordinates];
    RandomStream rng_[kMaxCoordinates];
};

}  // namespace skelhedge
