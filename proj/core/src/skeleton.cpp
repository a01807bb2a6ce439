#include "skelhedge/skeleton.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace skelhedge {

double LevelCrossingClock::walk_value(std::size_t n) const {
    long long sum = 0;
    for (std::size_t m = 0; m < n && m < signs.size(); ++m) sum += signs[m];
    return std::ldexp(static_cast<double>(sum), -k);
}

std::size_t LevelCrossingClock::count_until(double t) const {
    return static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) -
                                    times.begin());
}

LevelCrossingClock extend_clock(LevelCrossingClock clock, double horizon, RandomStream& rng,
                                std::size_t cap) {
    if (!(horizon > 0.0)) throw std::invalid_argument("extend_clock: horizon must be positive");
    if (clock.k < 1) throw std::invalid_argument("extend_clock: k must be >= 1");
    double t = clock.times.empty() ? 0.0 : clock.times.back();
    while (t <= horizon) {
        if (clock.times.size() >= cap)
            throw std::runtime_error("extend_clock: event cap " + std::to_string(cap) +
                                     " exceeded for coordinate " +
                                     std::to_string(clock.coordinate) + " at k=" +
                                     std::to_string(clock.k));
        const Passage step = sample_first_passage(rng, clock.k);
        t += step.duration;
        clock.times.push_back(t);
        clock.signs.push_back(step.sign);
    }
    return clock;
}

LevelCrossingClock truncate_clock(const LevelCrossingClock& clock, double t) {
    LevelCrossingClock out{clock.k, clock.coordinate, {}, {}};
    const std::size_t n = std::min(clock.count_until(t) + 1, clock.size());
    out.times.assign(clock.times.begin(), clock.times.begin() + n);
    out.signs.assign(clock.signs.begin(), clock.signs.begin() + n);
    return out;
}

SkeletonGrid merge_partition(std::span<const LevelCrossingClock> clocks, double horizon) {
    SkeletonGrid grid;
    grid.p = static_cast<int>(clocks.size());
    grid.horizon = horizon;
    if (!clocks.empty()) grid.k = clocks.front().k;
    std::size_t total = 0;
    for (const auto& c : clocks) {
        if (c.k != grid.k) throw std::invalid_argument("merge_partition: clocks differ in k");
        total += c.count_until(horizon);
    }
    grid.events.reserve(total);
    for (std::size_t j = 0; j < clocks.size(); ++j) {
        const auto& c = clocks[j];
        const std::size_t n = c.count_until(horizon);
        for (std::size_t m = 0; m < n; ++m)
            grid.events.push_back({c.times[m], static_cast<int>(j), c.signs[m]});
    }
    std::stable_sort(grid.events.begin(), grid.events.end(),
                     [](const SkeletonEvent& a, const SkeletonEvent& b) {
                         if (a.time != b.time) return a.time < b.time;
                         return a.coordinate < b.coordinate;
                     });
    return grid;
}

LevelCrossingClock restrict_grid(const SkeletonGrid& grid, int coordinate) {
    LevelCrossingClock c{grid.k, coordinate, {}, {}};
    for (const auto& e : grid.events) {
        if (e.coordinate != coordinate) continue;
        c.times.push_back(e.time);
        c.signs.push_back(e.sign);
    }
    return c;
}

double StepPath::value_at(double t) const {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 0.0;
    return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

StepPath reconstruct_walk(const SkeletonGrid& grid, int coordinate) {
    if (coordinate < 0 || coordinate >= grid.p)
        throw std::out_of_range("reconstruct_walk: coordinate out of range");
    StepPath path;
    long long sum = 0;
    for (const auto& e : grid.events) {
        if (e.coordinate != coordinate) continue;
        sum += e.sign;
        path.times.push_back(e.time);
        path.values.push_back(std::ldexp(static_cast<double>(sum), -grid.k));
    }
    return path;
}

std::vector<LevelCrossingClock> sample_clocks(int k, int p, double horizon, std::uint64_t seed,
                                              std::uint64_t replication, std::size_t cap) {
    std::vector<LevelCrossingClock> clocks;
    clocks.reserve(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
        RandomStream rng(seed, stream_id(replication, StreamRole::Prefix, j));
        clocks.push_back(extend_clock(LevelCrossingClock{k, j, {}, {}}, horizon, rng, cap));
    }
    return clocks;
}

SkeletonGrid sample_grid(int k, int p, double horizon, std::uint64_t seed,
                         std::uint64_t replication) {
    const auto clocks = sample_clocks(k, p, horizon, seed, replication);
    return merge_partition(clocks, horizon);
}

SkeletonCursor::SkeletonCursor(int k, int p) : k_(k), p_(p), scale_(level_scale(k)) {
    if (k < 1) throw std::invalid_argument("SkeletonCursor: k must be >= 1");
    if (p < 1 || p > kMaxCoordinates)
        throw std::invalid_argument("SkeletonCursor: unsupported number of coordinates");
    std::fill(next_, next_ + kMaxCoordinates, 0.0);
    std::fill(sign_, sign_ + kMaxCoordinates, 1);
}

void SkeletonCursor::schedule(int i, double time, int sign, const RandomStream& rng) {
    next_[i] = time;
    sign_[i] = flip_ ? -sign : sign;
    rng_[i] = rng;
}

void SkeletonCursor::restart(int i, double t, const RandomStream& rng) {
    rng_[i] = rng;
    next_[i] = t + scale_ * sample_exit_time(rng_[i]);
    sign_[i] = flip_ ? -rng_[i].sign() : rng_[i].sign();
}

int SkeletonCursor::next_coordinate() const {
    int best = 0;
    for (int i = 1; i < p_; ++i)
        if (next_[i] < next_[best]) best = i;
    return best;
}

SkeletonEvent SkeletonCursor::pop() {
    const int i = next_coordinate();
    const SkeletonEvent e{next_[i], i, sign_[i]};
    next_[i] += scale_ * sample_exit_time(rng_[i]);
    const int s = rng_[i].sign();
    sign_[i] = flip_ ? -s : s;
    ++popped_;
    return e;
}

}  // namespace skelhedge
