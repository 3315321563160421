#ifndef ISCHED_DYNAMICS_HPP
#define ISCHED_DYNAMICS_HPP

#include "isched/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace isched {

struct DynamicsConfig {
    int phase_ticks = 4;     // D: ticks each decision is held
    int slow_start = 1;      // S: departure-free ticks after red -> green
    double tick_seconds = 5.0;

    void validate() const;
};

/// Ticks since each path last turned green. Only meaningful for open paths.
using GreenAge = std::vector<int>;

struct Departure {
    std::size_t path = 0;
    VehicleRecord vehicle; // wait is the final wait
};

struct StepOutcome {
    TrafficSnapshot next;
    std::vector<Departure> departed;
    std::int64_t tick_cost = 0;
};

/// One tick: open warm paths release their front vehicle, every remaining
/// vehicle ages by one, and the tick costs the summed priority of the
/// vehicles left waiting.
StepOutcome step(const TrafficSnapshot &s, const Phase &phase, std::span<const int> green_age,
                 const DynamicsConfig &cfg, const ConflictMatrix &conflicts);

/// Green ages at the start of `next` when the signal moves from `prev`.
/// Newly opened and closed paths reset to zero; continuing paths keep age.
GreenAge green_age_on_switch(const Phase &prev, const Phase &next, const GreenAge &age);

/// Ages every open path by one tick.
void advance_green_age(const Phase &phase, GreenAge &age);

/// Green ages implied by a previous phase that has been held long enough to
/// be past slow start, which holds at every decision point since S < D.
GreenAge warm_green_age(const Phase &prev, const DynamicsConfig &cfg);

struct RolloutResult {
    std::int64_t total_cost = 0;
    TrafficSnapshot final;
};

/// Holds each phase for D ticks and sums the per-tick costs.
RolloutResult rollout_cost(const TrafficSnapshot &s, std::span<const Phase> schedule,
                           const Phase &prev_phase, const DynamicsConfig &cfg,
                           const ConflictMatrix &conflicts);

RolloutResult rollout_cost(const TrafficSnapshot &s, std::span<const Phase> schedule,
                           const Phase &prev_phase, GreenAge green_age, const DynamicsConfig &cfg,
                           const ConflictMatrix &conflicts);

/// Admissible bound on the cost of the next `remaining_ticks` ticks: the
/// vehicle at queue position i pays at least min(i, R) more ticks.
std::int64_t lower_bound(const TrafficSnapshot &s, std::int64_t remaining_ticks);

} // namespace isched

#endif // ISCHED_DYNAMICS_HPP
