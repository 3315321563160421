#ifndef ISCHED_SOLVER_HPP
#define ISCHED_SOLVER_HPP

#include "isched/dynamics.hpp"
#include "isched/model.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace isched {

struct SolverConfig {
    int horizon = 3;                  // k signal decisions planned jointly
    bool maximal_only = true;
    std::optional<std::int64_t> wmax = 60; // starvation threshold in ticks
    DynamicsConfig dynamics;
    std::uint64_t oracle_cap = 1'000'000;

    void validate() const;
};

using Schedule = std::vector<Phase>;

struct Solution {
    Schedule schedule;
    std::int64_t cost = 0;
    std::uint64_t nodes_explored = 0;
    std::uint64_t schedules_evaluated = 0; // complete k-phase schedules costed
    std::chrono::nanoseconds elapsed{0};
};

/// Exact k-step planner for one conflict matrix.
///
/// Both search routes walk candidate phases in ascending bit order at every
/// depth and only accept a strictly cheaper schedule, so ties resolve to the
/// lexicographically smallest phase sequence in either route.
class Scheduler {
public:
    explicit Scheduler(ConflictMatrix conflicts);

    [[nodiscard]] const ConflictMatrix &conflicts() const { return conflicts_; }
    [[nodiscard]] const std::vector<Phase> &feasible_phases() const { return feasible_; }
    [[nodiscard]] const std::vector<Phase> &maximal_phases() const { return maximal_; }

    /// Feasible (or maximal) phases in ascending order. When the starvation
    /// guard fires, only phases that open the path of the longest-waiting
    /// over-threshold front vehicle survive; ties go to the lowest path.
    [[nodiscard]] std::vector<Phase> candidate_phases(const TrafficSnapshot &s,
                                                      const Phase &prev_phase,
                                                      const SolverConfig &cfg) const;

    /// Depth-first branch-and-bound. A node is cut when its accrued cost plus
    /// the queue-position lower bound reaches the incumbent.
    [[nodiscard]] Solution optimize_schedule(const TrafficSnapshot &s, const Phase &prev_phase,
                                             const SolverConfig &cfg) const;

    /// Full enumeration of every candidate sequence. Throws OracleTooLarge
    /// when (candidates)^k exceeds cfg.oracle_cap.
    [[nodiscard]] Solution exhaustive_oracle(const TrafficSnapshot &s, const Phase &prev_phase,
                                             const SolverConfig &cfg) const;

private:
    ConflictMatrix conflicts_;
    std::vector<Phase> feasible_;
    std::vector<Phase> maximal_;
};

/// Path whose front vehicle the starvation guard protects, if any.
std::optional<std::size_t> starving_path(const TrafficSnapshot &s, std::int64_t wmax);

} // namespace isched

#endif // ISCHED_SOLVER_HPP
