#ifndef ISCHED_POLICIES_HPP
#define ISCHED_POLICIES_HPP

#include "isched/dynamics.hpp"
#include "isched/model.hpp"
#include "isched/solver.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace isched {

enum class PolicyKind { HorizonOpt, F1, F2 };

std::string_view policy_name(PolicyKind kind);
/// Accepts "horizon"/"HorizonOpt", "f1"/"F1", "f2"/"F2". Throws InvalidSpec.
PolicyKind parse_policy(std::string_view name);

struct Decision {
    std::int64_t tick = 0;
    Phase phase;
};

struct ControllerState {
    Phase prev_phase;
    GreenAge green_age;
    std::vector<Phase> f2_cycle;
    std::vector<Decision> decision_log;
};

/// Re-plans k phases from the fresh snapshot and commits only the first.
Phase decide_horizon_opt(const Scheduler &scheduler, const TrafficSnapshot &s,
                         const ControllerState &st, const SolverConfig &cfg);

/// Congestion-first baseline: the maximal phase covering the most queued
/// vehicles, ties to the smallest phase.
Phase decide_f1(const TrafficSnapshot &s, std::span<const Phase> maximal_phases);

/// Fixed-time baseline: cycle[(tick / D) mod |cycle|], blind to queues.
Phase decide_f2(std::int64_t tick, const ControllerState &st, int phase_ticks);

/// Throws InvalidCycle unless the cycle is nonempty, feasible and opens
/// every path at least once.
void validate_f2_cycle(std::span<const Phase> cycle, const ConflictMatrix &conflicts);

/// Owns one episode's controller state and dispatches to a policy.
class Controller {
public:
    Controller(PolicyKind kind, const Scheduler &scheduler, SolverConfig cfg);
    Controller(PolicyKind kind, const Scheduler &scheduler, SolverConfig cfg,
               std::vector<Phase> f2_cycle);

    [[nodiscard]] PolicyKind kind() const { return kind_; }
    [[nodiscard]] const ControllerState &state() const { return state_; }
    [[nodiscard]] const SolverConfig &config() const { return cfg_; }

    /// Chooses the phase for the next D ticks and switches to it.
    const Phase &decide(const TrafficSnapshot &s);

    /// Ages the green counters of the currently open paths by one tick.
    void tick();

private:
    PolicyKind kind_;
    const Scheduler &scheduler_;
    SolverConfig cfg_;
    ControllerState state_;
};

} // namespace isched

#endif // ISCHED_POLICIES_HPP
