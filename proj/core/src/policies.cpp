#include "isched/policies.hpp"

#include "isched/error.hpp"

#include <string>

namespace isched {

std::string_view policy_name(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::HorizonOpt:
        return "HorizonOpt";
    case PolicyKind::F1:
        return "F1";
    case PolicyKind::F2:
        return "F2";
    }
    return "?";
}

PolicyKind parse_policy(std::string_view name) {
    if (name == "horizon" || name == "HorizonOpt" || name == "opt") {
        return PolicyKind::HorizonOpt;
    }
    if (name == "f1" || name == "F1") {
        return PolicyKind::F1;
    }
    if (name == "f2" || name == "F2") {
        return PolicyKind::F2;
    }
    throw InvalidSpec("unknown policy '" + std::string(name) + "'");
}

Phase decide_horizon_opt(const Scheduler &scheduler, const TrafficSnapshot &s,
                         const ControllerState &st, const SolverConfig &cfg) {
    return scheduler.optimize_schedule(s, st.prev_phase, cfg).schedule.front();
}

Phase decide_f1(const TrafficSnapshot &s, std::span<const Phase> maximal_phases) {
    if (maximal_phases.empty()) {
        throw NoFeasibleSchedule("no maximal phases to choose from");
    }
    const Phase *best = nullptr;
    std::size_t best_cover = 0;
    for (const auto &p : maximal_phases) {
        std::size_t cover = 0;
        for (auto i : p.open_paths()) {
            cover += s.queues.at(i).size();
        }
        // Strict improvement keeps the earliest (smallest) phase on ties.
        if (best == nullptr || cover > best_cover) {
            best = &p;
            best_cover = cover;
        }
    }
    return *best;
}

Phase decide_f2(std::int64_t tick, const ControllerState &st, int phase_ticks) {
    if (st.f2_cycle.empty()) {
        throw InvalidCycle("F2 cycle is empty");
    }
    if (phase_ticks < 1 || tick < 0) {
        throw InvalidCycle("F2 needs phase_ticks >= 1 and a nonnegative tick");
    }
    const auto n = static_cast<std::int64_t>(st.f2_cycle.size());
    return st.f2_cycle[static_cast<std::size_t>((tick / phase_ticks) % n)];
}

void validate_f2_cycle(std::span<const Phase> cycle, const ConflictMatrix &conflicts) {
    if (cycle.empty()) {
        throw InvalidCycle("F2 cycle is empty");
    }
    std::uint64_t covered = 0;
    for (const auto &p : cycle) {
        if (p.width() != conflicts.size() || !is_feasible_phase(p, conflicts)) {
            throw InvalidCycle("F2 cycle phase " + to_string(p) + " is not feasible");
        }
        covered |= p.bits();
    }
    for (std::size_t i = 0; i < conflicts.size(); ++i) {
        if (((covered >> i) & 1U) == 0) {
            throw InvalidCycle("F2 cycle never opens path " + std::to_string(i));
        }
    }
}

Controller::Controller(PolicyKind kind, const Scheduler &scheduler, SolverConfig cfg)
    : Controller(kind, scheduler, std::move(cfg), scheduler.maximal_phases()) {}

Controller::Controller(PolicyKind kind, const Scheduler &scheduler, SolverConfig cfg,
                       std::vector<Phase> f2_cycle)
    : kind_(kind), scheduler_(scheduler), cfg_(std::move(cfg)) {
    cfg_.validate();
    const auto n = scheduler_.conflicts().size();
    state_.prev_phase = Phase::closed(n);
    state_.green_age.assign(n, 0);
    if (kind_ == PolicyKind::F2) {
        validate_f2_cycle(f2_cycle, scheduler_.conflicts());
    }
    state_.f2_cycle = std::move(f2_cycle);
}

const Phase &Controller::decide(const TrafficSnapshot &s) {
    Phase next;
    switch (kind_) {
    case PolicyKind::HorizonOpt:
        next = decide_horizon_opt(scheduler_, s, state_, cfg_);
        break;
    case PolicyKind::F1:
        next = decide_f1(s, scheduler_.maximal_phases());
        break;
    case PolicyKind::F2:
        next = decide_f2(s.tick, state_, cfg_.dynamics.phase_ticks);
        break;
    }
    state_.green_age = green_age_on_switch(state_.prev_phase, next, state_.green_age);
    state_.prev_phase = next;
    state_.decision_log.push_back({s.tick, next});
    return state_.prev_phase;
}

void Controller::tick() { advance_green_age(state_.prev_phase, state_.green_age); }

} // namespace isched
