#include "isched/dynamics.hpp"

#include "isched/error.hpp"

#include <algorithm>
#include <string>

namespace isched {

void DynamicsConfig::validate() const {
    if (phase_ticks < 1) {
        throw InvalidSpec("phase_ticks must be at least 1");
    }
    if (slow_start < 0) {
        throw InvalidSpec("slow_start must be nonnegative");
    }
    if (slow_start >= phase_ticks) {
        throw InvalidSpec("slow_start must be smaller than phase_ticks");
    }
    if (!(tick_seconds > 0.0)) {
        throw InvalidSpec("tick_seconds must be positive");
    }
}

StepOutcome step(const TrafficSnapshot &s, const Phase &phase, std::span<const int> green_age,
                 const DynamicsConfig &cfg, const ConflictMatrix &conflicts) {
    if (phase.width() != s.queues.size() || green_age.size() != s.queues.size()) {
        throw DimensionError("phase, green ages and snapshot disagree on path count");
    }
    if (!is_feasible_phase(phase, conflicts)) {
        throw ConstraintViolation("phase " + to_string(phase) + " opens competing paths");
    }

    StepOutcome out;
    out.next.tick = s.tick + 1;
    out.next.queues.resize(s.queues.size());
    for (std::size_t p = 0; p < s.queues.size(); ++p) {
        const auto &q = s.queues[p];
        auto first = q.begin();
        if (phase.is_open(p) && green_age[p] >= cfg.slow_start && !q.empty()) {
            out.departed.push_back({p, q.front()});
            ++first;
        }
        auto &next = out.next.queues[p];
        next.reserve(static_cast<std::size_t>(q.end() - first));
        for (auto it = first; it != q.end(); ++it) {
            next.push_back({it->priority, it->wait + 1});
            out.tick_cost += it->priority;
        }
    }
    return out;
}

GreenAge green_age_on_switch(const Phase &prev, const Phase &next, const GreenAge &age) {
    GreenAge out(next.width(), 0);
    for (std::size_t p = 0; p < next.width(); ++p) {
        if (next.is_open(p) && p < prev.width() && prev.is_open(p) && p < age.size()) {
            out[p] = age[p];
        }
    }
    return out;
}

void advance_green_age(const Phase &phase, GreenAge &age) {
    for (std::size_t p = 0; p < age.size(); ++p) {
        if (phase.is_open(p)) {
            ++age[p];
        }
    }
}

GreenAge warm_green_age(const Phase &prev, const DynamicsConfig &cfg) {
    GreenAge age(prev.width(), 0);
    for (std::size_t p = 0; p < prev.width(); ++p) {
        if (prev.is_open(p)) {
            age[p] = cfg.slow_start;
        }
    }
    return age;
}

RolloutResult rollout_cost(const TrafficSnapshot &s, std::span<const Phase> schedule,
                           const Phase &prev_phase, const DynamicsConfig &cfg,
                           const ConflictMatrix &conflicts) {
    return rollout_cost(s, schedule, prev_phase, warm_green_age(prev_phase, cfg), cfg,
                        conflicts);
}

RolloutResult rollout_cost(const TrafficSnapshot &s, std::span<const Phase> schedule,
                           const Phase &prev_phase, GreenAge green_age, const DynamicsConfig &cfg,
                           const ConflictMatrix &conflicts) {
    if (schedule.empty()) {
        throw DimensionError("schedule must hold at least one phase");
    }
    RolloutResult r{0, s};
    Phase prev = prev_phase;
    for (const auto &phase : schedule) {
        if (!is_feasible_phase(phase, conflicts)) {
            throw ConstraintViolation("schedule phase " + to_string(phase) +
                                      " opens competing paths");
        }
        green_age = green_age_on_switch(prev, phase, green_age);
        for (int t = 0; t < cfg.phase_ticks; ++t) {
            auto outcome = step(r.final, phase, green_age, cfg, conflicts);
            r.total_cost += outcome.tick_cost;
            r.final = std::move(outcome.next);
            advance_green_age(phase, green_age);
        }
        prev = phase;
    }
    return r;
}

std::int64_t lower_bound(const TrafficSnapshot &s, std::int64_t remaining_ticks) {
    if (remaining_ticks <= 0) {
        return 0;
    }
    std::int64_t bound = 0;
    for (const auto &q : s.queues) {
        for (std::size_t i = 0; i < q.size(); ++i) {
            bound += q[i].priority * std::min<std::int64_t>(static_cast<std::int64_t>(i),
                                                            remaining_ticks);
        }
    }
    return bound;
}

} // namespace isched
