#include "isched/simulator.hpp"

#include "isched/error.hpp"

#include <algorithm>
#include <cmath>

namespace isched {

std::vector<PriorityClass> default_priority_classes() {
    return {{10, 0.02}, {3, 0.08}, {1, 0.90}};
}

void SimConfig::validate() const {
    validate_spec(spec);
    dynamics.validate();
    if (!(intensity >= 0.0 && intensity <= 1.0)) {
        throw InvalidSpec("intensity must lie in [0, 1]");
    }
    if (!(arrival_rate_scale >= 0.0)) {
        throw InvalidSpec("arrival_rate_scale must be nonnegative");
    }
    if (arrival_probability() > 1.0) {
        throw InvalidSpec("intensity * arrival_rate_scale exceeds 1");
    }
    if (priority_classes.empty()) {
        throw InvalidSpec("at least one priority class is required");
    }
    double total = 0.0;
    for (const auto &c : priority_classes) {
        if (c.weight < 1 || c.probability < 0.0) {
            throw InvalidSpec("priority class weights must be >= 1 and probabilities >= 0");
        }
        total += c.probability;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidSpec("priority class probabilities must sum to 1");
    }
    if (episode_ticks < 0 || safety_cap < 1) {
        throw InvalidSpec("episode_ticks must be >= 0 and safety_cap >= 1");
    }
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int Rng::priority(const std::vector<PriorityClass> &classes) {
    const double u = uniform();
    double acc = 0.0;
    for (const auto &c : classes) {
        acc += c.probability;
        if (u < acc) {
            return c.weight;
        }
    }
    return classes.back().weight;
}

TrafficSnapshot seed_initial_queues(const SimConfig &cfg, Rng &rng) {
    cfg.validate();
    // The epsilon keeps products like 0.3 * 10 from rounding up a slot.
    const auto fill = static_cast<std::size_t>(
        std::ceil(cfg.intensity * cfg.spec.max_queue_len - 1e-9));
    TrafficSnapshot s = empty_snapshot(cfg.spec);
    for (auto &q : s.queues) {
        q.reserve(fill);
        for (std::size_t i = 0; i < fill; ++i) {
            q.push_back({rng.priority(cfg.priority_classes), 0});
        }
    }
    return s;
}

TrafficSnapshot seed_initial_queues(const SimConfig &cfg) {
    Rng rng(cfg.seed);
    return seed_initial_queues(cfg, rng);
}

std::vector<std::optional<VehicleRecord>> generate_arrivals(std::int64_t /*tick*/,
                                                            const SimConfig &cfg, Rng &rng) {
    const double p = cfg.arrival_probability();
    std::vector<std::optional<VehicleRecord>> out(cfg.spec.path_count());
    if (p <= 0.0) {
        return out;
    }
    for (auto &slot : out) {
        if (rng.bernoulli(p)) {
            slot = VehicleRecord{rng.priority(cfg.priority_classes), 0};
        }
    }
    return out;
}

std::size_t admit_arrivals(TrafficSnapshot &s,
                           const std::vector<std::optional<VehicleRecord>> &arrivals,
                           int max_queue_len) {
    if (arrivals.size() != s.queues.size()) {
        throw DimensionError("arrival vector does not match path count");
    }
    std::size_t rejected = 0;
    for (std::size_t p = 0; p < arrivals.size(); ++p) {
        if (!arrivals[p]) {
            continue;
        }
        if (s.queues[p].size() >= static_cast<std::size_t>(max_queue_len)) {
            ++rejected;
        } else {
            s.queues[p].push_back(*arrivals[p]);
        }
    }
    return rejected;
}

EpisodeStats summarize_waits(const std::vector<WaitLogEntry> &log, double tick_seconds) {
    EpisodeStats st;
    st.throughput = log.size();
    if (log.empty()) {
        return st;
    }
    std::int64_t sum = 0;
    std::int64_t sum_sq = 0;
    for (const auto &e : log) {
        sum += e.wait_ticks;
        sum_sq += e.wait_ticks * e.wait_ticks;
        st.max_wait = std::max(st.max_wait, e.wait_ticks);
    }
    const auto n = static_cast<std::int64_t>(log.size());
    st.mean_wait = static_cast<double>(sum) / static_cast<double>(n);
    st.mean_wait_seconds = st.mean_wait * tick_seconds;
    // n^2 * variance, exact in integers.
    const std::int64_t scaled_var = n * sum_sq - sum * sum;
    st.std_wait = std::sqrt(static_cast<double>(scaled_var) / static_cast<double>(n * n));
    return st;
}

EpisodeResult run_episode(const SimConfig &cfg, PolicyKind policy, SolverConfig solver) {
    cfg.validate();
    solver.dynamics = cfg.dynamics;
    const Scheduler scheduler(cfg.spec.conflicts);
    Controller controller(policy, scheduler, solver);

    Rng rng(cfg.seed);
    TrafficSnapshot s = seed_initial_queues(cfg, rng);

    EpisodeResult result;
    result.initial_vehicles = s.vehicle_count();
    std::uint64_t rejected = 0;

    const auto D = cfg.dynamics.phase_ticks;
    const auto done = [&] {
        if (cfg.mode == SimMode::Drain) {
            return s.empty() || s.tick >= cfg.safety_cap;
        }
        return s.tick >= cfg.episode_ticks;
    };

    while (!done()) {
        if (s.tick % D == 0) {
            controller.decide(s);
        }
        const auto &phase = controller.state().prev_phase;
        auto outcome = step(s, phase, controller.state().green_age, cfg.dynamics,
                            scheduler.conflicts());
        for (const auto &d : outcome.departed) {
            result.wait_log.push_back({cfg.seed, policy, d.path, d.vehicle.priority,
                                       s.tick - d.vehicle.wait, s.tick, d.vehicle.wait});
        }
        s = std::move(outcome.next);
        controller.tick();
        if (cfg.mode == SimMode::Steady) {
            const auto arrivals = generate_arrivals(s.tick, cfg, rng);
            const auto before = s.vehicle_count();
            rejected += admit_arrivals(s, arrivals, cfg.spec.max_queue_len);
            result.accepted_arrivals += s.vehicle_count() - before;
        }
    }

    result.stats = summarize_waits(result.wait_log, cfg.dynamics.tick_seconds);
    result.stats.rejected_arrivals = rejected;
    result.stats.terminated = cfg.mode == SimMode::Steady || s.empty();
    if (solver.wmax) {
        for (const auto &e : result.wait_log) {
            if (e.wait_ticks > *solver.wmax) {
                ++result.stats.starvation_events;
            }
        }
    }
    result.remaining_vehicles = s.vehicle_count();
    result.final_tick = s.tick;
    result.decisions = controller.state().decision_log;
    return result;
}

} // namespace isched
