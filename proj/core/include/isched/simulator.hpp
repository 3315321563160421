#ifndef ISCHED_SIMULATOR_HPP
#define ISCHED_SIMULATOR_HPP

#include "isched/dynamics.hpp"
#include "isched/model.hpp"
#include "isched/policies.hpp"
#include "isched/solver.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace isched {

enum class SimMode { Drain, Steady };

struct PriorityClass {
    int weight = 1;
    double probability = 1.0;
};

std::vector<PriorityClass> default_priority_classes();

struct SimConfig {
    IntersectionSpec spec = default_intersection();
    DynamicsConfig dynamics;
    SimMode mode = SimMode::Drain;
    double intensity = 0.0;
    double arrival_rate_scale = 0.3;
    std::int64_t episode_ticks = 720; // Steady mode length
    std::uint64_t seed = 0;
    std::vector<PriorityClass> priority_classes = default_priority_classes();
    std::int64_t safety_cap = 100'000;

    void validate() const;
    [[nodiscard]] double arrival_probability() const { return intensity * arrival_rate_scale; }
};

/// Seeded source of every random draw in an episode. Uses mt19937_64, whose
/// output sequence is fixed by the C++ standard, and converts to doubles by
/// hand (top 53 bits) so results do not depend on the library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform();
    bool bernoulli(double p) { return uniform() < p; }
    int priority(const std::vector<PriorityClass> &classes);

private:
    std::mt19937_64 engine_;
};

/// Fills every path with ceil(intensity * L) zero-wait vehicles.
TrafficSnapshot seed_initial_queues(const SimConfig &cfg, Rng &rng);
TrafficSnapshot seed_initial_queues(const SimConfig &cfg);

/// One Bernoulli draw per path, in path order; a hit draws a priority.
std::vector<std::optional<VehicleRecord>> generate_arrivals(std::int64_t tick,
                                                            const SimConfig &cfg, Rng &rng);

/// Appends arrivals to their queues, rejecting those that find the queue
/// full. Returns the number rejected.
std::size_t admit_arrivals(TrafficSnapshot &s, const std::vector<std::optional<VehicleRecord>> &arrivals,
                           int max_queue_len);

struct WaitLogEntry {
    std::uint64_t seed = 0;
    PolicyKind policy = PolicyKind::HorizonOpt;
    std::size_t path = 0;
    int priority = 1;
    std::int64_t enter_tick = 0;
    std::int64_t exit_tick = 0;
    std::int64_t wait_ticks = 0;
};

struct EpisodeStats {
    double mean_wait = 0.0; // ticks
    double mean_wait_seconds = 0.0;
    double std_wait = 0.0; // population std, ticks
    std::int64_t max_wait = 0;
    std::uint64_t throughput = 0;
    std::uint64_t rejected_arrivals = 0;
    std::uint64_t starvation_events = 0;
    bool terminated = false;
};

struct EpisodeResult {
    EpisodeStats stats;
    std::vector<WaitLogEntry> wait_log;
    std::uint64_t initial_vehicles = 0;
    std::uint64_t accepted_arrivals = 0;
    std::uint64_t remaining_vehicles = 0;
    std::int64_t final_tick = 0;
    std::vector<Decision> decisions;
};

/// Mean, population std and max over departed waits, computed from exact
/// integer sums.
EpisodeStats summarize_waits(const std::vector<WaitLogEntry> &log, double tick_seconds);

/// Runs one episode. The controller re-decides every D ticks from the live
/// snapshot. Drain stops when the junction empties or the safety cap
/// expires (terminated = false). Solver dynamics are taken from `cfg`.
EpisodeResult run_episode(const SimConfig &cfg, PolicyKind policy, SolverConfig solver);

} // namespace isched

#endif // ISCHED_SIMULATOR_HPP
