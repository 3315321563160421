#ifndef ISCHED_CLI_SWEEP_HPP
#define ISCHED_CLI_SWEEP_HPP

#include "isched/policies.hpp"
#include "isched/simulator.hpp"
#include "isched/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace isched::cli {

struct SweepSpec {
    std::vector<double> intensities = default_intensities();
    int runs = 20;
    std::vector<PolicyKind> policies{PolicyKind::HorizonOpt, PolicyKind::F1, PolicyKind::F2};
    std::uint64_t base_seed = 0;

    static std::vector<double> default_intensities();
    void validate() const;
};

struct SweepRow {
    double intensity = 0.0;
    PolicyKind policy = PolicyKind::HorizonOpt;
    std::uint64_t seed = 0;
    EpisodeStats stats;
};

/// Runs every (intensity, policy, run) episode with seed = base_seed + run.
/// Rows come back in (intensity, policy, run) order whatever the worker
/// count.
std::vector<SweepRow> run_sweep(const SimConfig &base, const SolverConfig &solver,
                                const SweepSpec &sweep, unsigned workers = 0);

std::string sweep_csv(const std::vector<SweepRow> &rows);

struct SweepAggregate {
    double intensity = 0.0;
    PolicyKind policy = PolicyKind::HorizonOpt;
    double mean_wait = 0.0;
    double mean_wait_seconds = 0.0;
    double std_wait = 0.0;
    int episodes = 0;
    int unterminated = 0;
};

/// Per-(intensity, policy) means over runs, in row order.
std::vector<SweepAggregate> aggregate(const std::vector<SweepRow> &rows);

std::string summary_table(const std::vector<SweepAggregate> &agg);

std::string wait_log_csv(const std::vector<WaitLogEntry> &log);

} // namespace isched::cli

#endif // ISCHED_CLI_SWEEP_HPP
