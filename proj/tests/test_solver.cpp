#include "isched/error.hpp"
#include "isched/solver.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace isched {
namespace {

SolverConfig config(int k, int D, int S, std::optional<std::int64_t> wmax = std::nullopt,
                    bool maximal = true) {
    SolverConfig cfg;
    cfg.horizon = k;
    cfg.dynamics.phase_ticks = D;
    cfg.dynamics.slow_start = S;
    cfg.wmax = wmax;
    cfg.maximal_only = maximal;
    return cfg;
}

TrafficSnapshot empty_of(std::size_t n) {
    TrafficSnapshot s;
    s.queues.resize(n);
    return s;
}

TEST(CandidatePhases, ZeroConflictsThreePaths) {
    const Scheduler sched{ConflictMatrix(3)};
    const auto c = sched.candidate_phases(empty_of(3), Phase::closed(3), config(1, 4, 1, 60, false));
    EXPECT_EQ(c.size(), 7U);
    EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
}

TEST(CandidatePhases, GuardForcesOverWaitedPath) {
    const auto spec = default_intersection();
    const Scheduler sched(spec.conflicts);
    auto s = empty_of(12);
    s.queues[5] = {{1, 60}};
    s.queues[1] = {{1, 59}};
    for (bool maximal : {true, false}) {
        const auto c = sched.candidate_phases(s, Phase::closed(12), config(1, 4, 1, 60, maximal));
        ASSERT_FALSE(c.empty());
        for (const auto &p : c) {
            EXPECT_TRUE(p.is_open(5));
        }
    }
}

TEST(CandidatePhases, GuardPicksOldestThenLowestPath) {
    // Path 2 and path 9 both over threshold, and they compete.
    ConflictMatrix c(12);
    c.set(2, 9);
    const Scheduler sched(c);
    auto s = empty_of(12);
    s.queues[2] = {{1, 70}};
    s.queues[9] = {{1, 65}};
    for (const auto &p : sched.candidate_phases(s, Phase::closed(12), config(1, 4, 1, 60))) {
        EXPECT_TRUE(p.is_open(2));
        EXPECT_FALSE(p.is_open(9));
    }
    s.queues[9] = {{1, 70}};
    EXPECT_EQ(starving_path(s, 60), std::optional<std::size_t>(2));
    EXPECT_EQ(starving_path(s, 71), std::nullopt);
}

TEST(Optimize, EmptyJunctionReturnsSmallestMaximalSequence) {
    const auto spec = default_intersection();
    const Scheduler sched(spec.conflicts);
    const auto sol = sched.optimize_schedule(empty_of(12), Phase::closed(12), config(3, 4, 1));
    EXPECT_EQ(sol.cost, 0);
    ASSERT_EQ(sol.schedule.size(), 3U);
    for (const auto &p : sol.schedule) {
        EXPECT_EQ(p, sched.maximal_phases().front());
    }
}

TEST(Optimize, WarmSingleVehicleCostsNothing) {
    ConflictMatrix c(2);
    c.set(0, 1);
    const Scheduler sched(c);
    TrafficSnapshot s = empty_of(2);
    s.queues[1] = {{1, 0}};
    const auto sol = sched.optimize_schedule(s, Phase::of(2, {1}), config(1, 2, 1));
    EXPECT_EQ(sol.cost, 0);
    EXPECT_TRUE(sol.schedule[0].is_open(1));
}

TEST(Optimize, CostEqualsRolloutOfSchedule) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = testing::random_matrix(5, 0.4, rng);
        const Scheduler sched(c);
        const auto s = testing::random_snapshot(5, 4, 8, rng);
        const auto cfg = config(3, 2, 1);
        const auto sol = sched.optimize_schedule(s, Phase::closed(5), cfg);
        EXPECT_EQ(sol.cost,
                  rollout_cost(s, sol.schedule, Phase::closed(5), cfg.dynamics, c).total_cost);
    }
}

TEST(Oracle, TwoConflictingPathsDepthTwo) {
    ConflictMatrix c(2);
    c.set(0, 1);
    const Scheduler sched(c);
    const auto sol = sched.exhaustive_oracle(empty_of(2), Phase::closed(2), config(2, 4, 1));
    EXPECT_EQ(sol.schedules_evaluated, 4U);
    EXPECT_EQ(sol.nodes_explored, 2U + 4U);
    EXPECT_EQ(sol.cost, 0);
}

TEST(Oracle, CapExceeded) {
    const Scheduler sched{ConflictMatrix(12)};
    auto cfg = config(2, 4, 1, std::nullopt, false);
    EXPECT_THROW((void)sched.exhaustive_oracle(empty_of(12), Phase::closed(12), cfg),
                 OracleTooLarge);
}

TEST(Optimize, NoCandidatesIsInfeasible) {
    const Scheduler sched{ConflictMatrix(0)};
    EXPECT_THROW((void)sched.optimize_schedule(TrafficSnapshot{}, Phase::closed(0), config(1, 4, 1)),
                 NoFeasibleSchedule);
}

TEST(Optimize, RejectsBadConfig) {
    const Scheduler sched{ConflictMatrix(2)};
    EXPECT_THROW((void)sched.optimize_schedule(empty_of(2), Phase::closed(2), config(0, 4, 1)),
                 InvalidSpec);
    EXPECT_THROW((void)sched.optimize_schedule(empty_of(2), Phase::closed(2), config(1, 4, 1, 4)),
                 InvalidSpec);
}

struct RandomCase {
    ConflictMatrix conflicts;
    TrafficSnapshot snapshot;
    Phase prev;
    SolverConfig cfg;
};

RandomCase random_case(std::mt19937_64 &rng) {
    const std::size_t n = 2 + rng() % 5;
    const int L = 1 + static_cast<int>(rng() % 4);
    const int k = 1 + static_cast<int>(rng() % 3);
    static const std::pair<int, int> ds[] = {{1, 0}, {2, 0}, {2, 1}};
    const auto [D, S] = ds[rng() % 3];
    RandomCase rc;
    rc.conflicts = testing::random_matrix(n, 0.45, rng);
    rc.snapshot = testing::random_snapshot(n, L, 8, rng);
    const auto phases = enumerate_feasible_phases(rc.conflicts, true);
    rc.prev = rng() % 2 ? phases[rng() % phases.size()] : Phase::closed(n);
    std::optional<std::int64_t> wmax;
    if (rng() % 3 == 0) {
        wmax = 3 + static_cast<std::int64_t>(rng() % 5);
    }
    rc.cfg = config(k, D, S, wmax, rng() % 4 != 0);
    return rc;
}

TEST(Optimize, AgreesWithOracleOnRandomInstances) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rc = random_case(rng);
        const Scheduler sched(rc.conflicts);
        const auto fast = sched.optimize_schedule(rc.snapshot, rc.prev, rc.cfg);
        const auto slow = sched.exhaustive_oracle(rc.snapshot, rc.prev, rc.cfg);
        ASSERT_EQ(fast.cost, slow.cost) << "trial " << trial;
        ASSERT_EQ(fast.schedule, slow.schedule) << "trial " << trial;
        EXPECT_LE(fast.nodes_explored, slow.nodes_explored);
    }
}

TEST(Optimize, MaximalRestrictionPreservesOptimum) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 4;
        const auto c = testing::random_matrix(n, 0.4, rng);
        const Scheduler sched(c);
        const auto s = testing::random_snapshot(n, 4, 6, rng);
        const int k = 1 + static_cast<int>(rng() % 2);
        const auto all = sched.optimize_schedule(s, Phase::closed(n), config(k, 2, 1, {}, false));
        const auto max = sched.optimize_schedule(s, Phase::closed(n), config(k, 2, 1, {}, true));
        EXPECT_EQ(all.cost, max.cost);
    }
}

TEST(Optimize, PrefixOfShorterHorizonIsAnIncumbent) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 3 + rng() % 3;
        const auto c = testing::random_matrix(n, 0.4, rng);
        const Scheduler sched(c);
        const auto s = testing::random_snapshot(n, 4, 6, rng);
        const auto shorter = sched.optimize_schedule(s, Phase::closed(n), config(2, 2, 1));
        const auto longer = sched.optimize_schedule(s, Phase::closed(n), config(3, 2, 1));
        for (const auto &ext : sched.maximal_phases()) {
            auto seq = shorter.schedule;
            seq.push_back(ext);
            const auto extended =
                rollout_cost(s, seq, Phase::closed(n), config(3, 2, 1).dynamics, c).total_cost;
            EXPECT_LE(longer.cost, extended);
        }
        EXPECT_GE(longer.cost, shorter.cost);
    }
}

TEST(Optimize, GuardOpensOldestOverWaitedPathFirst) {
    std::mt19937_64 rng(41);
    const auto spec = default_intersection();
    const Scheduler sched(spec.conflicts);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = testing::random_snapshot(12, 10, 80, rng);
        const auto cfg = config(2, 4, 1, 60);
        const auto guard = starving_path(s, 60);
        const auto sol = sched.optimize_schedule(s, Phase::closed(12), cfg);
        if (guard) {
            EXPECT_TRUE(sol.schedule.front().is_open(*guard));
        }
    }
}

} // namespace
} // namespace isched
