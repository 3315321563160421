// Acceptance checks. Prints one PASS/FAIL line per criterion; the exit code
// is nonzero when any selected criterion fails.
//
//   isched_acceptance               run all criteria
//   isched_acceptance --criterion N run criterion N only

#include "isched/cli/sweep.hpp"
#include "isched/dynamics.hpp"
#include "isched/io.hpp"
#include "isched/model.hpp"
#include "isched/simulator.hpp"
#include "isched/solver.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace isched;
using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::vector<double> kIntensities{0.25, 0.5, 0.75, 1.0};
constexpr int kRuns = 20;

// The drain sweep shared by criteria 3 to 6, computed once.
const std::vector<cli::SweepRow> &drain_sweep() {
    static const std::vector<cli::SweepRow> rows = [] {
        cli::SweepSpec sweep;
        sweep.intensities = kIntensities;
        sweep.runs = kRuns;
        return cli::run_sweep(SimConfig{}, SolverConfig{}, sweep);
    }();
    return rows;
}

// aggregate mean_wait / std_wait keyed by (intensity index, policy)
struct Table {
    std::map<std::pair<std::size_t, PolicyKind>, cli::SweepAggregate> cell;
};

Table drain_table() {
    Table t;
    for (const auto &a : cli::aggregate(drain_sweep())) {
        const auto it = std::find(kIntensities.begin(), kIntensities.end(), a.intensity);
        t.cell[{static_cast<std::size_t>(it - kIntensities.begin()), a.policy}] = a;
    }
    return t;
}

// ---------------------------------------------------------------------------

Verdict oracle_equivalence() {
    std::mt19937_64 rng(20240601);
    // S < D is required, which leaves these (D, S) pairs.
    static const std::pair<int, int> ds[] = {{1, 0}, {2, 0}, {2, 1}};
    const auto t0 = Clock::now();
    int cases = 0;
    int mismatches = 0;
    for (; cases < 240; ++cases) {
        const std::size_t n = 2 + rng() % 5;
        const int L = 1 + static_cast<int>(rng() % 4);
        SolverConfig cfg;
        cfg.horizon = 1 + static_cast<int>(rng() % 3);
        std::tie(cfg.dynamics.phase_ticks, cfg.dynamics.slow_start) = ds[rng() % 3];
        cfg.maximal_only = rng() % 4 != 0;
        cfg.wmax.reset();
        const auto conflicts = testing::random_matrix(n, 0.45, rng);
        const auto snap = testing::random_snapshot(n, L, 8, rng);
        const auto phases = enumerate_feasible_phases(conflicts, true);
        const auto prev = rng() % 2 ? phases[rng() % phases.size()] : Phase::closed(n);
        const Scheduler sched(conflicts);
        const auto fast = sched.optimize_schedule(snap, prev, cfg);
        const auto slow = sched.exhaustive_oracle(snap, prev, cfg);
        if (fast.cost != slow.cost || fast.schedule != slow.schedule) {
            ++mismatches;
        }
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 60.0,
            std::to_string(cases) + " instances, " + std::to_string(mismatches) + " mismatches, " +
                fmt("%.2f s", secs)};
}

Verdict subset_count() {
    const auto n = enumerate_feasible_phases(ConflictMatrix(12), false).size();
    return {n == 4095, std::to_string(n) + " phases (expected 4095)"};
}

Verdict dominance() {
    auto t = drain_table();
    bool ok = true;
    std::ostringstream d;
    for (std::size_t i = 0; i < kIntensities.size(); ++i) {
        const double h = t.cell[{i, PolicyKind::HorizonOpt}].mean_wait;
        const double f1 = t.cell[{i, PolicyKind::F1}].mean_wait;
        const double f2 = t.cell[{i, PolicyKind::F2}].mean_wait;
        const double best = std::min(f1, f2);
        const double margin = best > 0 ? 1.0 - h / best : 0.0;
        bool here = h <= f1 && h <= f2;
        if (kIntensities[i] >= 0.5) {
            here = here && margin >= 0.10;
        }
        ok = ok && here;
        d << fmt("[%.2f ", kIntensities[i]) << fmt("H=%.3f ", h) << fmt("F1=%.3f ", f1)
          << fmt("F2=%.3f ", f2) << fmt("margin=%.1f%%", 100 * margin) << (here ? "" : " X") << "] ";
    }
    return {ok, d.str()};
}

Verdict growing_gap() {
    auto t = drain_table();
    std::vector<double> gap;
    for (std::size_t i = 0; i < kIntensities.size(); ++i) {
        gap.push_back(t.cell[{i, PolicyKind::F2}].mean_wait - t.cell[{i, PolicyKind::HorizonOpt}].mean_wait);
    }
    int inversions = 0;
    bool ok = true;
    for (std::size_t i = 1; i < gap.size(); ++i) {
        if (gap[i] < gap[i - 1]) {
            ++inversions;
            const double larger = std::max(std::abs(gap[i]), std::abs(gap[i - 1]));
            if (gap[i - 1] - gap[i] > 0.02 * larger) {
                ok = false;
            }
        }
    }
    ok = ok && inversions <= 1;
    std::ostringstream d;
    d << "gaps";
    for (double g : gap) {
        d << fmt(" %.4f", g);
    }
    d << ", inversions " << inversions;
    return {ok, d.str()};
}

Verdict std_claim() {
    auto t = drain_table();
    const std::size_t last = kIntensities.size() - 1;
    const double h = t.cell[{last, PolicyKind::HorizonOpt}].std_wait;
    const double f2 = t.cell[{last, PolicyKind::F2}].std_wait;
    return {h <= f2, fmt("std at 1.0: HorizonOpt %.3f", h) + fmt(" vs F2 %.3f", f2)};
}

Verdict deadlock_freedom() {
    const SolverConfig solver;
    const SimConfig sim;
    const auto bound = *solver.wmax + static_cast<std::int64_t>(sim.dynamics.phase_ticks) *
                                          static_cast<std::int64_t>(sim.spec.path_count());
    int unterminated = 0;
    std::int64_t worst = 0;
    for (const auto &r : drain_sweep()) {
        unterminated += r.stats.terminated ? 0 : 1;
        if (r.policy == PolicyKind::HorizonOpt) {
            worst = std::max(worst, r.stats.max_wait);
        }
    }
    return {unterminated == 0 && worst <= bound,
            std::to_string(drain_sweep().size()) + " episodes, " + std::to_string(unterminated) +
                " unterminated, HorizonOpt max wait " + std::to_string(worst) + " <= " +
                std::to_string(bound)};
}

Verdict horizon_benefit() {
    cli::SweepSpec sweep;
    sweep.intensities = kIntensities;
    sweep.runs = 50;
    sweep.policies = {PolicyKind::HorizonOpt};
    sweep.base_seed = 1000;
    auto mean_of = [&](int k) {
        SolverConfig solver;
        solver.horizon = k;
        const auto rows = cli::run_sweep(SimConfig{}, solver, sweep);
        double sum = 0;
        for (const auto &r : rows) {
            sum += r.stats.mean_wait;
        }
        return sum / static_cast<double>(rows.size());
    };
    const double k3 = mean_of(3);
    const double k1 = mean_of(1);
    return {k3 <= k1 * 1.05, "200 episodes, " + fmt("k=3 %.4f", k3) + fmt(" vs k=1 %.4f", k1)};
}

Verdict runtime_envelope() {
    const auto spec = default_intersection(10);
    const Scheduler sched(spec.conflicts);
    SolverConfig cfg;
    cfg.horizon = 3;
    cfg.maximal_only = true;
    std::mt19937_64 rng(8);
    std::vector<double> ms;
    for (int i = 0; i < 50; ++i) {
        const auto snap = testing::random_snapshot(spec.path_count(), spec.max_queue_len, 50, rng);
        const auto t0 = Clock::now();
        const auto sol = sched.optimize_schedule(snap, Phase::closed(spec.path_count()), cfg);
        ms.push_back(1000.0 * seconds_since(t0));
        (void)sol;
    }
    std::sort(ms.begin(), ms.end());
    const double median = (ms[24] + ms[25]) / 2;
    return {median < 1000.0, fmt("median %.3f ms", median) + fmt(", max %.3f ms", ms.back())};
}

// ---------------------------------------------------------------------------

Verdict invariants() {
    std::mt19937_64 rng(99);
    std::vector<std::string> failed;
    auto check = [&](const std::string &name, const std::function<bool()> &body) {
        if (!body()) {
            failed.push_back(name);
        }
    };

    check("conflict matrix symmetric with empty diagonal", [&] {
        for (int trial = 0; trial < 200; ++trial) {
            IntersectionSpec spec;
            spec.arms = 3 + static_cast<int>(rng() % 4);
            spec.driving_side = rng() % 2 ? DrivingSide::Left : DrivingSide::Right;
            spec.merge_conflicts = rng() % 2 == 0;
            for (const auto &m : all_movements(spec.arms)) {
                if (rng() % 3 != 0) {
                    spec.paths.push_back(m);
                }
            }
            if (spec.paths.empty()) {
                continue;
            }
            const auto c = build_conflict_matrix(spec);
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (c.conflicts(i, i)) {
                    return false;
                }
                for (std::size_t j = 0; j < c.size(); ++j) {
                    if (c.conflicts(i, j) != c.conflicts(j, i)) {
                        return false;
                    }
                    if (i != j && c.conflicts(i, j) != testing::geometric_conflict(spec, i, j)) {
                        return false;
                    }
                }
            }
        }
        return true;
    });

    check("feasible phase iff independent set", [&] {
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 1 + rng() % 10;
            const auto c = testing::random_matrix(n, 0.35, rng);
            for (bool maximal : {false, true}) {
                std::vector<std::uint64_t> got;
                for (const auto &p : enumerate_feasible_phases(c, maximal)) {
                    got.push_back(p.bits());
                }
                if (got != testing::brute_phases(c, maximal)) {
                    return false;
                }
            }
            for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
                if (is_feasible_phase(Phase(n, bits), c) != testing::brute_feasible(bits, c)) {
                    return false;
                }
            }
        }
        return true;
    });

    check("vehicle conservation", [&] {
        const auto spec = default_intersection();
        const auto phases = enumerate_feasible_phases(spec.conflicts, false);
        DynamicsConfig dyn;
        for (int trial = 0; trial < 300; ++trial) {
            const auto s = testing::random_snapshot(spec.path_count(), 10, 30, rng);
            const auto &phase = phases[rng() % phases.size()];
            GreenAge age(spec.path_count());
            for (auto &a : age) {
                a = static_cast<int>(rng() % 3);
            }
            const auto out = step(s, phase, age, dyn, spec.conflicts);
            if (out.next.vehicle_count() + out.departed.size() != s.vehicle_count()) {
                return false;
            }
        }
        for (std::uint64_t seed = 0; seed < 12; ++seed) {
            SimConfig cfg;
            cfg.mode = seed % 2 ? SimMode::Steady : SimMode::Drain;
            cfg.intensity = 0.2 + 0.07 * static_cast<double>(seed);
            cfg.seed = seed;
            const auto r = run_episode(cfg, static_cast<PolicyKind>(seed % 3), SolverConfig{});
            if (r.initial_vehicles + r.accepted_arrivals !=
                static_cast<std::uint64_t>(r.stats.throughput) + r.remaining_vehicles) {
                return false;
            }
        }
        return true;
    });

    check("lower bound admissible", [&] {
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t n = 2 + rng() % 6;
            const auto c = testing::random_matrix(n, 0.4, rng);
            const auto pool = enumerate_feasible_phases(c, false);
            const auto s = testing::random_snapshot(n, 5, 10, rng);
            DynamicsConfig dyn;
            dyn.phase_ticks = 1 + static_cast<int>(rng() % 3);
            dyn.slow_start = static_cast<int>(rng() % static_cast<unsigned>(dyn.phase_ticks));
            std::vector<Phase> schedule;
            const int len = 1 + static_cast<int>(rng() % 4);
            for (int i = 0; i < len; ++i) {
                schedule.push_back(pool[rng() % pool.size()]);
            }
            const auto prev = rng() % 2 ? pool[rng() % pool.size()] : Phase::closed(n);
            const auto cost = rollout_cost(s, schedule, prev, dyn, c).total_cost;
            if (cost < lower_bound(s, static_cast<std::int64_t>(len) * dyn.phase_ticks)) {
                return false;
            }
        }
        return true;
    });

    check("encode/decode roundtrip", [&] {
        for (int trial = 0; trial < 200; ++trial) {
            const int L = 1 + static_cast<int>(rng() % 10);
            const auto spec = default_intersection(L);
            auto s = testing::random_snapshot(spec.path_count(), L, 40, rng);
            s.tick = static_cast<std::int64_t>(rng() % 1000);
            if (decode_snapshot(encode_snapshot(s, spec), spec, s.tick) != s) {
                return false;
            }
            for (auto form : {SnapshotForm::Queues, SnapshotForm::Array}) {
                if (parse_snapshot(snapshot_to_json(s, spec, form), spec) != s) {
                    return false;
                }
            }
        }
        return true;
    });

    check("sweep CSV byte-deterministic", [&] {
        cli::SweepSpec sweep;
        sweep.intensities = {0.3, 0.9};
        sweep.runs = 4;
        sweep.base_seed = 5;
        SimConfig base;
        base.mode = SimMode::Steady;
        base.episode_ticks = 200;
        const auto one = cli::sweep_csv(cli::run_sweep(base, SolverConfig{}, sweep, 1));
        const auto many = cli::sweep_csv(cli::run_sweep(base, SolverConfig{}, sweep, 4));
        const auto again = cli::sweep_csv(cli::run_sweep(base, SolverConfig{}, sweep, 3));
        return one == many && many == again;
    });

    std::string detail = failed.empty() ? "6 property suites hold" : "failed:";
    for (const auto &f : failed) {
        detail += " [" + f + "]";
    }
    return {failed.empty(), detail};
}

struct Criterion {
    const char *title;
    Verdict (*run)();
};

const Criterion kCriteria[] = {
    {"optimizer matches exhaustive oracle", oracle_equivalence},
    {"zero-conflict 12-path instance has 4095 phases", subset_count},
    {"HorizonOpt beats F1 and F2 by >= 10% from intensity 0.5", dominance},
    {"gap to F2 grows with intensity", growing_gap},
    {"HorizonOpt std <= F2 std at full load", std_claim},
    {"every episode drains, guarded waits bounded", deadlock_freedom},
    {"k=3 no worse than k=1 (5% slack)", horizon_benefit},
    {"optimize median under 1 s", runtime_envelope},
    {"invariant property suites", invariants},
};

} // namespace

int main(int argc, char **argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    constexpr int count = static_cast<int>(std::size(kCriteria));
    if (only < 0 || only > count) {
        std::fprintf(stderr, "criterion must be 1..%d\n", count);
        return 2;
    }
    int failures = 0;
    for (int n = 1; n <= count; ++n) {
        if (only != 0 && n != only) {
            continue;
        }
        const auto &c = kCriteria[n - 1];
        const auto t0 = Clock::now();
        const auto v = c.run();
        std::printf("AC%d %s: %s (%s) [%.1f s]\n", n, v.pass ? "PASS" : "FAIL", c.title, v.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
