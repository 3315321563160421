#include "isched/cli/app.hpp"

#include "isched/cli/sweep.hpp"
#include "isched/dynamics.hpp"
#include "isched/error.hpp"
#include "isched/io.hpp"
#include "isched/model.hpp"
#include "isched/policies.hpp"
#include "isched/simulator.hpp"
#include "isched/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace isched::cli {

namespace {

struct Options {
    std::string instance;
    std::string snapshot;
    std::string out;
    int horizon = 3;
    int phase_ticks = 4;
    int slow_start = 1;
    std::int64_t wmax = 60; // 0 disables the guard
    double tick_seconds = 5.0;
    std::vector<std::string> policies;
    std::vector<double> intensities;
    int runs = 20;
    std::uint64_t seed = 0;
    std::string mode = "drain";
    std::int64_t ticks = 720;
    bool maximal = false;
};

IntersectionSpec instance_of(const Options &o) {
    return o.instance.empty() ? default_intersection() : load_instance(o.instance);
}

DynamicsConfig dynamics_of(const Options &o) {
    DynamicsConfig d;
    d.phase_ticks = o.phase_ticks;
    d.slow_start = o.slow_start;
    d.tick_seconds = o.tick_seconds;
    d.validate();
    return d;
}

SolverConfig solver_of(const Options &o) {
    SolverConfig s;
    s.horizon = o.horizon;
    s.dynamics = dynamics_of(o);
    s.wmax = o.wmax > 0 ? std::optional<std::int64_t>(o.wmax) : std::nullopt;
    s.validate();
    return s;
}

SimMode mode_of(const std::string &m) {
    if (m == "drain") {
        return SimMode::Drain;
    }
    if (m == "steady") {
        return SimMode::Steady;
    }
    throw InvalidSpec("--mode must be drain or steady");
}

SimConfig sim_of(const Options &o) {
    SimConfig cfg;
    cfg.spec = instance_of(o);
    cfg.dynamics = dynamics_of(o);
    cfg.mode = mode_of(o.mode);
    cfg.seed = o.seed;
    cfg.episode_ticks = o.ticks;
    return cfg;
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + path);
    }
    f << text;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

int cmd_optimize(const Options &o, std::ostream &out) {
    const auto spec = instance_of(o);
    const auto snap = load_snapshot(o.snapshot, spec);
    const auto cfg = solver_of(o);
    const Scheduler scheduler(spec.conflicts);
    const auto sol = scheduler.optimize_schedule(snap, Phase::closed(spec.path_count()), cfg);
    const double ms = std::chrono::duration<double, std::milli>(sol.elapsed).count();

    out << "schedule (k=" << cfg.horizon << ", D=" << cfg.dynamics.phase_ticks << "):\n";
    nlohmann::json phases = nlohmann::json::array();
    for (std::size_t i = 0; i < sol.schedule.size(); ++i) {
        out << "  " << i + 1 << ": " << to_string(sol.schedule[i]) << '\n';
        phases.push_back(sol.schedule[i].open_paths());
    }
    out << "cost: " << sol.cost << '\n';
    out << "nodes_explored: " << sol.nodes_explored << '\n';
    out << "elapsed_ms: " << fixed6(ms) << '\n';

    if (!o.out.empty()) {
        nlohmann::json report{{"horizon", cfg.horizon},
                              {"phase_ticks", cfg.dynamics.phase_ticks},
                              {"slow_start", cfg.dynamics.slow_start},
                              {"schedule", phases},
                              {"cost", sol.cost},
                              {"nodes_explored", sol.nodes_explored},
                              {"elapsed_ms", ms}};
        write_file(o.out, report.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_simulate(const Options &o, std::ostream &out) {
    auto cfg = sim_of(o);
    cfg.intensity = o.intensities.empty() ? 1.0 : o.intensities.front();
    const auto policy = parse_policy(o.policies.empty() ? "horizon" : o.policies.front());
    const auto result = run_episode(cfg, policy, solver_of(o));
    const auto &st = result.stats;

    out << "policy: " << policy_name(policy) << '\n'
        << "intensity: " << fixed6(cfg.intensity) << '\n'
        << "seed: " << cfg.seed << '\n'
        << "ticks: " << result.final_tick << '\n'
        << "mean_wait_ticks: " << fixed6(st.mean_wait) << '\n'
        << "mean_wait_seconds: " << fixed6(st.mean_wait_seconds) << '\n'
        << "std_wait_ticks: " << fixed6(st.std_wait) << '\n'
        << "max_wait_ticks: " << st.max_wait << '\n'
        << "throughput: " << st.throughput << '\n'
        << "rejected_arrivals: " << st.rejected_arrivals << '\n'
        << "starvation_events: " << st.starvation_events << '\n'
        << "terminated: " << (st.terminated ? "true" : "false") << '\n';
    if (!o.out.empty()) {
        write_file(o.out, wait_log_csv(result.wait_log));
    }
    return kExitOk;
}

int cmd_sweep(const Options &o, std::ostream &out) {
    const auto base = sim_of(o);
    SweepSpec sweep;
    if (!o.intensities.empty()) {
        sweep.intensities = o.intensities;
    }
    if (!o.policies.empty()) {
        sweep.policies.clear();
        for (const auto &p : o.policies) {
            sweep.policies.push_back(parse_policy(p));
        }
    }
    sweep.runs = o.runs;
    sweep.base_seed = o.seed;

    const auto rows = run_sweep(base, solver_of(o), sweep);
    const auto csv = sweep_csv(rows);
    if (o.out.empty()) {
        out << csv << '\n';
    } else {
        write_file(o.out, csv);
    }
    const auto agg = aggregate(rows);
    out << summary_table(agg);
    int unterminated = 0;
    for (const auto &a : agg) {
        unterminated += a.unterminated;
    }
    if (unterminated > 0) {
        out << "WARNING: " << unterminated << " episode(s) hit the safety cap\n";
    }
    return kExitOk;
}

int cmd_phases(const Options &o, std::ostream &out) {
    const auto spec = instance_of(o);
    const auto phases = enumerate_feasible_phases(spec.conflicts, o.maximal);
    out << (o.maximal ? "maximal" : "feasible") << " phases: " << phases.size() << '\n';
    for (const auto &p : phases) {
        out << to_string(p) << '\n';
    }
    return kExitOk;
}

int cmd_validate(const Options &o, std::ostream &out, std::ostream &err) {
    std::string text;
    if (o.instance.empty()) {
        text = instance_to_json(default_intersection());
    } else {
        text = read_text_file(o.instance);
    }
    const auto diag = instance_diagnostics(text);
    if (!diag.empty()) {
        for (const auto &d : diag) {
            err << d << '\n';
        }
        return kExitInvalid;
    }
    const auto spec = parse_instance(text);
    out << "ok: " << spec.path_count() << " paths, " << spec.arms << " arms, max_queue_len "
        << spec.max_queue_len << '\n';
    const auto pairs = spec.conflicts.pairs();
    out << "conflict pairs: " << pairs.size() << '\n';
    for (const auto &[i, j] : pairs) {
        out << i << ' ' << j << "  (" << describe(spec.paths[i]) << " x "
            << describe(spec.paths[j]) << ")\n";
    }
    return kExitOk;
}

void add_dynamics_flags(CLI::App *cmd, Options &o) {
    cmd->add_option("--phase-ticks", o.phase_ticks, "Ticks each decision is held (D)");
    cmd->add_option("--slow-start", o.slow_start, "Departure-free ticks after red to green (S)");
    cmd->add_option("--tick-seconds", o.tick_seconds, "Seconds per tick for reporting");
}

void add_solver_flags(CLI::App *cmd, Options &o) {
    cmd->add_option("--horizon", o.horizon, "Signal decisions planned jointly (k)");
    cmd->add_option("--wmax", o.wmax, "Starvation threshold in ticks, 0 disables");
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Options o;
    CLI::App app{"Exact signal scheduling for a signalised intersection", "isched"};
    app.require_subcommand(1);

    auto *optimize = app.add_subcommand("optimize", "Plan the next k phases for a snapshot");
    optimize->add_option("--instance", o.instance, "Instance JSON (default: 12-path junction)");
    optimize->add_option("--snapshot", o.snapshot, "Snapshot JSON")->required();
    optimize->add_option("--out", o.out, "Write a JSON report");
    add_dynamics_flags(optimize, o);
    add_solver_flags(optimize, o);

    auto *simulate = app.add_subcommand("simulate", "Run one episode");
    simulate->add_option("--instance", o.instance, "Instance JSON");
    simulate->add_option("--policy", o.policies, "horizon, f1 or f2")->expected(1);
    simulate->add_option("--intensity", o.intensities, "Load in [0, 1]")->expected(1);
    simulate->add_option("--seed", o.seed, "Random seed");
    simulate->add_option("--mode", o.mode, "drain or steady");
    simulate->add_option("--ticks", o.ticks, "Steady-mode episode length");
    simulate->add_option("--out", o.out, "Write the per-vehicle wait log CSV");
    add_dynamics_flags(simulate, o);
    add_solver_flags(simulate, o);

    auto *sweep = app.add_subcommand("sweep", "Compare policies across intensities");
    sweep->add_option("--instance", o.instance, "Instance JSON");
    sweep->add_option("--policy", o.policies, "Comma-separated policies")->delimiter(',');
    sweep->add_option("--intensity", o.intensities, "Comma-separated intensities")
        ->delimiter(',');
    sweep->add_option("--runs", o.runs, "Episodes per (intensity, policy)");
    sweep->add_option("--seed", o.seed, "Base seed; run r uses seed + r");
    sweep->add_option("--mode", o.mode, "drain or steady");
    sweep->add_option("--ticks", o.ticks, "Steady-mode episode length");
    sweep->add_option("--out", o.out, "Write the results CSV here instead of stdout");
    add_dynamics_flags(sweep, o);
    add_solver_flags(sweep, o);

    auto *phases = app.add_subcommand("phases", "List feasible phases");
    phases->add_option("--instance", o.instance, "Instance JSON");
    phases->add_flag("--maximal", o.maximal, "Only maximal phases");

    auto *validate = app.add_subcommand("validate", "Check an instance file");
    validate->add_option("--instance", o.instance, "Instance JSON");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    try {
        if (optimize->parsed()) {
            return cmd_optimize(o, out);
        }
        if (simulate->parsed()) {
            return cmd_simulate(o, out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(o, out);
        }
        if (phases->parsed()) {
            return cmd_phases(o, out);
        }
        return cmd_validate(o, out, err);
    } catch (const ParseError &e) {
        err << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.what()
            << '\n';
        return kExitInvalid;
    } catch (const NoFeasibleSchedule &e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const ConstraintViolation &e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace isched::cli
