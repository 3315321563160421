#include "isched/cli/sweep.hpp"

#include "isched/error.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>

namespace isched::cli {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

std::vector<double> SweepSpec::default_intensities() {
    std::vector<double> out;
    for (int i = 1; i <= 10; ++i) {
        out.push_back(i / 10.0);
    }
    return out;
}

void SweepSpec::validate() const {
    if (runs < 1) {
        throw InvalidSpec("runs must be at least 1");
    }
    if (intensities.empty() || policies.empty()) {
        throw InvalidSpec("sweep needs at least one intensity and one policy");
    }
    for (double x : intensities) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw InvalidSpec("intensity " + fixed6(x) + " outside [0, 1]");
        }
    }
}

std::vector<SweepRow> run_sweep(const SimConfig &base, const SolverConfig &solver,
                                const SweepSpec &sweep, unsigned workers) {
    sweep.validate();
    std::vector<SweepRow> rows;
    for (double x : sweep.intensities) {
        for (auto policy : sweep.policies) {
            for (int r = 0; r < sweep.runs; ++r) {
                rows.push_back({x, policy, sweep.base_seed + static_cast<std::uint64_t>(r), {}});
            }
        }
    }

    if (workers == 0) {
        workers = std::max(1U, std::thread::hardware_concurrency());
    }
    workers = std::min<unsigned>(workers, static_cast<unsigned>(rows.size()));

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(rows.size());
    auto work = [&] {
        for (auto i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1)) {
            try {
                SimConfig cfg = base;
                cfg.intensity = rows[i].intensity;
                cfg.seed = rows[i].seed;
                rows[i].stats = run_episode(cfg, rows[i].policy, solver).stats;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::ostringstream os;
    os << "intensity,policy,seed,mean_wait_ticks,mean_wait_seconds,std_wait_ticks,"
          "max_wait_ticks,throughput,terminated\n";
    for (const auto &r : rows) {
        os << fixed6(r.intensity) << ',' << policy_name(r.policy) << ',' << r.seed << ','
           << fixed6(r.stats.mean_wait) << ',' << fixed6(r.stats.mean_wait_seconds) << ','
           << fixed6(r.stats.std_wait) << ',' << r.stats.max_wait << ',' << r.stats.throughput
           << ',' << (r.stats.terminated ? "true" : "false") << '\n';
    }
    return os.str();
}

std::vector<SweepAggregate> aggregate(const std::vector<SweepRow> &rows) {
    std::vector<SweepAggregate> out;
    for (const auto &r : rows) {
        if (out.empty() || out.back().intensity != r.intensity || out.back().policy != r.policy) {
            out.push_back({r.intensity, r.policy});
        }
        auto &a = out.back();
        a.mean_wait += r.stats.mean_wait;
        a.mean_wait_seconds += r.stats.mean_wait_seconds;
        a.std_wait += r.stats.std_wait;
        ++a.episodes;
        if (!r.stats.terminated) {
            ++a.unterminated;
        }
    }
    for (auto &a : out) {
        a.mean_wait /= a.episodes;
        a.mean_wait_seconds /= a.episodes;
        a.std_wait /= a.episodes;
    }
    return out;
}

std::string summary_table(const std::vector<SweepAggregate> &agg) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %-11s %14s %14s %14s %9s\n", "intensity", "policy",
                  "mean_ticks", "mean_seconds", "std_ticks", "episodes");
    os << line;
    for (const auto &a : agg) {
        std::snprintf(line, sizeof line, "%-10.2f %-11s %14.6f %14.6f %14.6f %9d", a.intensity,
                      std::string(policy_name(a.policy)).c_str(), a.mean_wait,
                      a.mean_wait_seconds, a.std_wait, a.episodes);
        os << line;
        if (a.unterminated > 0) {
            os << "  UNTERMINATED: " << a.unterminated;
        }
        os << '\n';
    }
    return os.str();
}

std::string wait_log_csv(const std::vector<WaitLogEntry> &log) {
    std::ostringstream os;
    os << "seed,policy,path,priority,enter_tick,exit_tick,wait_ticks\n";
    for (const auto &e : log) {
        os << e.seed << ',' << policy_name(e.policy) << ',' << e.path << ',' << e.priority << ','
           << e.enter_tick << ',' << e.exit_tick << ',' << e.wait_ticks << '\n';
    }
    return os.str();
}

} // namespace isched::cli
