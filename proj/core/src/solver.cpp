#include "isched/solver.hpp"

#include "isched/error.hpp"

#include <limits>
#include <string>

namespace isched {

void SolverConfig::validate() const {
    dynamics.validate();
    if (horizon < 1) {
        throw InvalidSpec("horizon must be at least 1");
    }
    if (wmax && *wmax <= static_cast<std::int64_t>(dynamics.phase_ticks) * dynamics.slow_start) {
        throw InvalidSpec("wmax must exceed phase_ticks * slow_start");
    }
}

std::optional<std::size_t> starving_path(const TrafficSnapshot &s, std::int64_t wmax) {
    std::optional<std::size_t> best;
    std::int64_t best_wait = -1;
    for (std::size_t p = 0; p < s.queues.size(); ++p) {
        if (s.queues[p].empty()) {
            continue;
        }
        const auto w = s.queues[p].front().wait;
        if (w >= wmax && w > best_wait) {
            best = p;
            best_wait = w;
        }
    }
    return best;
}

Scheduler::Scheduler(ConflictMatrix conflicts)
    : conflicts_(std::move(conflicts)),
      feasible_(enumerate_feasible_phases(conflicts_, false)),
      maximal_(enumerate_feasible_phases(conflicts_, true)) {}

std::vector<Phase> Scheduler::candidate_phases(const TrafficSnapshot &s, const Phase & /*prev*/,
                                               const SolverConfig &cfg) const {
    const auto &pool = cfg.maximal_only ? maximal_ : feasible_;
    if (!cfg.wmax) {
        return pool;
    }
    const auto guard = starving_path(s, *cfg.wmax);
    if (!guard) {
        return pool;
    }
    std::vector<Phase> out;
    for (const auto &p : pool) {
        if (p.is_open(*guard)) {
            out.push_back(p);
        }
    }
    return out;
}

namespace {

struct Node {
    TrafficSnapshot state;
    GreenAge green_age;
    Phase prev;
    std::int64_t accrued = 0;
};

// Applies one phase for D ticks, returning the child node.
Node expand_child(const Node &parent, const Phase &phase, const SolverConfig &cfg,
                  const ConflictMatrix &conflicts) {
    Node child{parent.state, green_age_on_switch(parent.prev, phase, parent.green_age), phase,
               parent.accrued};
    for (int t = 0; t < cfg.dynamics.phase_ticks; ++t) {
        auto outcome = step(child.state, phase, child.green_age, cfg.dynamics, conflicts);
        child.accrued += outcome.tick_cost;
        child.state = std::move(outcome.next);
        advance_green_age(phase, child.green_age);
    }
    return child;
}

class Search {
public:
    Search(const Scheduler &scheduler, const SolverConfig &cfg, bool prune)
        : scheduler_(scheduler), cfg_(cfg), prune_(prune) {}

    Solution run(const TrafficSnapshot &s, const Phase &prev_phase) {
        const auto start = std::chrono::steady_clock::now();
        Node root{s, warm_green_age(prev_phase, cfg_.dynamics), prev_phase, 0};
        path_.reserve(static_cast<std::size_t>(cfg_.horizon));
        visit(root, 0);
        sol_.elapsed = std::chrono::steady_clock::now() - start;
        sol_.cost = best_;
        return std::move(sol_);
    }

private:
    void visit(const Node &node, int depth) {
        if (depth == cfg_.horizon) {
            ++sol_.schedules_evaluated;
            if (node.accrued < best_) {
                best_ = node.accrued;
                sol_.schedule = path_;
            }
            return;
        }
        const auto candidates = scheduler_.candidate_phases(node.state, node.prev, cfg_);
        if (candidates.empty()) {
            throw NoFeasibleSchedule("no candidate phase at depth " + std::to_string(depth));
        }
        const std::int64_t remaining =
            static_cast<std::int64_t>(cfg_.horizon - depth - 1) * cfg_.dynamics.phase_ticks;
        for (const auto &phase : candidates) {
            ++sol_.nodes_explored;
            Node child = expand_child(node, phase, cfg_, scheduler_.conflicts());
            if (prune_ && child.accrued + lower_bound(child.state, remaining) >= best_) {
                continue;
            }
            path_.push_back(phase);
            visit(child, depth + 1);
            path_.pop_back();
        }
    }

    const Scheduler &scheduler_;
    const SolverConfig &cfg_;
    bool prune_;
    std::int64_t best_ = std::numeric_limits<std::int64_t>::max();
    Schedule path_;
    Solution sol_;
};

} // namespace

Solution Scheduler::optimize_schedule(const TrafficSnapshot &s, const Phase &prev_phase,
                                      const SolverConfig &cfg) const {
    cfg.validate();
    if (s.queues.size() != conflicts_.size()) {
        throw DimensionError("snapshot path count does not match conflict matrix");
    }
    return Search(*this, cfg, true).run(s, prev_phase);
}

Solution Scheduler::exhaustive_oracle(const TrafficSnapshot &s, const Phase &prev_phase,
                                      const SolverConfig &cfg) const {
    cfg.validate();
    if (s.queues.size() != conflicts_.size()) {
        throw DimensionError("snapshot path count does not match conflict matrix");
    }
    // The guard only ever narrows the pool, so the unguarded pool bounds the tree.
    const auto branching = (cfg.maximal_only ? maximal_ : feasible_).size();
    std::uint64_t leaves = 1;
    for (int d = 0; d < cfg.horizon; ++d) {
        if (branching != 0 && leaves > cfg.oracle_cap / branching) {
            throw OracleTooLarge("oracle would enumerate more than " +
                                 std::to_string(cfg.oracle_cap) + " schedules");
        }
        leaves *= branching;
    }
    return Search(*this, cfg, false).run(s, prev_phase);
}

} // namespace isched
