#include "isched/model.hpp"

#include "isched/error.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace isched {

namespace {

int mod(int a, int m) { return ((a % m) + m) % m; }

// True iff x lies strictly inside the clockwise arc from a to b.
bool strictly_between(int a, int b, int x, int arms) {
    int span = mod(b - a, arms);
    int off = mod(x - a, arms);
    return off > 0 && off < span;
}

} // namespace

int exit_arm(const Movement &m, int arms, DrivingSide side) {
    if (arms < 3) {
        throw InvalidGeometry("intersection needs at least 3 arms, got " + std::to_string(arms));
    }
    if (m.entry_arm < 0 || m.entry_arm >= arms) {
        throw InvalidGeometry("entry arm " + std::to_string(m.entry_arm) + " outside [0, " +
                              std::to_string(arms) + ")");
    }
    int near = side == DrivingSide::Left ? 1 : arms - 1;
    switch (m.turn) {
    case Turn::Left:
        return mod(m.entry_arm + near, arms);
    case Turn::Straight:
        return mod(m.entry_arm + 2, arms);
    case Turn::Right:
        return mod(m.entry_arm - near, arms);
    }
    throw InvalidGeometry("unknown turn");
}

char turn_code(Turn t) {
    switch (t) {
    case Turn::Left:
        return 'L';
    case Turn::Straight:
        return 'S';
    case Turn::Right:
        return 'R';
    }
    return '?';
}

std::string describe(const Movement &m) {
    return std::to_string(m.entry_arm) + turn_code(m.turn);
}

ConflictMatrix::ConflictMatrix(std::size_t paths) : size_(paths), rows_(paths, 0) {
    if (paths > kMaxPaths) {
        throw InvalidSpec("at most " + std::to_string(kMaxPaths) + " paths are supported");
    }
}

bool ConflictMatrix::conflicts(std::size_t i, std::size_t j) const {
    return (rows_.at(i) >> j) & 1U;
}

void ConflictMatrix::set(std::size_t i, std::size_t j, bool value) {
    if (i >= size_ || j >= size_) {
        throw DimensionError("conflict index out of range");
    }
    if (i == j) {
        if (value) {
            throw InvalidSpec("a path cannot compete with itself");
        }
        return;
    }
    auto bit_i = std::uint64_t{1} << i;
    auto bit_j = std::uint64_t{1} << j;
    if (value) {
        rows_[i] |= bit_j;
        rows_[j] |= bit_i;
    } else {
        rows_[i] &= ~bit_j;
        rows_[j] &= ~bit_i;
    }
}

std::vector<std::pair<std::size_t, std::size_t>> ConflictMatrix::pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size_; ++i) {
        for (std::size_t j = i + 1; j < size_; ++j) {
            if (conflicts(i, j)) {
                out.emplace_back(i, j);
            }
        }
    }
    return out;
}

std::vector<Movement> all_movements(int arms) {
    std::vector<Movement> out;
    for (int a = 0; a < arms; ++a) {
        for (Turn t : {Turn::Left, Turn::Straight, Turn::Right}) {
            out.push_back({a, t});
        }
    }
    return out;
}

IntersectionSpec default_intersection(int max_queue_len) {
    IntersectionSpec spec;
    spec.arms = 4;
    spec.paths = all_movements(4);
    spec.max_queue_len = max_queue_len;
    spec.conflicts = build_conflict_matrix(spec);
    return spec;
}

ConflictMatrix build_conflict_matrix(const IntersectionSpec &spec) {
    const auto n = spec.paths.size();
    if (n > kMaxPaths) {
        throw InvalidSpec("at most " + std::to_string(kMaxPaths) + " paths are supported");
    }
    std::vector<int> exits(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (spec.paths[i] == spec.paths[j]) {
                throw InvalidSpec("duplicate path " + describe(spec.paths[i]) + " at indices " +
                                  std::to_string(j) + " and " + std::to_string(i));
            }
        }
        exits[i] = exit_arm(spec.paths[i], spec.arms, spec.driving_side);
    }

    ConflictMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int a = spec.paths[i].entry_arm;
        const int b = exits[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const int x = spec.paths[j].entry_arm;
            const int y = exits[j];
            if (a == x) {
                continue;
            }
            if (b == y) {
                if (spec.merge_conflicts) {
                    c.set(i, j);
                }
                continue;
            }
            if (a == y || b == x) {
                continue; // chords touch at an arm, no strict crossing
            }
            if (strictly_between(a, b, x, spec.arms) != strictly_between(a, b, y, spec.arms)) {
                c.set(i, j);
            }
        }
    }
    return c;
}

void validate_spec(const IntersectionSpec &spec) {
    if (spec.arms < 3) {
        throw InvalidSpec("arms must be at least 3");
    }
    if (spec.paths.empty()) {
        throw InvalidSpec("instance has no paths");
    }
    if (spec.paths.size() > kMaxPaths) {
        throw InvalidSpec("at most " + std::to_string(kMaxPaths) + " paths are supported");
    }
    if (spec.max_queue_len < 1) {
        throw InvalidSpec("max_queue_len must be at least 1");
    }
    for (std::size_t i = 0; i < spec.paths.size(); ++i) {
        if (spec.paths[i].entry_arm < 0 || spec.paths[i].entry_arm >= spec.arms) {
            throw InvalidSpec("path " + std::to_string(i) + " has entry arm outside [0, arms)");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (spec.paths[i] == spec.paths[j]) {
                throw InvalidSpec("duplicate path " + describe(spec.paths[i]));
            }
        }
    }
    if (spec.conflicts.size() != spec.paths.size()) {
        throw InvalidSpec("conflict matrix is " + std::to_string(spec.conflicts.size()) + "x" +
                          std::to_string(spec.conflicts.size()) + " but there are " +
                          std::to_string(spec.paths.size()) + " paths");
    }
}

std::size_t TrafficSnapshot::vehicle_count() const {
    std::size_t n = 0;
    for (const auto &q : queues) {
        n += q.size();
    }
    return n;
}

TrafficSnapshot empty_snapshot(const IntersectionSpec &spec, std::int64_t tick) {
    TrafficSnapshot s;
    s.queues.resize(spec.path_count());
    s.tick = tick;
    return s;
}

void validate_snapshot(const TrafficSnapshot &s, const IntersectionSpec &spec) {
    if (s.queues.size() != spec.path_count()) {
        throw DimensionError("snapshot has " + std::to_string(s.queues.size()) +
                             " queues, instance has " + std::to_string(spec.path_count()) +
                             " paths");
    }
    if (s.tick < 0) {
        throw MalformedArray("negative tick");
    }
    for (std::size_t p = 0; p < s.queues.size(); ++p) {
        const auto &q = s.queues[p];
        if (q.size() > static_cast<std::size_t>(spec.max_queue_len)) {
            throw DimensionError("queue " + std::to_string(p) + " holds " +
                                 std::to_string(q.size()) + " vehicles, limit is " +
                                 std::to_string(spec.max_queue_len));
        }
        for (const auto &v : q) {
            if (v.priority < 1 || v.wait < 0) {
                throw MalformedArray("queue " + std::to_string(p) +
                                     " has a vehicle with priority < 1 or negative wait");
            }
        }
    }
}

Phase::Phase(std::size_t width, std::uint64_t bits) : width_(width), bits_(bits) {
    if (width > kMaxPaths) {
        throw DimensionError("phase width exceeds " + std::to_string(kMaxPaths));
    }
    if (width < kMaxPaths && (bits >> width) != 0) {
        throw DimensionError("phase has bits beyond its width");
    }
}

Phase Phase::of(std::size_t width, std::initializer_list<std::size_t> open) {
    Phase p(width);
    for (auto i : open) {
        p.open(i);
    }
    return p;
}

std::size_t Phase::open_count() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<std::size_t> Phase::open_paths() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < width_; ++i) {
        if (is_open(i)) {
            out.push_back(i);
        }
    }
    return out;
}

Phase &Phase::open(std::size_t path) {
    if (path >= width_) {
        throw DimensionError("path " + std::to_string(path) + " outside phase width " +
                             std::to_string(width_));
    }
    bits_ |= std::uint64_t{1} << path;
    return *this;
}

std::string to_string(const Phase &p) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (auto i : p.open_paths()) {
        os << (first ? "" : ",") << i;
        first = false;
    }
    os << '}';
    return os.str();
}

bool is_feasible_phase(const Phase &p, const ConflictMatrix &c) {
    if (p.width() != c.size()) {
        throw DimensionError("phase width " + std::to_string(p.width()) +
                             " does not match conflict matrix size " + std::to_string(c.size()));
    }
    for (auto i : p.open_paths()) {
        if (c.row_mask(i) & p.bits()) {
            return false;
        }
    }
    return true;
}

bool is_maximal_phase(const Phase &p, const ConflictMatrix &c) {
    if (!is_feasible_phase(p, c)) {
        return false;
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!p.is_open(i) && (c.row_mask(i) & p.bits()) == 0) {
            return false;
        }
    }
    return true;
}

namespace {

// Include/exclude branching over paths; a path is skippable once a chosen
// path blocks it.
void collect_independent(const ConflictMatrix &c, int path, std::uint64_t chosen,
                         std::uint64_t blocked, std::vector<std::uint64_t> &out) {
    if (path < 0) {
        if (chosen != 0) {
            out.push_back(chosen);
        }
        return;
    }
    const auto bit = std::uint64_t{1} << path;
    collect_independent(c, path - 1, chosen, blocked, out);
    if ((blocked & bit) == 0) {
        collect_independent(c, path - 1, chosen | bit, blocked | c.row_mask(path), out);
    }
}

} // namespace

std::vector<Phase> enumerate_feasible_phases(const ConflictMatrix &c, bool maximal_only) {
    std::vector<std::uint64_t> sets;
    collect_independent(c, static_cast<int>(c.size()) - 1, 0, 0, sets);
    std::sort(sets.begin(), sets.end());

    std::vector<Phase> out;
    out.reserve(sets.size());
    for (auto bits : sets) {
        Phase p(c.size(), bits);
        if (!maximal_only || is_maximal_phase(p, c)) {
            out.push_back(p);
        }
    }
    return out;
}

SnapshotArray::SnapshotArray(std::size_t paths, std::size_t max_len)
    : paths_(paths), max_len_(max_len), values_(paths * 2 * max_len, 0) {}

std::int64_t &SnapshotArray::at(std::size_t path, std::size_t plane, std::size_t slot) {
    if (path >= paths_ || plane >= 2 || slot >= max_len_) {
        throw DimensionError("snapshot array index out of range");
    }
    return values_[(path * 2 + plane) * max_len_ + slot];
}

std::int64_t SnapshotArray::at(std::size_t path, std::size_t plane, std::size_t slot) const {
    if (path >= paths_ || plane >= 2 || slot >= max_len_) {
        throw DimensionError("snapshot array index out of range");
    }
    return values_[(path * 2 + plane) * max_len_ + slot];
}

SnapshotArray encode_snapshot(const TrafficSnapshot &s, const IntersectionSpec &spec) {
    validate_snapshot(s, spec);
    SnapshotArray a(spec.path_count(), static_cast<std::size_t>(spec.max_queue_len));
    for (std::size_t p = 0; p < s.queues.size(); ++p) {
        for (std::size_t k = 0; k < s.queues[p].size(); ++k) {
            a.at(p, 0, k) = s.queues[p][k].priority;
            a.at(p, 1, k) = s.queues[p][k].wait;
        }
    }
    return a;
}

TrafficSnapshot decode_snapshot(const SnapshotArray &a, const IntersectionSpec &spec,
                                std::int64_t tick) {
    if (a.paths() != spec.path_count() ||
        a.max_len() != static_cast<std::size_t>(spec.max_queue_len)) {
        throw DimensionError("array shape does not match (paths, 2, max_queue_len)");
    }
    TrafficSnapshot s = empty_snapshot(spec, tick);
    for (std::size_t p = 0; p < a.paths(); ++p) {
        bool ended = false;
        for (std::size_t k = 0; k < a.max_len(); ++k) {
            const auto pri = a.at(p, 0, k);
            const auto wait = a.at(p, 1, k);
            const auto where = " at path " + std::to_string(p) + " slot " + std::to_string(k);
            if (pri < 0 || wait < 0) {
                throw MalformedArray("negative value" + where);
            }
            if (pri == 0) {
                if (wait != 0) {
                    throw MalformedArray("empty slot carries a nonzero wait" + where);
                }
                ended = true;
                continue;
            }
            if (ended) {
                throw MalformedArray("vehicle after an empty slot" + where);
            }
            s.queues[p].push_back({static_cast<int>(pri), wait});
        }
    }
    return s;
}

} // namespace isched
