#ifndef ISCHED_MODEL_HPP
#define ISCHED_MODEL_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace isched {

// Paths are stored in 64-bit phase masks.
inline constexpr std::size_t kMaxPaths = 64;

enum class Turn { Left, Straight, Right };
enum class DrivingSide { Left, Right };

/// One commute route through the junction: an approach arm plus a turn.
struct Movement {
    int entry_arm = 0;
    Turn turn = Turn::Straight;

    friend bool operator==(const Movement &, const Movement &) = default;
};

/// Arms are labelled clockwise. With left-hand traffic a left turn exits on
/// the next arm clockwise; right-hand traffic mirrors the turns.
int exit_arm(const Movement &m, int arms, DrivingSide side);

char turn_code(Turn t);
std::string describe(const Movement &m);

/// Symmetric P x P competing-path relation with a false diagonal.
class ConflictMatrix {
public:
    ConflictMatrix() = default;
    explicit ConflictMatrix(std::size_t paths);

    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] bool conflicts(std::size_t i, std::size_t j) const;

    /// Sets (i,j) and (j,i). Setting a diagonal entry throws InvalidSpec.
    void set(std::size_t i, std::size_t j, bool value = true);

    /// Bit j of the result is set iff paths i and j compete.
    [[nodiscard]] std::uint64_t row_mask(std::size_t i) const { return rows_.at(i); }

    [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

    friend bool operator==(const ConflictMatrix &, const ConflictMatrix &) = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> rows_;
};

struct IntersectionSpec {
    int arms = 4;
    std::vector<Movement> paths;
    int max_queue_len = 10;
    DrivingSide driving_side = DrivingSide::Left;
    bool merge_conflicts = false;
    ConflictMatrix conflicts;

    [[nodiscard]] std::size_t path_count() const { return paths.size(); }
};

/// Every (arm, turn) pair in arm-major order: index = arm * 3 + turn.
std::vector<Movement> all_movements(int arms);

/// The four-arm, twelve-path junction with geometric conflicts.
IntersectionSpec default_intersection(int max_queue_len = 10);

/// Chord-crossing conflicts: arms sit on a circle in clockwise order and two
/// paths compete when their entry->exit chords strictly interleave. Paths
/// sharing an entry arm never compete; paths sharing an exit arm compete
/// only when merge_conflicts is set.
ConflictMatrix build_conflict_matrix(const IntersectionSpec &spec);

/// Throws InvalidSpec when the spec breaks a structural invariant.
void validate_spec(const IntersectionSpec &spec);

struct VehicleRecord {
    int priority = 1;
    std::int64_t wait = 0;

    friend bool operator==(const VehicleRecord &, const VehicleRecord &) = default;
};

/// FIFO, front() departs first.
using PathQueue = std::vector<VehicleRecord>;

struct TrafficSnapshot {
    std::vector<PathQueue> queues;
    std::int64_t tick = 0;

    [[nodiscard]] std::size_t vehicle_count() const;
    [[nodiscard]] bool empty() const { return vehicle_count() == 0; }

    friend bool operator==(const TrafficSnapshot &, const TrafficSnapshot &) = default;
};

TrafficSnapshot empty_snapshot(const IntersectionSpec &spec, std::int64_t tick = 0);

/// Checks queue count against P and lengths against L.
void validate_snapshot(const TrafficSnapshot &s, const IntersectionSpec &spec);

/// Set of simultaneously open paths. Ordered by bit-vector value.
class Phase {
public:
    Phase() = default;
    explicit Phase(std::size_t width, std::uint64_t bits = 0);

    static Phase closed(std::size_t width) { return Phase(width); }
    static Phase of(std::size_t width, std::initializer_list<std::size_t> open);

    [[nodiscard]] std::size_t width() const { return width_; }
    [[nodiscard]] std::uint64_t bits() const { return bits_; }
    [[nodiscard]] bool is_open(std::size_t path) const { return (bits_ >> path) & 1U; }
    [[nodiscard]] bool none() const { return bits_ == 0; }
    [[nodiscard]] std::size_t open_count() const;
    [[nodiscard]] std::vector<std::size_t> open_paths() const;

    Phase &open(std::size_t path);

    friend bool operator==(const Phase &, const Phase &) = default;
    friend std::strong_ordering operator<=>(const Phase &a, const Phase &b) {
        if (auto c = a.bits_ <=> b.bits_; c != 0) {
            return c;
        }
        return a.width_ <=> b.width_;
    }

private:
    std::size_t width_ = 0;
    std::uint64_t bits_ = 0;
};

std::string to_string(const Phase &p);

bool is_feasible_phase(const Phase &p, const ConflictMatrix &c);

/// Nonempty feasible phases in ascending bit-vector order. With
/// maximal_only, only phases that cannot be extended by another path.
std::vector<Phase> enumerate_feasible_phases(const ConflictMatrix &c, bool maximal_only);

bool is_maximal_phase(const Phase &p, const ConflictMatrix &c);

/// Dense (P, 2, L) integer array. Plane 0 holds priorities, plane 1 waits,
/// both front-to-back with zero padding.
class SnapshotArray {
public:
    SnapshotArray(std::size_t paths, std::size_t max_len);

    [[nodiscard]] std::size_t paths() const { return paths_; }
    [[nodiscard]] std::size_t max_len() const { return max_len_; }

    std::int64_t &at(std::size_t path, std::size_t plane, std::size_t slot);
    [[nodiscard]] std::int64_t at(std::size_t path, std::size_t plane, std::size_t slot) const;

    [[nodiscard]] std::span<const std::int64_t> data() const { return values_; }

    friend bool operator==(const SnapshotArray &, const SnapshotArray &) = default;

private:
    std::size_t paths_;
    std::size_t max_len_;
    std::vector<std::int64_t> values_;
};

SnapshotArray encode_snapshot(const TrafficSnapshot &s, const IntersectionSpec &spec);
TrafficSnapshot decode_snapshot(const SnapshotArray &a, const IntersectionSpec &spec,
                                std::int64_t tick = 0);

} // namespace isched

#endif // ISCHED_MODEL_HPP
