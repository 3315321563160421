#ifndef ISCHED_IO_HPP
#define ISCHED_IO_HPP

#include "isched/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace isched {

/// Every structural problem in an instance document, one message each.
/// Empty when the instance is valid. Throws ParseError on bad JSON.
std::vector<std::string> instance_diagnostics(std::string_view json);

/// Parses and validates an instance. Without an explicit "conflict_matrix"
/// the geometric conflict matrix is built. Throws ParseError or InvalidSpec.
IntersectionSpec parse_instance(std::string_view json);
IntersectionSpec load_instance(const std::filesystem::path &file);

/// Writes the instance including its explicit conflict matrix.
std::string instance_to_json(const IntersectionSpec &spec);

/// Accepts {"tick", "queues": [[[priority, wait], ...], ...]} or the dense
/// {"tick", "array": (P, 2, L)} form. Throws ParseError, MalformedArray or
/// DimensionError.
TrafficSnapshot parse_snapshot(std::string_view json, const IntersectionSpec &spec);
TrafficSnapshot load_snapshot(const std::filesystem::path &file, const IntersectionSpec &spec);

enum class SnapshotForm { Queues, Array };
std::string snapshot_to_json(const TrafficSnapshot &s, const IntersectionSpec &spec,
                             SnapshotForm form = SnapshotForm::Queues);

std::string read_text_file(const std::filesystem::path &file);

} // namespace isched

#endif // ISCHED_IO_HPP
