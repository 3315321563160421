#include "isched/io.hpp"

#include "isched/error.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>

namespace isched {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        // e.byte is the 1-based offset of the offending character.
        int line = 1;
        int column = 1;
        const auto stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(e.what(), line, column);
    }
}

Turn parse_turn(const std::string &code) {
    if (code == "L" || code == "left") {
        return Turn::Left;
    }
    if (code == "S" || code == "straight") {
        return Turn::Straight;
    }
    if (code == "R" || code == "right") {
        return Turn::Right;
    }
    throw InvalidSpec("unknown turn '" + code + "' (expected L, S or R)");
}

struct RawInstance {
    IntersectionSpec spec;
    std::optional<std::vector<std::vector<long long>>> matrix;
};

// Reads fields without cross-checking them; type errors become diagnostics.
RawInstance read_raw(const json &doc, std::vector<std::string> &diag) {
    RawInstance raw;
    auto &spec = raw.spec;
    if (!doc.is_object()) {
        diag.emplace_back("instance must be a JSON object");
        return raw;
    }
    try {
        spec.arms = doc.value("arms", 4);
        spec.max_queue_len = doc.value("max_queue_len", 10);
        spec.merge_conflicts = doc.value("merge_conflicts", false);
        const auto side = doc.value("driving_side", std::string("left"));
        if (side == "left") {
            spec.driving_side = DrivingSide::Left;
        } else if (side == "right") {
            spec.driving_side = DrivingSide::Right;
        } else {
            diag.push_back("driving_side must be \"left\" or \"right\", got \"" + side + "\"");
        }
        if (doc.contains("paths")) {
            for (const auto &p : doc.at("paths")) {
                spec.paths.push_back(
                    {p.at("entry").get<int>(), parse_turn(p.at("turn").get<std::string>())});
            }
        } else if (spec.arms >= 3) {
            spec.paths = all_movements(spec.arms);
        }
        if (doc.contains("conflict_matrix") && !doc.at("conflict_matrix").is_null()) {
            raw.matrix = doc.at("conflict_matrix").get<std::vector<std::vector<long long>>>();
        }
    } catch (const json::exception &e) {
        diag.push_back(std::string("bad field: ") + e.what());
    } catch (const InvalidSpec &e) {
        diag.emplace_back(e.what());
    }
    return raw;
}

void check_raw(const RawInstance &raw, std::vector<std::string> &diag) {
    const auto &spec = raw.spec;
    if (spec.arms < 3) {
        diag.push_back("arms must be at least 3, got " + std::to_string(spec.arms));
    }
    if (spec.max_queue_len < 1) {
        diag.push_back("max_queue_len must be at least 1, got " +
                       std::to_string(spec.max_queue_len));
    }
    if (spec.paths.empty()) {
        diag.emplace_back("instance has no paths");
    }
    if (spec.paths.size() > kMaxPaths) {
        diag.push_back("at most " + std::to_string(kMaxPaths) + " paths are supported");
    }
    for (std::size_t i = 0; i < spec.paths.size(); ++i) {
        const auto &m = spec.paths[i];
        if (m.entry_arm < 0 || m.entry_arm >= spec.arms) {
            diag.push_back("path " + std::to_string(i) + " entry arm " +
                           std::to_string(m.entry_arm) + " outside [0, " +
                           std::to_string(spec.arms) + ")");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (spec.paths[j] == m) {
                diag.push_back("duplicate path " + describe(m) + " at indices " +
                               std::to_string(j) + " and " + std::to_string(i));
            }
        }
    }
    if (!raw.matrix) {
        return;
    }
    const auto &mat = *raw.matrix;
    const auto n = spec.paths.size();
    if (mat.size() != n) {
        diag.push_back("conflict_matrix has " + std::to_string(mat.size()) + " rows, expected " +
                       std::to_string(n));
        return;
    }
    bool square = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (mat[i].size() != n) {
            diag.push_back("conflict_matrix row " + std::to_string(i) + " has " +
                           std::to_string(mat[i].size()) + " entries, expected " +
                           std::to_string(n));
            square = false;
        }
    }
    if (!square) {
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto v = mat[i][j];
            const auto at = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (v != 0 && v != 1) {
                diag.push_back("non-boolean entry at " + at);
            } else if (i == j && v != 0) {
                diag.push_back("nonzero diagonal at " + at);
            } else if (j > i && v != mat[j][i]) {
                diag.push_back("asymmetric at " + at);
            }
        }
    }
}

IntersectionSpec finish(RawInstance raw) {
    auto &spec = raw.spec;
    if (raw.matrix) {
        spec.conflicts = ConflictMatrix(spec.paths.size());
        for (std::size_t i = 0; i < spec.paths.size(); ++i) {
            for (std::size_t j = i + 1; j < spec.paths.size(); ++j) {
                if ((*raw.matrix)[i][j] != 0) {
                    spec.conflicts.set(i, j);
                }
            }
        }
    } else {
        spec.conflicts = build_conflict_matrix(spec);
    }
    validate_spec(spec);
    return std::move(raw.spec);
}

std::string join_lines(const std::vector<std::string> &lines) {
    std::string out;
    for (const auto &l : lines) {
        if (!out.empty()) {
            out += '\n';
        }
        out += l;
    }
    return out;
}

} // namespace

std::string read_text_file(const std::filesystem::path &file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw InvalidSpec("cannot open " + file.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> instance_diagnostics(std::string_view text) {
    std::vector<std::string> diag;
    const auto raw = read_raw(parse_json(text), diag);
    if (diag.empty()) {
        check_raw(raw, diag);
    }
    return diag;
}

IntersectionSpec parse_instance(std::string_view text) {
    std::vector<std::string> diag;
    auto raw = read_raw(parse_json(text), diag);
    if (diag.empty()) {
        check_raw(raw, diag);
    }
    if (!diag.empty()) {
        throw InvalidSpec(join_lines(diag));
    }
    return finish(std::move(raw));
}

IntersectionSpec load_instance(const std::filesystem::path &file) {
    return parse_instance(read_text_file(file));
}

std::string instance_to_json(const IntersectionSpec &spec) {
    json doc;
    doc["arms"] = spec.arms;
    doc["max_queue_len"] = spec.max_queue_len;
    doc["driving_side"] = spec.driving_side == DrivingSide::Left ? "left" : "right";
    doc["merge_conflicts"] = spec.merge_conflicts;
    json paths = json::array();
    for (const auto &m : spec.paths) {
        paths.push_back({{"entry", m.entry_arm}, {"turn", std::string(1, turn_code(m.turn))}});
    }
    doc["paths"] = paths;
    json mat = json::array();
    for (std::size_t i = 0; i < spec.conflicts.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < spec.conflicts.size(); ++j) {
            row.push_back(spec.conflicts.conflicts(i, j) ? 1 : 0);
        }
        mat.push_back(row);
    }
    doc["conflict_matrix"] = mat;
    return doc.dump(2) + "\n";
}

TrafficSnapshot parse_snapshot(std::string_view text, const IntersectionSpec &spec) {
    const json doc = parse_json(text);
    if (!doc.is_object()) {
        throw MalformedArray("snapshot must be a JSON object");
    }
    try {
        const auto tick = doc.value("tick", std::int64_t{0});
        if (tick < 0) {
            throw MalformedArray("negative tick");
        }
        if (doc.contains("array")) {
            const auto rows = doc.at("array").get<std::vector<std::vector<std::vector<std::int64_t>>>>();
            const auto L = static_cast<std::size_t>(spec.max_queue_len);
            if (rows.size() != spec.path_count()) {
                throw DimensionError("array has " + std::to_string(rows.size()) +
                                     " paths, instance has " + std::to_string(spec.path_count()));
            }
            SnapshotArray a(spec.path_count(), L);
            for (std::size_t p = 0; p < rows.size(); ++p) {
                if (rows[p].size() != 2 || rows[p][0].size() != L || rows[p][1].size() != L) {
                    throw DimensionError("array entry " + std::to_string(p) +
                                         " is not shaped (2, max_queue_len)");
                }
                for (std::size_t k = 0; k < L; ++k) {
                    a.at(p, 0, k) = rows[p][0][k];
                    a.at(p, 1, k) = rows[p][1][k];
                }
            }
            return decode_snapshot(a, spec, tick);
        }
        TrafficSnapshot s;
        s.tick = tick;
        const auto queues =
            doc.at("queues").get<std::vector<std::vector<std::vector<std::int64_t>>>>();
        for (std::size_t p = 0; p < queues.size(); ++p) {
            PathQueue q;
            for (const auto &v : queues[p]) {
                if (v.size() != 2) {
                    throw MalformedArray("queue " + std::to_string(p) +
                                         " entries must be [priority, wait]");
                }
                if (v[0] < 1 || v[1] < 0) {
                    throw MalformedArray("queue " + std::to_string(p) +
                                         " has priority < 1 or negative wait");
                }
                q.push_back({static_cast<int>(v[0]), v[1]});
            }
            s.queues.push_back(std::move(q));
        }
        validate_snapshot(s, spec);
        return s;
    } catch (const json::exception &e) {
        throw MalformedArray(std::string("bad snapshot field: ") + e.what());
    }
}

TrafficSnapshot load_snapshot(const std::filesystem::path &file, const IntersectionSpec &spec) {
    return parse_snapshot(read_text_file(file), spec);
}

std::string snapshot_to_json(const TrafficSnapshot &s, const IntersectionSpec &spec,
                             SnapshotForm form) {
    json doc;
    doc["tick"] = s.tick;
    if (form == SnapshotForm::Array) {
        const auto a = encode_snapshot(s, spec);
        json rows = json::array();
        for (std::size_t p = 0; p < a.paths(); ++p) {
            json planes = json::array();
            for (std::size_t plane = 0; plane < 2; ++plane) {
                json slots = json::array();
                for (std::size_t k = 0; k < a.max_len(); ++k) {
                    slots.push_back(a.at(p, plane, k));
                }
                planes.push_back(slots);
            }
            rows.push_back(planes);
        }
        doc["array"] = rows;
    } else {
        json queues = json::array();
        for (const auto &q : s.queues) {
            json row = json::array();
            for (const auto &v : q) {
                row.push_back({v.priority, v.wait});
            }
            queues.push_back(row);
        }
        doc["queues"] = queues;
    }
    return doc.dump() + "\n";
}

} // namespace isched
