#include "hexakin/store.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "hexakin/errors.hpp"
#include "hexakin/rng.hpp"
#include "hexakin/version.hpp"

namespace hexakin {

namespace {

constexpr const char* kWorkspaceHeader =
    "pose_id,dx,dy,dz,alpha,beta,gamma,l1,l2,l3,l4,l5,l6,jdet";
constexpr const char* kDhHeader =
    "pose_id,leg,theta2,theta3,d4,theta5,theta6,theta7,residual_mm,solved";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double(const std::string& s, const std::string& context) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("bad number '" + s + "' in " + context);
    return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& context) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("bad integer '" + s + "' in " + context);
    return v;
}

void check_header(const std::string& actual, const char* expected, const std::string& path) {
    if (actual == expected) return;
    const auto want = split_csv(expected);
    const auto got = split_csv(actual);
    for (const auto& col : want) {
        if (std::find(got.begin(), got.end(), col) == got.end())
            throw SchemaMismatch(path + ": missing column: " + col);
    }
    throw SchemaMismatch(path + ": header mismatch, expected '" + expected + "'");
}

nlohmann::ordered_json range_json(const Range& r) { return nlohmann::ordered_json{r.first, r.second}; }

Range range_from(const nlohmann::json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2)
        throw SchemaMismatch(path + ": metadata missing range: " + key);
    return {j[key][0].get<double>(), j[key][1].get<double>()};
}

void write_meta(const DatabaseMeta& meta, const std::string& csv_path) {
    nlohmann::ordered_json j;
    j["config_hash"] = meta.config_hash;
    j["limits"] = {{"x", range_json(meta.limits.x_range)},
                   {"y", range_json(meta.limits.y_range)},
                   {"z", range_json(meta.limits.z_range)},
                   {"roll", range_json(meta.limits.roll_range)},
                   {"pitch", range_json(meta.limits.pitch_range)},
                   {"yaw", range_json(meta.limits.yaw_range)}};
    j["steps"] = {{"xy", meta.steps.step_xy}, {"z", meta.steps.step_z}, {"rot", meta.steps.step_rot}};
    j["threshold"] = meta.threshold;
    if (meta.seed)
        j["seed"] = *meta.seed;
    else
        j["seed"] = nullptr;
    j["tool_version"] = meta.tool_version;
    j["created_utc"] = meta.created_utc;
    if (meta.source_workspace) j["source_workspace"] = *meta.source_workspace;

    const std::string path = sidecar_meta_path(csv_path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

DatabaseMeta read_meta(const std::string& csv_path) {
    const std::string path = sidecar_meta_path(csv_path);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open metadata sidecar: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    DatabaseMeta meta;
    for (const char* key : {"config_hash", "limits", "steps", "threshold", "tool_version", "created_utc"})
        if (!j.contains(key)) throw SchemaMismatch(path + ": metadata missing key: " + std::string(key));
    meta.config_hash = j["config_hash"].get<std::string>();
    meta.limits.x_range = range_from(j["limits"], "x", path);
    meta.limits.y_range = range_from(j["limits"], "y", path);
    meta.limits.z_range = range_from(j["limits"], "z", path);
    meta.limits.roll_range = range_from(j["limits"], "roll", path);
    meta.limits.pitch_range = range_from(j["limits"], "pitch", path);
    meta.limits.yaw_range = range_from(j["limits"], "yaw", path);
    meta.steps.step_xy = j["steps"]["xy"].get<double>();
    meta.steps.step_z = j["steps"]["z"].get<double>();
    meta.steps.step_rot = j["steps"]["rot"].get<double>();
    meta.threshold = j["threshold"].get<double>();
    if (j.contains("seed") && !j["seed"].is_null()) meta.seed = j["seed"].get<std::uint64_t>();
    meta.tool_version = j["tool_version"].get<std::string>();
    meta.created_utc = j["created_utc"].get<std::string>();
    if (j.contains("source_workspace")) meta.source_workspace = j["source_workspace"].get<std::string>();
    return meta;
}

} // namespace

std::string sidecar_meta_path(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".meta.json");
    return p.string();
}

std::string current_utc_timestamp() {
    std::time_t t = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
        t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
    } else {
        t = std::time(nullptr);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_workspace(const WorkspaceDb& db, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << kWorkspaceHeader << "\n";
    char buf[512];
    for (const auto& r : db.records) {
        std::snprintf(buf, sizeof(buf),
                      "%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                      static_cast<unsigned long long>(r.pose_id), r.pose.dx, r.pose.dy, r.pose.dz,
                      r.pose.alpha, r.pose.beta, r.pose.gamma, r.leg_lengths[0], r.leg_lengths[1],
                      r.leg_lengths[2], r.leg_lengths[3], r.leg_lengths[4], r.leg_lengths[5],
                      r.jacobian_det);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
    write_meta(db.meta, path);
}

WorkspaceDb read_workspace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw SchemaMismatch(path + ": empty file");
    check_header(line, kWorkspaceHeader, path);

    WorkspaceDb db;
    db.meta = read_meta(path);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv(line);
        const std::string ctx = path + ":" + std::to_string(lineno);
        if (f.size() != 14) throw SchemaMismatch(ctx + ": expected 14 fields, got " + std::to_string(f.size()));
        WorkspaceRecord r;
        r.pose_id = parse_u64(f[0], ctx);
        r.pose = Pose{parse_double(f[1], ctx), parse_double(f[2], ctx), parse_double(f[3], ctx),
                      parse_double(f[4], ctx), parse_double(f[5], ctx), parse_double(f[6], ctx)};
        for (int i = 0; i < 6; ++i) r.leg_lengths[static_cast<size_t>(i)] = parse_double(f[static_cast<size_t>(7 + i)], ctx);
        r.jacobian_det = parse_double(f[13], ctx);
        db.records.push_back(r);
    }
    std::sort(db.records.begin(), db.records.end(),
              [](const WorkspaceRecord& a, const WorkspaceRecord& b) { return a.pose_id < b.pose_id; });
    return db;
}

WorkspaceDb read_workspace(const std::string& path, const MachineConfig& config) {
    WorkspaceDb db = read_workspace(path);
    const std::string expected = config_hash(config);
    if (db.meta.config_hash != expected)
        throw ConfigHashMismatch(path + ": database written with config hash " + db.meta.config_hash +
                                 ", supplied config hashes to " + expected);
    return db;
}

void write_dh(const DhDb& db, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << kDhHeader << "\n";
    char buf[384];
    for (const auto& r : db.rows) {
        std::snprintf(buf, sizeof(buf), "%llu,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%d\n",
                      static_cast<unsigned long long>(r.pose_id), r.leg, r.solution.theta2,
                      r.solution.theta3, r.solution.d4, r.solution.theta5, r.solution.theta6,
                      r.solution.theta7, r.residual_mm, r.solved ? 1 : 0);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
    write_meta(db.meta, path);
}

DhDb read_dh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw SchemaMismatch(path + ": empty file");
    check_header(line, kDhHeader, path);

    DhDb db;
    db.meta = read_meta(path);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv(line);
        const std::string ctx = path + ":" + std::to_string(lineno);
        if (f.size() != 10) throw SchemaMismatch(ctx + ": expected 10 fields, got " + std::to_string(f.size()));
        DhRecord r;
        r.pose_id = parse_u64(f[0], ctx);
        r.leg = static_cast<int>(parse_u64(f[1], ctx));
        if (r.leg < 1 || r.leg > 6) throw ValidationError(ctx + ": leg index out of range");
        r.solution.leg_index = r.leg;
        r.solution.theta2 = parse_double(f[2], ctx);
        r.solution.theta3 = parse_double(f[3], ctx);
        r.solution.d4 = parse_double(f[4], ctx);
        r.solution.theta5 = parse_double(f[5], ctx);
        r.solution.theta6 = parse_double(f[6], ctx);
        r.solution.theta7 = parse_double(f[7], ctx);
        r.residual_mm = parse_double(f[8], ctx);
        r.solved = parse_u64(f[9], ctx) != 0;
        db.rows.push_back(r);
    }
    std::sort(db.rows.begin(), db.rows.end(), [](const DhRecord& a, const DhRecord& b) {
        return a.pose_id != b.pose_id ? a.pose_id < b.pose_id : a.leg < b.leg;
    });
    return db;
}

DhDb read_dh(const std::string& path, const MachineConfig& config) {
    DhDb db = read_dh(path);
    const std::string expected = config_hash(config);
    if (db.meta.config_hash != expected)
        throw ConfigHashMismatch(path + ": database written with config hash " + db.meta.config_hash +
                                 ", supplied config hashes to " + expected);
    return db;
}

std::vector<WorkspaceRecord> sample_poses(const WorkspaceDb& db, std::size_t n, std::uint64_t seed) {
    if (n > db.records.size())
        throw InsufficientRecords("sample of " + std::to_string(n) + " from " +
                                  std::to_string(db.records.size()) + " records");
    std::vector<std::size_t> idx(db.records.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    std::vector<WorkspaceRecord> out;
    out.reserve(n);
    for (const std::size_t i : idx) out.push_back(db.records[i]);
    return out;
}

std::vector<NearestHit> nearest_by_lengths(const WorkspaceDb& db,
                                           const std::array<double, 6>& lengths, std::size_t k) {
    if (db.records.empty()) throw EmptyDatabase("nearest_by_lengths: empty database");
    struct Entry {
        double dist2;
        std::size_t index;
    };
    std::vector<Entry> entries;
    entries.reserve(db.records.size());
    for (std::size_t i = 0; i < db.records.size(); ++i) {
        double d2 = 0.0;
        for (int j = 0; j < 6; ++j) {
            const double d = db.records[i].leg_lengths[static_cast<size_t>(j)] - lengths[static_cast<size_t>(j)];
            d2 += d * d;
        }
        entries.push_back({d2, i});
    }
    const std::size_t take = std::min(k, entries.size());
    auto cmp = [&](const Entry& a, const Entry& b) {
        if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
        return db.records[a.index].pose_id < db.records[b.index].pose_id;
    };
    std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(take),
                      entries.end(), cmp);
    std::vector<NearestHit> hits;
    hits.reserve(take);
    for (std::size_t i = 0; i < take; ++i)
        hits.push_back({db.records[entries[i].index], std::sqrt(entries[i].dist2)});
    return hits;
}

std::vector<SolvedPose> join_solved(const WorkspaceDb& ws, const DhDb& dh) {
    std::unordered_map<std::uint64_t, const WorkspaceRecord*> by_id;
    by_id.reserve(ws.records.size());
    for (const auto& r : ws.records) by_id[r.pose_id] = &r;

    struct Group {
        std::array<const DhRecord*, 6> legs{};
    };
    std::vector<std::uint64_t> order;
    std::unordered_map<std::uint64_t, Group> groups;
    for (const auto& row : dh.rows) {
        if (!by_id.count(row.pose_id))
            throw ValidationError("orphan DH record: pose_id " + std::to_string(row.pose_id) +
                                  " not in workspace database");
        auto [it, inserted] = groups.try_emplace(row.pose_id);
        if (inserted) order.push_back(row.pose_id);
        auto& slot = it->second.legs[static_cast<size_t>(row.leg - 1)];
        if (slot != nullptr)
            throw ValidationError("duplicate DH record: pose_id " + std::to_string(row.pose_id) +
                                  " leg " + std::to_string(row.leg));
        slot = &row;
    }

    std::vector<SolvedPose> out;
    for (const std::uint64_t id : order) {
        const Group& g = groups[id];
        bool complete = true;
        for (const auto* leg : g.legs) complete = complete && leg != nullptr && leg->solved;
        if (!complete) continue;
        SolvedPose sp;
        sp.pose_id = id;
        sp.pose = by_id[id]->pose;
        for (int i = 0; i < 6; ++i) {
            sp.legs[static_cast<size_t>(i)] = g.legs[static_cast<size_t>(i)]->solution;
            sp.residual_mm[static_cast<size_t>(i)] = g.legs[static_cast<size_t>(i)]->residual_mm;
        }
        out.push_back(std::move(sp));
    }
    return out;
}

} // namespace hexakin
