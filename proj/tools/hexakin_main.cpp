// hexakin: workspace generation, inverse/forward kinematics, nearest-pose
// lookup, and tolerance sensitivity for 6-UPS Stewart platforms.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hexakin/errors.hpp"
#include "hexakin/fk_solver.hpp"
#include "hexakin/ik.hpp"
#include "hexakin/joint_layout.hpp"
#include "hexakin/machine_config.hpp"
#include "hexakin/parallel.hpp"
#include "hexakin/sensitivity.hpp"
#include "hexakin/store.hpp"
#include "hexakin/version.hpp"

namespace {

using namespace hexakin;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitEmpty = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_doubles(const std::string& csv, std::size_t expected, const char* what) {
    std::vector<double> out;
    std::string::size_type start = 0;
    while (start <= csv.size()) {
        const auto comma = csv.find(',', start);
        const std::string tok = csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError(std::string(what) + ": bad number '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (expected != 0 && out.size() != expected)
        throw UsageError(std::string(what) + ": expected " + std::to_string(expected) +
                         " comma-separated values");
    return out;
}

MotionLimits load_limits_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open limits file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("limits " + path + ": " + e.what());
    }
    auto range = [&](const char* key) -> Range {
        if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2)
            throw ParseError("limits " + path + ": missing [min,max] entry: " + std::string(key));
        return {j[key][0].get<double>(), j[key][1].get<double>()};
    };
    MotionLimits limits;
    limits.x_range = range("x");
    limits.y_range = range("y");
    limits.z_range = range("z");
    limits.roll_range = range("roll");
    limits.pitch_range = range("pitch");
    limits.yaw_range = range("yaw");
    return limits;
}

std::string manifest_path(const std::string& out_path) {
    std::filesystem::path p(out_path);
    p.replace_extension(".manifest.json");
    return p.string();
}

void write_manifest(const std::string& out_path, const std::string& subcommand,
                    const nlohmann::ordered_json& params, std::optional<std::uint64_t> seed,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                    double wall_ms) {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["params"] = params;
    if (seed)
        j["seed"] = *seed;
    else
        j["seed"] = nullptr;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    // Wall time is omitted in reproducible mode so reruns are bit-identical.
    if (std::getenv("SOURCE_DATE_EPOCH"))
        j["wall_ms"] = nullptr;
    else
        j["wall_ms"] = wall_ms;
    j["tool_version"] = kToolVersion;
    j["created_utc"] = current_utc_timestamp();
    const std::string path = manifest_path(out_path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

// --- subcommand options ------------------------------------------------

struct WorkspaceOpts {
    std::string config_path;
    std::string limits_path;
    std::string steps = "15,10,10";
    double threshold = kDefaultSingularityThreshold;
    std::string out;
    int jobs = 0;
};

int run_workspace(const WorkspaceOpts& opt) {
    Timer timer;
    const MachineConfig config = load_machine_config(opt.config_path);
    const JointLayout layout = build_joint_layout(config);
    const MotionLimits limits =
        opt.limits_path.empty() ? default_motion_limits(config) : load_limits_file(opt.limits_path);
    const auto stepv = parse_doubles(opt.steps, 3, "--steps");
    const GridSteps steps{stepv[0], stepv[1], stepv[2]};
    const int jobs = resolve_jobs(opt.jobs);

    WorkspaceResult result = generate_workspace(layout, config, limits, steps, opt.threshold, jobs);

    WorkspaceDb db;
    db.records = std::move(result.records);
    db.meta.config_hash = config_hash(config);
    db.meta.limits = limits;
    db.meta.steps = steps;
    db.meta.threshold = opt.threshold;
    db.meta.tool_version = kToolVersion;
    db.meta.created_utc = current_utc_timestamp();
    write_workspace(db, opt.out);

    const double pct = result.grid_total > 0
                           ? 100.0 * static_cast<double>(db.records.size()) / static_cast<double>(result.grid_total)
                           : 0.0;
    std::printf("grid poses      %llu\n", static_cast<unsigned long long>(result.grid_total));
    std::printf("valid poses     %zu (%.2f%%)\n", db.records.size(), pct);
    std::printf("stroke rejects  %llu\n", static_cast<unsigned long long>(result.stroke_rejected));
    std::printf("singular rejects %llu\n", static_cast<unsigned long long>(result.singular_rejected));
    std::printf("wrote %s (%.1f ms, %d jobs)\n", opt.out.c_str(), timer.ms(), jobs);

    nlohmann::ordered_json params;
    params["limits"] = opt.limits_path.empty() ? "default" : opt.limits_path;
    params["steps"] = opt.steps;
    params["threshold"] = opt.threshold;
    params["jobs"] = jobs;
    write_manifest(opt.out, "workspace", params, std::nullopt, {opt.config_path},
                   {opt.out, sidecar_meta_path(opt.out)}, timer.ms());
    return kExitOk;
}

struct IkOpts {
    std::string config_path;
    std::string pose;
};

int run_ik(const IkOpts& opt) {
    const MachineConfig config = load_machine_config(opt.config_path);
    const JointLayout layout = build_joint_layout(config);
    const auto v = parse_doubles(opt.pose, 6, "--pose");
    const Pose pose = Pose{v[0], v[1], v[2], v[3], v[4], v[5]}.normalized();

    const auto lengths = leg_lengths(pose, layout, config);
    for (int i = 0; i < 6; ++i) std::printf("l%d %.6f\n", i + 1, lengths[static_cast<size_t>(i)]);
    const double det = force_jacobian(pose, layout, config).determinant();
    std::printf("jdet %.9g\n", det);
    const PoseValidity validity = pose_valid(pose, layout, config);
    if (validity.valid())
        std::printf("Valid\n");
    else
        std::printf("Invalid: %s\n", validity.reason().c_str());
    return kExitOk;
}

struct FkOpts {
    std::string config_path;
    std::string db_path;
    std::uint64_t sample = 0;
    std::uint64_t seed = 1;
    std::int64_t pose_id = -1;
    double error_limit = 1.0;
    double coarse = 1.0;
    double fine = 0.1;
    bool cold = false;
    std::string out;
    int jobs = 0;
};

int run_fk(const FkOpts& opt) {
    Timer timer;
    const MachineConfig config = load_machine_config(opt.config_path);
    const JointLayout layout = build_joint_layout(config);
    const WorkspaceDb db = read_workspace(opt.db_path, config);

    std::vector<WorkspaceRecord> selection;
    if (opt.pose_id >= 0) {
        for (const auto& r : db.records)
            if (r.pose_id == static_cast<std::uint64_t>(opt.pose_id)) selection.push_back(r);
        if (selection.empty())
            throw InsufficientRecords("pose_id " + std::to_string(opt.pose_id) + " not in database");
    } else if (opt.sample > 0) {
        selection = sample_poses(db, opt.sample, opt.seed);
    } else {
        throw UsageError("fk: pass --sample N or --pose-id ID");
    }

    SearchParams params;
    params.error_limit = opt.error_limit;
    params.coarse_step = opt.coarse;
    params.fine_step = opt.fine;
    params.warm_start = !opt.cold;

    const int jobs = resolve_jobs(opt.jobs);
    std::vector<FkResult> results(selection.size());
    parallel_chunks(selection.size(), jobs, [&](int, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i)
            results[i] = recover_pose(selection[i], layout, config, params);
    });

    DhDb out_db;
    std::size_t solved = 0;
    for (const auto& r : results) {
        if (r.solved()) ++solved;
        for (int leg = 1; leg <= 6; ++leg) {
            DhRecord row;
            row.pose_id = r.pose_id;
            row.leg = leg;
            const auto& sol = r.solutions[static_cast<size_t>(leg - 1)];
            if (sol) row.solution = *sol;
            row.solution.leg_index = leg;
            row.residual_mm = r.residual_mm[static_cast<size_t>(leg - 1)];
            row.solved = sol.has_value();
            out_db.rows.push_back(row);
        }
    }
    out_db.meta.config_hash = config_hash(config);
    out_db.meta.limits = db.meta.limits;
    out_db.meta.steps = db.meta.steps;
    out_db.meta.threshold = db.meta.threshold;
    out_db.meta.seed = opt.seed;
    out_db.meta.tool_version = kToolVersion;
    out_db.meta.created_utc = current_utc_timestamp();
    out_db.meta.source_workspace = opt.db_path;
    write_dh(out_db, opt.out);

    const double per_pose = selection.empty() ? 0.0 : timer.ms() / static_cast<double>(selection.size());
    std::printf("solved %zu/%zu poses\n", solved, selection.size());
    std::printf("mean per-pose time %.2f ms (%d jobs)\n", per_pose, jobs);
    std::printf("wrote %s\n", opt.out.c_str());

    nlohmann::ordered_json params_json;
    params_json["error_limit"] = opt.error_limit;
    params_json["coarse"] = opt.coarse;
    params_json["fine"] = opt.fine;
    params_json["warm_start"] = !opt.cold;
    params_json["sample"] = opt.sample;
    params_json["pose_id"] = opt.pose_id;
    params_json["jobs"] = jobs;
    write_manifest(opt.out, "fk", params_json,
                   opt.pose_id >= 0 ? std::nullopt : std::make_optional(opt.seed),
                   {opt.config_path, opt.db_path}, {opt.out, sidecar_meta_path(opt.out)},
                   timer.ms());
    return kExitOk;
}

struct LookupOpts {
    std::string db_path;
    std::string lengths;
    std::size_t k = 1;
};

int run_lookup(const LookupOpts& opt) {
    const WorkspaceDb db = read_workspace(opt.db_path);
    const auto v = parse_doubles(opt.lengths, 6, "--lengths");
    std::array<double, 6> lengths{};
    std::copy(v.begin(), v.end(), lengths.begin());
    const auto hits = fk_lookup(lengths, db, opt.k);
    std::printf("rank,pose_id,distance,dx,dy,dz,alpha,beta,gamma\n");
    for (std::size_t i = 0; i < hits.size(); ++i) {
        const auto& h = hits[i];
        std::printf("%zu,%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", i + 1,
                    static_cast<unsigned long long>(h.record.pose_id), h.distance, h.record.pose.dx,
                    h.record.pose.dy, h.record.pose.dz, h.record.pose.alpha, h.record.pose.beta,
                    h.record.pose.gamma);
    }
    return kExitOk;
}

struct SensitivityOpts {
    std::string config_path;
    std::string dh_db_path;
    std::string ws_db_path;
    std::string bands = "0.1,0.2,0.3,0.4,0.5";
    std::size_t samples = 0;
    std::uint64_t seed = 1;
    std::string out;
};

int run_sensitivity(const SensitivityOpts& opt) {
    Timer timer;
    const MachineConfig config = load_machine_config(opt.config_path);
    const DhDb dh = read_dh(opt.dh_db_path, config);

    std::string ws_path = opt.ws_db_path;
    if (ws_path.empty()) {
        if (!dh.meta.source_workspace)
            throw UsageError("sensitivity: DH metadata has no source_workspace; pass --db");
        ws_path = *dh.meta.source_workspace;
    }
    const WorkspaceDb ws = read_workspace(ws_path, config);
    const auto solved = join_solved(ws, dh);
    const auto bands = parse_doubles(opt.bands, 0, "--bands");

    const SweepReport report = sweep(solved, bands, opt.samples, opt.seed, config);
    write_sensitivity_report(report, opt.out);
    std::filesystem::path summary(opt.out);
    summary.replace_extension("");
    const std::string summary_path = summary.string() + "_summary.csv";
    write_sensitivity_summary(report, summary_path);

    for (const auto& b : report.bands)
        std::printf("band %.2f: max grip deviation %.3f mm, mean %.3f mm\n", b.band,
                    b.max_dev_dist, b.mean_dev_dist);
    std::printf("poses %zu, corner directions %zu, random directions %zu\n", report.pose_count,
                report.corner_directions, report.random_directions);
    std::printf("wrote %s and %s\n", opt.out.c_str(), summary_path.c_str());

    nlohmann::ordered_json params;
    params["bands"] = opt.bands;
    params["samples"] = opt.samples;
    params["dh_db"] = opt.dh_db_path;
    params["workspace_db"] = ws_path;
    write_manifest(opt.out, "sensitivity", params, opt.seed,
                   {opt.config_path, opt.dh_db_path, ws_path}, {opt.out, summary_path}, timer.ms());
    return kExitOk;
}

struct ExportOpts {
    std::string db_path;
    std::string report_path;
    std::string format = "csv";
    std::string out;
};

void write_svg_points(const std::vector<std::pair<double, double>>& pts, const std::string& path) {
    double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
    if (!pts.empty()) {
        min_x = max_x = pts[0].first;
        min_y = max_y = pts[0].second;
        for (const auto& [x, y] : pts) {
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
        }
    }
    const double span_x = std::max(1e-9, max_x - min_x);
    const double span_y = std::max(1e-9, max_y - min_y);
    const double view = 800.0, margin = 40.0, inner = view - 2.0 * margin;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    char buf[128];
    for (const auto& [x, y] : pts) {
        const double px = margin + (x - min_x) / span_x * inner;
        const double py = view - margin - (y - min_y) / span_y * inner;
        std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1\" fill=\"#1f77b4\"/>\n",
                      px, py);
        out << buf;
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path);
}

int run_export(const ExportOpts& opt) {
    Timer timer;
    if (opt.format != "csv" && opt.format != "svg-points")
        throw UsageError("export: --format must be csv or svg-points");
    const bool from_db = !opt.db_path.empty();
    if (from_db == !opt.report_path.empty())
        throw UsageError("export: pass exactly one of --db or --report");

    std::vector<std::string> inputs;
    if (from_db) {
        const WorkspaceDb db = read_workspace(opt.db_path);
        inputs.push_back(opt.db_path);
        if (opt.format == "csv") {
            std::ofstream out(opt.out, std::ios::binary);
            if (!out) throw IoError("cannot open for writing: " + opt.out);
            out << "x,y,z\n";
            char buf[128];
            for (const auto& r : db.records) {
                std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", r.pose.dx, r.pose.dy, r.pose.dz);
                out << buf;
            }
        } else {
            std::vector<std::pair<double, double>> pts;
            pts.reserve(db.records.size());
            for (const auto& r : db.records) pts.emplace_back(r.pose.dx, r.pose.dy);
            write_svg_points(pts, opt.out);
        }
    } else {
        // Report rows: band -> grip deviation scatter.
        std::ifstream in(opt.report_path);
        if (!in) throw IoError("cannot open: " + opt.report_path);
        inputs.push_back(opt.report_path);
        std::string line;
        if (!std::getline(in, line)) throw SchemaMismatch(opt.report_path + ": empty file");
        std::vector<std::pair<double, double>> pts;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = parse_doubles(line.substr(0, line.find(',')), 1, "band");
            const auto last = line.rfind(',');
            const auto prev = line.rfind(',', last - 1);
            const auto dev = parse_doubles(line.substr(prev + 1, last - prev - 1), 1, "dev_dist");
            pts.emplace_back(f[0], dev[0]);
        }
        if (opt.format == "csv") {
            std::ofstream out(opt.out, std::ios::binary);
            if (!out) throw IoError("cannot open for writing: " + opt.out);
            out << "band,dev_dist\n";
            char buf[64];
            for (const auto& [b, d] : pts) {
                std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", b, d);
                out << buf;
            }
        } else {
            write_svg_points(pts, opt.out);
        }
    }
    std::printf("wrote %s\n", opt.out.c_str());
    nlohmann::ordered_json params;
    params["format"] = opt.format;
    write_manifest(opt.out, "export", params, std::nullopt, inputs, {opt.out}, timer.ms());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"6-UPS Stewart platform kinematics toolkit"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    WorkspaceOpts ws;
    auto* cmd_ws = app.add_subcommand("workspace", "Generate a validated workspace database");
    cmd_ws->add_option("--config", ws.config_path, "Machine config JSON")->required();
    cmd_ws->add_option("--limits", ws.limits_path, "Motion limits JSON (default: built-in limits)");
    cmd_ws->add_option("--steps", ws.steps, "Grid steps xy,z,rot (mm,mm,deg)");
    cmd_ws->add_option("--threshold", ws.threshold, "Singularity threshold on |det J|");
    cmd_ws->add_option("--out", ws.out, "Output workspace CSV")->required();
    cmd_ws->add_option("--jobs", ws.jobs, "Worker threads (default: HEXAKIN_JOBS or all cores)");

    IkOpts ik;
    auto* cmd_ik = app.add_subcommand("ik", "Leg lengths and validity of one pose");
    cmd_ik->add_option("--config", ik.config_path, "Machine config JSON")->required();
    cmd_ik->add_option("--pose", ik.pose, "Pose dx,dy,dz,alpha,beta,gamma (mm,deg)")->required();

    FkOpts fk;
    auto* cmd_fk = app.add_subcommand("fk", "Recover DH parameters for database poses");
    cmd_fk->add_option("--config", fk.config_path, "Machine config JSON")->required();
    cmd_fk->add_option("--db", fk.db_path, "Workspace database CSV")->required();
    cmd_fk->add_option("--sample", fk.sample, "Number of random poses to solve");
    cmd_fk->add_option("--seed", fk.seed, "Sample seed");
    cmd_fk->add_option("--pose-id", fk.pose_id, "Solve one specific pose id");
    cmd_fk->add_option("--error-limit", fk.error_limit, "Grip error limit, mm");
    cmd_fk->add_option("--coarse", fk.coarse, "Coarse angle step, deg");
    cmd_fk->add_option("--fine", fk.fine, "Fine angle step, deg");
    cmd_fk->add_flag("--cold", fk.cold, "Full-grid scan instead of analytic warm start");
    cmd_fk->add_option("--out", fk.out, "Output DH database CSV")->required();
    cmd_fk->add_option("--jobs", fk.jobs, "Worker threads");

    LookupOpts lookup;
    auto* cmd_lookup = app.add_subcommand("lookup", "Nearest database poses for leg lengths");
    cmd_lookup->add_option("--db", lookup.db_path, "Workspace database CSV")->required();
    cmd_lookup->add_option("--lengths", lookup.lengths, "Six leg lengths l1,..,l6 (mm)")->required();
    cmd_lookup->add_option("--k", lookup.k, "Number of candidates");

    SensitivityOpts sens;
    auto* cmd_sens = app.add_subcommand("sensitivity", "Tolerance-band pose deviation sweep");
    cmd_sens->add_option("--config", sens.config_path, "Machine config JSON")->required();
    cmd_sens->add_option("--dh-db", sens.dh_db_path, "DH database CSV")->required();
    cmd_sens->add_option("--db", sens.ws_db_path, "Workspace database CSV (default: DH metadata)");
    cmd_sens->add_option("--bands", sens.bands, "Tolerance bands, deg/mm");
    cmd_sens->add_option("--samples", sens.samples, "Random directions per pose in addition to corners");
    cmd_sens->add_option("--seed", sens.seed, "Random-direction seed");
    cmd_sens->add_option("--out", sens.out, "Output report CSV")->required();

    ExportOpts exp;
    auto* cmd_exp = app.add_subcommand("export", "Plot-ready data from a database or report");
    cmd_exp->add_option("--db", exp.db_path, "Workspace database CSV");
    cmd_exp->add_option("--report", exp.report_path, "Sensitivity report CSV");
    cmd_exp->add_option("--format", exp.format, "csv or svg-points");
    cmd_exp->add_option("--out", exp.out, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (cmd_ws->parsed()) return run_workspace(ws);
        if (cmd_ik->parsed()) return run_ik(ik);
        if (cmd_fk->parsed()) return run_fk(fk);
        if (cmd_lookup->parsed()) return run_lookup(lookup);
        if (cmd_sens->parsed()) return run_sensitivity(sens);
        if (cmd_exp->parsed()) return run_export(exp);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConfigHashMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const EmptyDatabase& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmpty;
    } catch (const InsufficientRecords& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmpty;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const SchemaMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitConfig;
}
