// ellcov command-line front end.
//
// Angles are degrees and SNRs are dB on this boundary; conversion to the
// library's radians/linear units happens exactly once, here.  Every output
// table echoes the fully resolved configuration as '#'-prefixed lines that,
// stripped of the prefix, load back as a --config file.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellcov/distance_stats.hpp"
#include "ellcov/geometry.hpp"
#include "ellcov/montecarlo.hpp"
#include "ellcov/selftest.hpp"
#include "ellcov/snr_outage.hpp"
#include "ellcov/text.hpp"
#include "ellcov/version.hpp"

namespace {

using ellcov::text::format_double;

constexpr int kExitOk = 0;
constexpr int kExitSelftestFailed = 1;
constexpr int kExitInvalid = 2;

double deg2rad(double d) { return d * M_PI / 180.0; }

struct Table {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;  // echoed key/values
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string resolve_output_path(const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_relative() && !p.has_parent_path()) {
        if (const char* dir = std::getenv("ELLCOV_OUTDIR"); dir && *dir)
            return (std::filesystem::path(dir) / p).string();
    }
    return path;
}

void write_csv(std::ostream& os, const Table& t) {
    os << "# ellcov " << ellcov::kVersion << '\n';
    os << "# [" << t.command << "]\n";
    for (const auto& [k, v] : t.config) os << "# " << k << " = " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << t.columns[i] << (i + 1 < t.columns.size() ? "," : "");
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << row[i] << (i + 1 < row.size() ? "," : "");
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& t) {
    nlohmann::ordered_json j;
    j["tool"] = "ellcov";
    j["version"] = std::string(ellcov::kVersion);
    j["command"] = t.command;
    nlohmann::ordered_json cfg;
    for (const auto& [k, v] : t.config) cfg[k] = v;
    j["config"] = cfg;
    j["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) rows.push_back(row);
    j["rows"] = rows;
    os << j.dump(2) << '\n';
}

int emit(const Table& t, const std::string& output, const std::string& format) {
    const std::string path = resolve_output_path(output);
    std::ostringstream buf;
    if (format == "json")
        write_json(buf, t);
    else
        write_csv(buf, t);
    if (path.empty()) {
        std::cout << buf.str();
        return kExitOk;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        std::cerr << "ellcov: cannot open output file '" << path << "'\n";
        return kExitInvalid;
    }
    os << buf.str();
    return kExitOk;
}

std::vector<double> make_grid(const std::vector<double>& values, double from, double to,
                              double step) {
    if (!values.empty()) return values;
    if (!(step > 0.0)) throw ellcov::ValidityError("sweep step must be positive");
    if (to < from) throw ellcov::ValidityError("sweep range is empty (to < from)");
    const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    if (count > 1'000'000)
        throw ellcov::ValidityError("sweep grid has " + std::to_string(count) +
                                    " points; cap is 1e6");
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) grid.push_back(from + step * static_cast<double>(i));
    return grid;
}

void echo_grid(Table& t, const std::vector<double>& values, double from, double to,
               double step) {
    if (!values.empty()) {
        std::string vs;
        for (std::size_t i = 0; i < values.size(); ++i)
            vs += (i ? " " : "") + format_double(values[i]);
        t.config.emplace_back("values", vs);
    } else {
        t.config.emplace_back("from", format_double(from));
        t.config.emplace_back("to", format_double(to));
        t.config.emplace_back("step", format_double(step));
    }
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------
// geometry
// ---------------------------------------------------------------------------

struct GeometryArgs {
    double H = ellcov::LinkDefaults::kAltitudeM;
    double theta_deg = 30.0;
    double psi_deg = 0.0;
    std::string sweep;  // "" or "psi"
    std::vector<double> values;
    double from = 0.0, to = 60.0, step = 1.0;
    std::string output, format = "csv";
};

std::vector<std::string> geometry_row(double psi_deg, double H, double theta_deg) {
    const ellcov::TiltedScenario sc{H, deg2rad(theta_deg), deg2rad(psi_deg)};
    const auto fp = ellcov::footprint_from_tilt(sc);
    const auto sb = ellcov::support_bounds(fp, H);
    const double ratio = ellcov::area_ratio_vs_circle(sc);
    const double hv = ellcov::equivalent_vertical_altitude(sc);
    return {format_double(psi_deg), format_double(fp.a),      format_double(fp.b),
            format_double(fp.x0),   format_double(fp.ecc),    format_double(fp.area),
            format_double(ratio),   format_double(sb.d_min),  format_double(sb.d_break),
            format_double(sb.d_max), format_double(hv),       "true", ""};
}

int run_geometry(const GeometryArgs& a) {
    Table t;
    t.command = "geometry";
    t.config = {{"H", format_double(a.H)},
                {"theta", format_double(a.theta_deg)},
                {"psi", format_double(a.psi_deg)},
                {"format", a.format}};
    if (!a.sweep.empty()) {
        t.config.emplace_back("sweep", a.sweep);
        echo_grid(t, a.values, a.from, a.to, a.step);
    }
    t.columns = {"psi_deg", "a_m",      "b_m",        "x0_m",       "ecc",
                 "area_m2", "area_ratio", "d_min_m",  "d_break_m",  "d_max_m",
                 "H_v_m",   "valid",    "error"};

    if (a.sweep.empty()) {
        t.rows.push_back(geometry_row(a.psi_deg, a.H, a.theta_deg));  // may throw
    } else {
        if (a.sweep != "psi")
            throw ellcov::ValidityError("geometry sweep supports only 'psi'");
        bool any_valid = false;
        for (double psi : make_grid(a.values, a.from, a.to, a.step)) {
            try {
                t.rows.push_back(geometry_row(psi, a.H, a.theta_deg));
                any_valid = true;
            } catch (const std::exception& e) {
                std::vector<std::string> row(t.columns.size(), "nan");
                row.front() = format_double(psi);
                row[row.size() - 2] = "false";
                row.back() = std::string("\"") + e.what() + "\"";
                t.rows.push_back(std::move(row));
            }
        }
        if (!any_valid) throw ellcov::ValidityError("no valid sweep point");
    }
    return emit(t, a.output, a.format);
}

// ---------------------------------------------------------------------------
// distance
// ---------------------------------------------------------------------------

struct DistanceArgs {
    std::string scenario = "tilted";
    double H = ellcov::LinkDefaults::kAltitudeM;
    double theta_deg = 30.0;
    double psi_deg = 20.0;
    double a = 205.2, b = 188.5;
    int points = 400;
    std::size_t mc = 0;
    std::uint64_t seed = 1;
    std::string export_samples;
    std::string output, format = "csv";
};

ellcov::DistanceModel model_from_args(const std::string& scenario, double H,
                                      double theta_deg, double psi_deg, double a,
                                      double b) {
    if (scenario == "tilted")
        return ellcov::DistanceModel::tilted({H, deg2rad(theta_deg), deg2rad(psi_deg)});
    return ellcov::DistanceModel::vertical({a, b, H});
}

int run_distance(const DistanceArgs& args) {
    const auto model = model_from_args(args.scenario, args.H, args.theta_deg,
                                       args.psi_deg, args.a, args.b);
    if (!model.warning().empty()) std::cerr << "ellcov: warning: " << model.warning() << '\n';

    Table t;
    t.command = "distance";
    t.config = {{"scenario", args.scenario}, {"H", format_double(args.H)}};
    if (args.scenario == "tilted") {
        t.config.emplace_back("theta", format_double(args.theta_deg));
        t.config.emplace_back("psi", format_double(args.psi_deg));
    } else {
        t.config.emplace_back("a", format_double(args.a));
        t.config.emplace_back("b", format_double(args.b));
    }
    t.config.emplace_back("points", std::to_string(args.points));
    t.config.emplace_back("mc", std::to_string(args.mc));
    t.config.emplace_back("seed", std::to_string(args.seed));
    t.config.emplace_back("format", args.format);

    const auto& sb = model.bounds();
    if (args.points < 2 || args.points > 10'000'000)
        throw ellcov::ValidityError("grid resolution must be in [2, 1e7]");
    const int points = args.points;
    const double width = (sb.d_max - sb.d_min) / (points - 1);

    std::optional<ellcov::mc::EmpiricalDistribution> emp;
    if (args.mc > 0)
        emp.emplace(ellcov::mc::sample_distance({args.seed, args.mc, model, {}}));

    t.columns = {"d_m", "pdf", "cdf"};
    if (emp) {
        t.columns.push_back("mc_density");
        t.columns.push_back("mc_ecdf");
    }
    // Inclusive grid over the support; histogram cells are centered on the
    // grid points and clipped to the support at the two ends.
    for (int i = 0; i < points; ++i) {
        const double d = (i == points - 1) ? sb.d_max : sb.d_min + width * i;
        std::vector<std::string> row = {format_double(d),
                                        format_double(model.euclidean_pdf(d)),
                                        format_double(model.euclidean_cdf(d))};
        if (emp) {
            const double lo = std::max(sb.d_min, d - 0.5 * width);
            const double hi = std::min(sb.d_max, d + 0.5 * width);
            const double mass = emp->cdf(hi) - emp->cdf(lo);
            row.push_back(format_double(mass / (hi - lo)));
            row.push_back(format_double(emp->cdf(d)));
        }
        t.rows.push_back(std::move(row));
    }

    if (!args.export_samples.empty()) {
        if (!emp) throw ellcov::ValidityError("--export-samples requires --mc N");
        std::ofstream os(resolve_output_path(args.export_samples), std::ios::binary);
        if (!os) throw ellcov::ValidityError("cannot open sample export file");
        ellcov::mc::write_samples_csv(os, *emp, "distance_m");
    }
    return emit(t, args.output, args.format);
}

// ---------------------------------------------------------------------------
// outage
// ---------------------------------------------------------------------------

struct OutageArgs {
    std::string scenario = "tilted";
    double H = ellcov::LinkDefaults::kAltitudeM;
    double theta_deg = 30.0;
    double psi_deg = 20.0;
    double a = 205.2, b = 188.5;
    double m = 1.0;
    double nu = ellcov::LinkDefaults::kPathLossExponent;
    double gamma_bar_db = ellcov::LinkDefaults::kGammaBarDb;
    double gamma_th_db = 10.0;
    std::string sweep;
    std::vector<double> values;
    double from = 0.0, to = 0.0, step = 1.0;
    bool compare_vertical = false;
    std::size_t mc = 0;
    std::uint64_t seed = 1;
    std::string export_snr_samples;
    std::string output, format = "csv";
};

ellcov::SweepAxis parse_axis(const std::string& name) {
    if (name == "psi") return ellcov::SweepAxis::Psi;
    if (name == "theta") return ellcov::SweepAxis::Theta;
    if (name == "H") return ellcov::SweepAxis::Altitude;
    if (name == "m") return ellcov::SweepAxis::NakagamiM;
    if (name == "gamma_th") return ellcov::SweepAxis::GammaThDb;
    if (name == "gamma_bar") return ellcov::SweepAxis::GammaBarDb;
    throw ellcov::ValidityError("unknown sweep axis '" + name + "'");
}

int run_outage(const OutageArgs& args) {
    ellcov::SweepSpec spec;
    if (args.scenario == "tilted")
        spec.scenario = ellcov::TiltedScenario{args.H, deg2rad(args.theta_deg),
                                               deg2rad(args.psi_deg)};
    else
        spec.scenario = ellcov::VerticalScenario{args.a, args.b, args.H};
    spec.channel = {args.m, args.nu, args.gamma_bar_db};
    spec.channel.validate();
    spec.gamma_th_db = args.gamma_th_db;
    spec.compare_vertical = args.compare_vertical;
    if (spec.compare_vertical && args.scenario != "tilted")
        throw ellcov::ValidityError("--compare-vertical requires the tilted scenario");

    const bool angle_axis = (args.sweep == "psi" || args.sweep == "theta");
    std::string axis_name = args.sweep.empty() ? "gamma_th" : args.sweep;
    if (args.sweep.empty()) {
        spec.axis = ellcov::SweepAxis::GammaThDb;
        spec.grid = {args.gamma_th_db};
    } else {
        spec.axis = parse_axis(args.sweep);
        spec.grid = make_grid(args.values, args.from, args.to, args.step);
        if (angle_axis)
            for (double& v : spec.grid) v = deg2rad(v);
    }

    const auto rows = ellcov::outage_sweep(spec);

    Table t;
    t.command = "outage";
    t.config = {{"scenario", args.scenario}, {"H", format_double(args.H)}};
    if (args.scenario == "tilted") {
        t.config.emplace_back("theta", format_double(args.theta_deg));
        t.config.emplace_back("psi", format_double(args.psi_deg));
    } else {
        t.config.emplace_back("a", format_double(args.a));
        t.config.emplace_back("b", format_double(args.b));
    }
    t.config.emplace_back("m", format_double(args.m));
    t.config.emplace_back("nu", format_double(args.nu));
    t.config.emplace_back("gamma-bar", format_double(args.gamma_bar_db));
    t.config.emplace_back("gamma-th", format_double(args.gamma_th_db));
    if (!args.sweep.empty()) {
        t.config.emplace_back("sweep", args.sweep);
        echo_grid(t, args.values, args.from, args.to, args.step);
    }
    if (args.compare_vertical) t.config.emplace_back("compare-vertical", "true");
    t.config.emplace_back("format", args.format);

    const std::string axis_col =
        angle_axis ? axis_name + "_deg"
                   : (axis_name == "H" ? "H_m"
                                       : (axis_name == "m" ? "m" : axis_name + "_db"));
    t.columns = {axis_col, "p_out", "valid", "quadrature_floor"};
    if (args.compare_vertical) t.columns.push_back("p_out_vertical");
    t.columns.push_back("error");

    bool any_valid = false;
    for (const auto& r : rows) {
        const double shown = angle_axis ? r.axis_value * 180.0 / M_PI : r.axis_value;
        std::vector<std::string> row = {format_double(shown),
                                        r.valid ? format_double(r.p_out) : "nan",
                                        fmt_bool(r.valid), fmt_bool(r.quadrature_floor)};
        if (args.compare_vertical)
            row.push_back(r.valid ? format_double(r.p_out_vertical) : "nan");
        row.push_back(r.error.empty() ? "" : "\"" + r.error + "\"");
        t.rows.push_back(std::move(row));
        any_valid = any_valid || r.valid;
    }

    if (!args.export_snr_samples.empty()) {
        if (args.mc == 0)
            throw ellcov::ValidityError("--export-snr-samples requires --mc N");
        const auto model = model_from_args(args.scenario, args.H, args.theta_deg,
                                           args.psi_deg, args.a, args.b);
        const auto emp = ellcov::mc::sample_snr({args.seed, args.mc, model, spec.channel});
        std::ofstream os(resolve_output_path(args.export_snr_samples), std::ios::binary);
        if (!os) throw ellcov::ValidityError("cannot open sample export file");
        ellcov::mc::write_samples_csv(os, emp, "snr_linear");
    }

    const int rc = emit(t, args.output, args.format);
    if (rc != kExitOk) return rc;
    return any_valid ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverage statistics for elliptical transmitter footprints: "
                 "distance distributions, SNR, and outage probability"};
    app.set_version_flag("--version", std::string(ellcov::kVersion));
    app.set_config("--config", "", "Read options from an INI/TOML config file");
    app.require_subcommand(0, 1);

    GeometryArgs ga;
    auto* geo = app.add_subcommand("geometry", "Footprint dimensions and derived bounds");
    geo->configurable();
    geo->add_option("--H", ga.H, "Transmitter altitude, m")->capture_default_str();
    geo->add_option("--theta", ga.theta_deg, "Beam semi-apex angle, deg")
        ->capture_default_str();
    geo->add_option("--psi", ga.psi_deg, "Beam tilt angle, deg")->capture_default_str();
    geo->add_option("--sweep", ga.sweep, "Sweep axis (psi)")
        ->check(CLI::IsMember({"psi"}));
    geo->add_option("--values", ga.values, "Explicit sweep values");
    geo->add_option("--from", ga.from, "Sweep start")->capture_default_str();
    geo->add_option("--to", ga.to, "Sweep end (inclusive)")->capture_default_str();
    geo->add_option("--step", ga.step, "Sweep step")->capture_default_str();
    geo->add_option("--output", ga.output, "Output file (default stdout)");
    geo->add_option("--format", ga.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    DistanceArgs da;
    auto* dist = app.add_subcommand("distance", "Slant-distance PDF/CDF tables");
    dist->configurable();
    dist->add_option("--scenario", da.scenario, "tilted or vertical")
        ->check(CLI::IsMember({"tilted", "vertical"}))
        ->capture_default_str();
    dist->add_option("--H", da.H, "Transmitter altitude, m")->capture_default_str();
    dist->add_option("--theta", da.theta_deg, "Semi-apex angle, deg (tilted)")
        ->capture_default_str();
    dist->add_option("--psi", da.psi_deg, "Tilt angle, deg (tilted)")->capture_default_str();
    dist->add_option("--a", da.a, "Semi-major axis, m (vertical)")->capture_default_str();
    dist->add_option("--b", da.b, "Semi-minor axis, m (vertical)")->capture_default_str();
    dist->add_option("--points", da.points, "Grid points over the support (inclusive)")
        ->capture_default_str();
    dist->add_option("--mc", da.mc, "Add Monte-Carlo columns from N samples");
    dist->add_option("--seed", da.seed, "Monte-Carlo seed")->capture_default_str();
    dist->add_option("--export-samples", da.export_samples,
                     "Write raw distance samples (CSV, one per line)");
    dist->add_option("--output", da.output, "Output file (default stdout)");
    dist->add_option("--format", da.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    OutageArgs oa;
    auto* out = app.add_subcommand("outage", "Outage probability and parameter sweeps");
    out->configurable();
    out->add_option("--scenario", oa.scenario, "tilted or vertical")
        ->check(CLI::IsMember({"tilted", "vertical"}))
        ->capture_default_str();
    out->add_option("--H", oa.H, "Transmitter altitude, m")->capture_default_str();
    out->add_option("--theta", oa.theta_deg, "Semi-apex angle, deg (tilted)")
        ->capture_default_str();
    out->add_option("--psi", oa.psi_deg, "Tilt angle, deg (tilted)")->capture_default_str();
    out->add_option("--a", oa.a, "Semi-major axis, m (vertical)")->capture_default_str();
    out->add_option("--b", oa.b, "Semi-minor axis, m (vertical)")->capture_default_str();
    out->add_option("--m", oa.m, "Nakagami shape m >= 0.5")->capture_default_str();
    out->add_option("--nu", oa.nu, "Path-loss exponent")->capture_default_str();
    out->add_option("--gamma-bar", oa.gamma_bar_db, "Transmit SNR, dB")
        ->capture_default_str();
    out->add_option("--gamma-th", oa.gamma_th_db, "SNR threshold, dB")
        ->capture_default_str();
    out->add_option("--sweep", oa.sweep, "Axis: psi|theta|H|m|gamma_th|gamma_bar")
        ->check(CLI::IsMember({"psi", "theta", "H", "m", "gamma_th", "gamma_bar"}));
    out->add_option("--values", oa.values, "Explicit sweep values");
    out->add_option("--from", oa.from, "Sweep start");
    out->add_option("--to", oa.to, "Sweep end (inclusive)");
    out->add_option("--step", oa.step, "Sweep step")->capture_default_str();
    out->add_flag("--compare-vertical", oa.compare_vertical,
                  "Add outage of a nadir transmitter matching the footprint");
    out->add_option("--mc", oa.mc, "Monte-Carlo sample count for --export-snr-samples");
    out->add_option("--seed", oa.seed, "Monte-Carlo seed")->capture_default_str();
    out->add_option("--export-snr-samples", oa.export_snr_samples,
                    "Write raw SNR samples at the base configuration");
    out->add_option("--output", oa.output, "Output file (default stdout)");
    out->add_option("--format", oa.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    bool st_quick = false, st_inject = false;
    auto* st = app.add_subcommand("selftest", "Run the built-in oracle suite");
    st->configurable();
    st->add_flag("--quick", st_quick, "Reduced sample counts");
    st->add_flag("--inject-tolerance-fault", st_inject,
                 "Test hook: corrupt one tolerance to force a failure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (geo->parsed()) return run_geometry(ga);
        if (dist->parsed()) return run_distance(da);
        if (out->parsed()) return run_outage(oa);
        if (st->parsed()) {
            const auto report =
                ellcov::selftest::run({st_quick, st_inject}, std::cout, std::cerr);
            return report.ok() ? kExitOk : kExitSelftestFailed;
        }
        std::cerr << app.help();
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "ellcov: error: " << e.what() << '\n';
        return kExitInvalid;
    }
}
