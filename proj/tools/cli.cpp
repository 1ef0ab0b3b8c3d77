#include "cli.hpp"

#include "sfem/assembly.hpp"
#include "sfem/errors.hpp"
#include "sfem/green.hpp"
#include "sfem/io.hpp"
#include "sfem/norms.hpp"
#include "sfem/study.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <fstream>
#include <regex>

namespace sfem::cli {

namespace {

constexpr int kMaxLevel = 7;
constexpr double kMinTol = 1e-14;
constexpr double kMaxTol = 1e-4;

struct UsageError : Error {
    using Error::Error;
};

struct Options {
    std::string surface = "sphere";
    double R = 2.0;
    double r = 0.5;
    double a = 1.0;
    double b = 0.8;
    double c = 0.6;
    std::string case_name;
    std::string levels = "2..5";
    int level = 0;
    double tol = kDefaultSolverTolerance;
    std::string format = "csv";
    std::string out_path;
    std::string dump_system;
    std::vector<double> z0;
    std::string mode = "nodal";
    bool parallel = false;
};

Surface make_surface(const Options& o)
{
    try {
        if (o.surface == "sphere") {
            return Surface::unit_sphere();
        }
        if (o.surface == "torus") {
            return Surface::torus(o.R, o.r);
        }
        if (o.surface == "ellipsoid") {
            return Surface::ellipsoid(o.a, o.b, o.c);
        }
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    throw UsageError(fmt::format("unknown surface '{}'", o.surface));
}

void check_level(int level)
{
    if (level < 0 || level > kMaxLevel) {
        throw UsageError(fmt::format("level out of range: {} (allowed 0..{})", level, kMaxLevel));
    }
}

std::pair<int, int> parse_levels(const std::string& text)
{
    static const std::regex pattern(R"(\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, pattern)) {
        throw UsageError(fmt::format("levels must look like <min>..<max>, got '{}'", text));
    }
    const int lo = std::stoi(m[1]);
    const int hi = std::stoi(m[2]);
    check_level(lo);
    check_level(hi);
    if (lo > hi) {
        throw UsageError(fmt::format("level out of range: min {} exceeds max {}", lo, hi));
    }
    return {lo, hi};
}

void check_tol(double tol)
{
    if (!(tol >= kMinTol && tol <= kMaxTol)) {
        throw UsageError(fmt::format("tolerance {} outside [{}, {}]", tol, kMinTol, kMaxTol));
    }
}

TableFormat parse_format(const std::string& name)
{
    if (name == "csv") {
        return TableFormat::Csv;
    }
    if (name == "markdown") {
        return TableFormat::Markdown;
    }
    throw UsageError(fmt::format("unknown format '{}'", name));
}

ManufacturedCase pick_case(const Surface& s, const std::string& name)
{
    const auto cases = manufactured_cases(s);
    if (name.empty()) {
        // First non-trivial entry of the catalog.
        return cases.size() > 1 ? cases[1] : cases.front();
    }
    if (auto c = find_case(s, name)) {
        return *c;
    }
    std::string known;
    for (const auto& c : cases) {
        known += known.empty() ? c.name : ", " + c.name;
    }
    throw UsageError(fmt::format("unknown case '{}' for the {} (known: {})", name, s.name(), known));
}

Vec3 default_z0(const Surface& s)
{
    switch (s.kind()) {
    case SurfaceKind::UnitSphere: return {0.0, 0.0, 1.0};
    case SurfaceKind::Torus: return {s.params()[0] + s.params()[1], 0.0, 0.0};
    case SurfaceKind::Ellipsoid: return {0.0, 0.0, s.params()[2]};
    }
    return Vec3::Zero();
}

Vec3 parse_z0(const std::vector<double>& values, const Surface& s)
{
    if (values.empty()) {
        return default_z0(s);
    }
    if (values.size() != 3) {
        throw UsageError(fmt::format("z0 needs three coordinates, got {}", values.size()));
    }
    const Vec3 z(values[0], values[1], values[2]);
    // z0 names a point on the surface; anything beyond the symmetric band is a usage error.
    double distance = 0.0;
    try {
        distance = s.signed_distance(z);
    } catch (const OutOfTubularNeighborhood& e) {
        throw UsageError(e.what());
    }
    if (std::abs(distance) > s.tubular_width()) {
        throw UsageError(fmt::format("z0 is {} away from the {}; tubular width is {}", std::abs(distance), s.name(),
                                     s.tubular_width()));
    }
    return z;
}

DeltaMode parse_mode(const std::string& name)
{
    if (name == "nodal") {
        return DeltaMode::NodalEvaluation;
    }
    if (name == "moment") {
        return DeltaMode::MomentMatched;
    }
    throw UsageError(fmt::format("unknown mode '{}' (nodal or moment)", name));
}

/// Writes to --out when given, otherwise to the command's output stream.
template <typename Fn>
void emit(const Options& o, std::ostream& out, Fn&& write)
{
    if (o.out_path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) {
        throw Error(fmt::format("cannot open '{}' for writing", o.out_path));
    }
    write(file);
    file.flush();
    if (!file) {
        throw Error(fmt::format("failed writing '{}'", o.out_path));
    }
}

int cmd_mesh(const Options& o, std::ostream& out)
{
    const Surface s = make_surface(o);
    check_level(o.level);
    const TriMesh mesh = make_mesh(s, o.level);
    const MeshQuality q = quality(mesh);
    if (!o.out_path.empty()) {
        emit(o, out, [&](std::ostream& os) { write_mesh(os, mesh); });
    }
    fmt::print(out, "h={} gamma_h={} V={} F={} max_graph_height={}\n", format_real(q.h), format_real(q.gamma_h),
               q.n_vertices, q.n_triangles, format_real(q.max_graph_height));
    return kOk;
}

int cmd_solve(const Options& o, std::ostream& out)
{
    const Surface s = make_surface(o);
    check_level(o.level);
    check_tol(o.tol);
    const ManufacturedCase c = pick_case(s, o.case_name);
    const auto mesh = std::make_shared<const TriMesh>(make_mesh(s, o.level));

    if (!o.dump_system.empty()) {
        std::ofstream file(o.dump_system);
        if (!file) {
            throw Error(fmt::format("cannot open '{}' for writing", o.dump_system));
        }
        write_matrix_market(file, assemble_system(*mesh));
        if (!file) {
            throw Error(fmt::format("failed writing '{}'", o.dump_system));
        }
    }

    const FemSolution sol = solve_case(mesh, c, o.tol);
    ErrorRecord e = error_norms(sol);
    if (!o.out_path.empty()) {
        emit(o, out, [&](std::ostream& os) {
            os << "vertex,x,y,z,u_h,u\n";
            for (std::size_t i = 0; i < mesh->n_vertices(); ++i) {
                const Vec3& v = mesh->vertex(static_cast<Index>(i));
                fmt::print(os, "{},{},{},{},{},{}\n", i, format_real(v.x()), format_real(v.y()), format_real(v.z()),
                           format_real(sol.coefficients[i]), format_real(c.u(v)));
            }
        });
    }
    fmt::print(out, "case={} level={} V={} iterations={} residual={} err_L2={} err_H1={} err_Linf={}\n", c.name,
               o.level, mesh->n_vertices(), sol.iterations, format_real(sol.residual_norm), format_real(e.err_L2),
               format_real(e.err_H1), format_real(e.err_Linf));
    return kOk;
}

constexpr double kRoundoffError = 1e-10;

int cmd_convergence(const Options& o, std::ostream& out, std::ostream& err, bool interpolation)
{
    const Surface s = make_surface(o);
    const auto [lo, hi] = parse_levels(o.levels);
    check_tol(o.tol);
    const TableFormat format = parse_format(o.format);
    const ManufacturedCase c = pick_case(s, o.case_name);

    const ConvergenceTable table =
        interpolation ? interpolation_convergence(s, c, lo, hi) : convergence_study(s, c, lo, hi, o.tol, o.parallel);
    emit(o, out, [&](std::ostream& os) { write_table(os, to_text_table(table), format); });

    // Cases the space reproduces exactly leave only round-off, whose rates mean nothing.
    const ErrorRecord& finest = table.records.back();
    if (std::max({finest.err_L2, finest.err_H1, finest.err_Linf}) <= kRoundoffError) {
        return kOk;
    }
    // The interpolant's maximum error converges at the full second order.
    const RateBand linf = interpolation ? kBandL2 : kBandLinf;
    if (!finest_pair_within(table, kBandL2, kBandH1, linf)) {
        fmt::print(err, "rate check failed: finest-pair EOC L2={} H1={} Linf={}\n", table.eoc_L2.back(),
                   table.eoc_H1.back(), table.eoc_Linf.back());
        return kRateCheckFailed;
    }
    return kOk;
}

int cmd_green(const Options& o, std::ostream& out, std::ostream& err)
{
    const Surface s = make_surface(o);
    const auto [lo, hi] = parse_levels(o.levels);
    if (hi - lo < 2) {
        throw UsageError("the Green's function study needs at least three levels");
    }
    check_tol(o.tol);
    const TableFormat format = parse_format(o.format);
    const Vec3 z0 = parse_z0(o.z0, s);
    const DeltaMode mode = parse_mode(o.mode);

    const GreenStudy study = green_self_convergence(s, z0, lo, hi, mode, o.tol, o.parallel);
    emit(o, out, [&](std::ostream& os) { write_table(os, to_text_table(study), format); });
    if (!study.rates_within(kGreenRateLo, kGreenRateHi)) {
        fmt::print(err, "rate check failed: W11 EOC outside [{}, {}]\n", kGreenRateLo, kGreenRateHi);
        return kRateCheckFailed;
    }
    return kOk;
}

void add_common_options(CLI::App& app, Options& o)
{
    app.add_option("--surface", o.surface, "sphere, torus or ellipsoid")->capture_default_str();
    app.add_option("--R", o.R, "torus major radius")->capture_default_str();
    app.add_option("--r", o.r, "torus minor radius")->capture_default_str();
    app.add_option("--a", o.a, "ellipsoid semi-axis along x")->capture_default_str();
    app.add_option("--b", o.b, "ellipsoid semi-axis along y")->capture_default_str();
    app.add_option("--c", o.c, "ellipsoid semi-axis along z")->capture_default_str();
    app.add_option("--case", o.case_name, "manufactured solution (default: first non-constant case)");
    app.add_option("--levels", o.levels, "level range <min>..<max>")->capture_default_str();
    app.add_option("--level", o.level, "single refinement level")->capture_default_str();
    app.add_option("--tol", o.tol, "relative CG tolerance")->capture_default_str();
    app.add_option("--format", o.format, "csv or markdown")->capture_default_str();
    app.add_option("--out", o.out_path, "output file (default: standard output)");
    app.add_option("--dump-system", o.dump_system, "write the system matrix as MatrixMarket");
    app.add_option("--z0", o.z0, "source point x,y,z for green")->expected(3)->delimiter(',');
    app.add_option("--mode", o.mode, "nodal or moment")->capture_default_str();
    app.add_flag("--parallel", o.parallel, "solve levels concurrently");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app("Surface finite elements for -Laplace-Beltrami u + u = f", "sfem");
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value settings file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
    add_common_options(app, o);

    CLI::App* mesh = app.add_subcommand("mesh", "generate a mesh and report its quality");
    CLI::App* solve = app.add_subcommand("solve", "solve one manufactured case on one level");
    CLI::App* convergence = app.add_subcommand("convergence", "Galerkin error study across levels");
    CLI::App* interp = app.add_subcommand("interp", "interpolation error study across levels");
    CLI::App* green = app.add_subcommand("green", "discrete Green's function self-convergence");

    std::vector<const char*> argv{"sfem"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kUsageError;
    }

    try {
        if (mesh->parsed()) {
            return cmd_mesh(o, out);
        }
        if (solve->parsed()) {
            return cmd_solve(o, out);
        }
        if (convergence->parsed()) {
            return cmd_convergence(o, out, err, false);
        }
        if (interp->parsed()) {
            return cmd_convergence(o, out, err, true);
        }
        if (green->parsed()) {
            return cmd_green(o, out, err);
        }
    } catch (const UsageError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kUsageError;
    } catch (const OutOfTubularNeighborhood& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kUsageError;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kRuntimeError;
    }
    return kUsageError;
}

} // namespace sfem::cli
