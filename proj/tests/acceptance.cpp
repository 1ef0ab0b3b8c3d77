// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "cli.hpp"

#include "sfem/assembly.hpp"
#include "sfem/green.hpp"
#include "sfem/io.hpp"
#include "sfem/norms.hpp"
#include "sfem/study.hpp"

#include "test_support.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace sfem;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string band_text(RateBand b)
{
    return fmt::format("[{}, {}]", b.lo, b.hi);
}

// Sphere studies shared by criteria 1-3 and 10.
struct SphereRuns {
    std::vector<std::pair<std::string, ConvergenceTable>> tables;
    double seconds = 0.0;
};

const SphereRuns& sphere_runs()
{
    static const SphereRuns runs = [] {
        SphereRuns r;
        const Surface s = Surface::unit_sphere();
        const auto start = Clock::now();
        for (const char* name : {"linear-harmonic", "quadratic-harmonic"}) {
            r.tables.emplace_back(name, convergence_study(s, *find_case(s, name), 2, 5));
        }
        r.seconds = seconds_since(start);
        return r;
    }();
    return runs;
}

Outcome sphere_rate(const char* norm, RateBand band, const std::vector<double> ConvergenceTable::*column)
{
    Outcome o;
    const SphereRuns& runs = sphere_runs();
    for (const auto& [name, table] : runs.tables) {
        const double rate = (table.*column).back();
        o.require(band.contains(rate), fmt::format("{} {} EOC {:.4f} outside {}", name, norm, rate, band_text(band)));
        o.detail += o.pass ? fmt::format("{}{} {:.4f}", o.detail.empty() ? "" : ", ", name, rate) : "";
    }
    o.require(runs.seconds < 60.0, fmt::format("runtime {:.1f} s", runs.seconds));
    o.detail += fmt::format(" ({:.2f} s)", runs.seconds);
    return o;
}

Outcome criterion_torus()
{
    Outcome o;
    const Surface torus = Surface::torus(2.0, 0.5);
    const auto start = Clock::now();
    const ConvergenceTable t = convergence_study(torus, *find_case(torus, "angular-trig"), 1, 4);
    const double secs = seconds_since(start);
    const double l2 = t.eoc_L2.back();
    const double h1 = t.eoc_H1.back();
    const double linf = t.eoc_Linf.back();
    o.require(kBandL2.contains(l2), fmt::format("L2 EOC {:.4f}", l2));
    o.require(kBandH1.contains(h1), fmt::format("H1 EOC {:.4f}", h1));
    o.require(kBandLinf.contains(linf), fmt::format("Linf EOC {:.4f}", linf));
    o.require(secs < 90.0, fmt::format("runtime {:.1f} s", secs));
    if (o.pass) {
        o.detail = fmt::format("L2 {:.4f}, H1 {:.4f}, Linf {:.4f} ({:.2f} s)", l2, h1, linf, secs);
    }
    return o;
}

Outcome criterion_geometry()
{
    Outcome o;
    const Surface sphere = Surface::unit_sphere();
    std::vector<double> h;
    std::vector<double> psi;
    std::vector<double> area_err;
    TriMesh mesh = make_mesh(sphere, 1);
    for (int k = 1; k <= 5; ++k) {
        const MeshQuality q = quality(mesh);
        h.push_back(q.h);
        psi.push_back(q.max_graph_height);
        area_err.push_back(std::abs(mesh.area() - 4.0 * std::numbers::pi));
        if (k < 5) {
            mesh = refine(mesh);
        }
    }
    const RateBand band{1.8, 2.2};
    std::string psi_rates;
    std::string area_rates;
    for (std::size_t i = 0; i + 1 < h.size(); ++i) {
        const double rp = eoc(psi[i], psi[i + 1], h[i], h[i + 1]);
        const double ra = eoc(area_err[i], area_err[i + 1], h[i], h[i + 1]);
        o.require(band.contains(rp), fmt::format("graph height EOC {:.4f} at levels {}-{}", rp, i + 1, i + 2));
        o.require(band.contains(ra), fmt::format("area EOC {:.4f} at levels {}-{}", ra, i + 1, i + 2));
        psi_rates += fmt::format("{}{:.3f}", i ? " " : "", rp);
        area_rates += fmt::format("{}{:.3f}", i ? " " : "", ra);
    }
    if (o.pass) {
        o.detail = fmt::format("graph height EOC {}; area EOC {}", psi_rates, area_rates);
    }
    return o;
}

Outcome criterion_interpolation()
{
    Outcome o;
    const Surface s = Surface::unit_sphere();
    const RateBand second{1.8, 2.2};
    for (const char* name : {"linear-harmonic", "quadratic-harmonic"}) {
        const ConvergenceTable t = interpolation_convergence(s, *find_case(s, name), 2, 5);
        const double l2 = t.eoc_L2.back();
        const double h1 = t.eoc_H1.back();
        const double linf = t.eoc_Linf.back();
        o.require(second.contains(l2), fmt::format("{} L2 EOC {:.4f}", name, l2));
        o.require(kBandH1.contains(h1), fmt::format("{} H1 EOC {:.4f}", name, h1));
        o.require(second.contains(linf), fmt::format("{} Linf EOC {:.4f}", name, linf));
        if (o.pass) {
            o.detail += fmt::format("{}{} L2 {:.3f} H1 {:.3f} Linf {:.3f}", o.detail.empty() ? "" : ", ", name, l2, h1,
                                    linf);
        }
    }
    return o;
}

Outcome criterion_constant()
{
    Outcome o;
    double worst = 0.0;
    for (const Surface& s : testing::sample_surfaces()) {
        const auto c = *find_case(s, "constant");
        for (int level = 0; level <= 5; ++level) {
            const auto mesh = std::make_shared<const TriMesh>(make_mesh(s, level));
            const ErrorRecord e = error_norms(solve_case(mesh, c));
            worst = std::max({worst, e.err_L2, e.err_H1, e.err_Linf});
            o.require(e.err_L2 <= 1e-8 && e.err_H1 <= 1e-8 && e.err_Linf <= 1e-8,
                      fmt::format("{} level {}: errors {:.3e} {:.3e} {:.3e}", s.name(), level, e.err_L2, e.err_H1,
                                  e.err_Linf));
        }
    }
    if (o.pass) {
        o.detail = fmt::format("largest error {:.3e} over sphere/torus/ellipsoid levels 0-5", worst);
    }
    return o;
}

Outcome criterion_element_oracles()
{
    Outcome o;
    // Reference right triangle.
    const ElementMatrices right = element_matrices(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0));
    Eigen::Matrix3d K;
    K << 2, -1, -1, -1, 1, 0, -1, 0, 1;
    K *= 0.5;
    Eigen::Matrix3d pattern;
    pattern << 2, 1, 1, 1, 2, 1, 1, 1, 2;
    const double e1 = (right.stiffness - K).cwiseAbs().maxCoeff();
    const double e2 = (right.mass - pattern / 24.0).cwiseAbs().maxCoeff();
    // Equilateral triangle of side 1, cotangent formula.
    const ElementMatrices eq = element_matrices(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2, 0));
    Eigen::Matrix3d Keq;
    Keq.setConstant(-0.5 / std::sqrt(3.0));
    Keq.diagonal().setConstant(1.0 / std::sqrt(3.0));
    const double e3 = (eq.stiffness - Keq).cwiseAbs().maxCoeff();
    const double e4 = (eq.mass - std::sqrt(3.0) / 48.0 * pattern).cwiseAbs().maxCoeff();
    const double element_err = std::max({e1, e2, e3, e4});
    o.require(element_err <= 1e-13, fmt::format("element matrices off by {:.3e}", element_err));

    double row_err = 0.0;
    double area_err = 0.0;
    for (const Surface& s : testing::sample_surfaces()) {
        for (int level = 0; level <= 4; ++level) {
            const TriMesh mesh = make_mesh(s, level);
            const SparseSymMatrix A = assemble_system(mesh);
            const SparseSymMatrix M = assemble_mass(mesh);
            const std::vector<double> ones(mesh.n_vertices(), 1.0);
            const auto a1 = A.multiply(ones);
            const auto m1 = M.multiply(ones);
            for (std::size_t i = 0; i < ones.size(); ++i) {
                row_err = std::max(row_err, std::abs(a1[i] - m1[i]));
            }
            area_err = std::max(area_err, std::abs(dot(ones, m1) - mesh.area()));
        }
    }
    o.require(row_err <= 1e-12, fmt::format("A1 - M1 = {:.3e}", row_err));
    o.require(area_err <= 1e-12, fmt::format("1'M1 - area = {:.3e}", area_err));
    if (o.pass) {
        o.detail = fmt::format("element {:.1e}, |A1-M1| {:.1e}, |1'M1-area| {:.1e}", element_err, row_err, area_err);
    }
    return o;
}

Outcome criterion_green()
{
    Outcome o;
    const auto start = Clock::now();
    const Surface s = Surface::unit_sphere();
    const Vec3 z0(0, 0, 1);
    const GreenStudy study = green_self_convergence(s, z0, 2, 5, DeltaMode::NodalEvaluation);

    double mass_err = 0.0;
    for (const auto& row : study.rows) {
        mass_err = std::max(mass_err, std::abs(row.total_mass - 1.0));
    }
    // Moment-matched sources at an off-vertex point carry unit mass too.
    const Vec3 off = Vec3(0.3, 0.2, 0.9).normalized();
    for (int level = 2; level <= 5; ++level) {
        const auto mesh = std::make_shared<const TriMesh>(make_mesh(s, level));
        const FemSolution g = discrete_green(mesh, off, DeltaMode::MomentMatched);
        mass_err = std::max(mass_err, std::abs(integral(*mesh, g.coefficients) - 1.0));
    }
    o.require(mass_err <= 1e-8, fmt::format("|integral g_h - 1| = {:.3e}", mass_err));

    double sym_err = 0.0;
    const auto mesh = std::make_shared<const TriMesh>(make_mesh(s, 4));
    auto rng = testing::make_rng();
    std::uniform_int_distribution<Index> pick(0, static_cast<Index>(mesh->n_vertices() - 1));
    for (int k = 0; k < 5; ++k) {
        const Index i = pick(rng);
        const Index j = pick(rng);
        const auto gi = discrete_green(mesh, mesh->vertex(i), DeltaMode::NodalEvaluation);
        const auto gj = discrete_green(mesh, mesh->vertex(j), DeltaMode::NodalEvaluation);
        sym_err = std::max(sym_err, std::abs(gi.coefficients[j] - gj.coefficients[i]));
    }
    o.require(sym_err <= 1e-8, fmt::format("symmetry defect {:.3e}", sym_err));

    std::string rates;
    for (const auto& row : study.rows) {
        if (row.eoc_w11) {
            rates += fmt::format("{}{:.4f}", rates.empty() ? "" : " ", *row.eoc_w11);
        }
    }
    o.require(study.rates_within(kGreenRateLo, kGreenRateHi),
              fmt::format("W11 EOC {} outside [{}, {}]", rates, kGreenRateLo, kGreenRateHi));
    const double secs = seconds_since(start);
    o.require(secs < 60.0, fmt::format("runtime {:.1f} s", secs));
    if (o.pass) {
        o.detail = fmt::format("mass {:.1e}, symmetry {:.1e}, W11 EOC {} ({:.2f} s)", mass_err, sym_err, rates, secs);
    }
    return o;
}

Outcome criterion_quasi_optimality()
{
    Outcome o;
    const Surface s = Surface::unit_sphere();
    double worst = 0.0;
    for (const auto& [name, table] : sphere_runs().tables) {
        const ConvergenceTable interp = interpolation_convergence(s, *find_case(s, name), 2, 5);
        for (std::size_t k = 0; k < table.records.size(); ++k) {
            const double ratio = table.records[k].err_H1 / interp.records[k].err_H1;
            worst = std::max(worst, ratio);
            o.require(ratio <= 5.0, fmt::format("{} level {} ratio {:.3f}", name, table.records[k].level, ratio));
        }
    }
    if (o.pass) {
        o.detail = fmt::format("largest H1 solver/interpolation ratio {:.4f}", worst);
    }
    return o;
}

Outcome criterion_properties()
{
    Outcome o;
    auto rng = testing::make_rng();

    double proj_err = 0.0;
    double normal_err = 0.0;
    for (const Surface& s : testing::sample_surfaces()) {
        for (int i = 0; i < 200; ++i) {
            const Vec3 p = testing::random_tubular_point(s, rng);
            const Vec3 y = s.project(p);
            proj_err = std::max(proj_err, (s.project(y) - y).norm());
            normal_err = std::max(normal_err, (p - y).cross(s.normal(y)).norm());
        }
    }
    o.require(proj_err <= 1e-10, fmt::format("idempotence defect {:.3e}", proj_err));
    o.require(normal_err <= 1e-10, fmt::format("normality defect {:.3e}", normal_err));

    double oracle_err = 0.0;
    for (const Surface& s : testing::sample_surfaces()) {
        for (const ManufacturedCase& c : manufactured_cases(s)) {
            for (int i = 0; i < 20; ++i) {
                const Vec3 p = s.project(testing::random_surface_point(s, rng));
                const double expected = c.u(p) - c.f(p);
                const double fd = testing::fd_laplace_beltrami(s, c.u, p, 1e-4);
                oracle_err = std::max(oracle_err, std::abs(fd - expected) / std::max(1.0, std::abs(expected)));
            }
        }
    }
    o.require(oracle_err <= 1e-5, fmt::format("manufactured oracle defect {:.3e}", oracle_err));

    bool topology = true;
    const std::pair<Surface, int> families[] = {
        {Surface::unit_sphere(), 6}, {Surface::torus(2.0, 0.5), 5}, {Surface::ellipsoid(1.0, 0.8, 0.6), 5}};
    for (const auto& [s, top] : families) {
        TriMesh mesh = base_mesh(s);
        for (int k = 0; k <= top; ++k) {
            const TopologyReport r = check_topology(s, mesh.vertices(), mesh.faces());
            const bool ok = r.closed_manifold && r.consistently_oriented && r.outward &&
                            r.euler_characteristic == s.euler_characteristic();
            o.require(ok, fmt::format("{} level {} topology", s.name(), k));
            topology = topology && ok;
            if (k < top) {
                mesh = refine(mesh);
            }
        }
    }

    double energy_err = 0.0;
    for (const Surface& s : testing::sample_surfaces()) {
        const auto mesh = std::make_shared<const TriMesh>(make_mesh(s, 4));
        const ManufacturedCase c = manufactured_cases(s).back();
        const FemSolution sol = solve_case(mesh, c);
        const auto Ax = assemble_system(*mesh).multiply(sol.coefficients);
        const auto b = assemble_load(*mesh, c);
        const double work = dot(b, sol.coefficients);
        energy_err = std::max(energy_err, std::abs(dot(sol.coefficients, Ax) - work) / std::abs(work));
    }
    o.require(energy_err <= 1e-8, fmt::format("energy identity defect {:.3e}", energy_err));

    const std::vector<std::string> args{"convergence", "--surface", "torus", "--levels", "1..3"};
    std::ostringstream first;
    std::ostringstream second;
    std::ostringstream sink;
    cli::run(args, first, sink);
    cli::run(args, second, sink);
    const bool deterministic = !first.str().empty() && first.str() == second.str();
    o.require(deterministic, "CSV output differs between identical runs");

    if (o.pass) {
        o.detail = fmt::format("projection {:.1e}/{:.1e}, oracle {:.1e}, topology ok, energy {:.1e}, CSV identical",
                               proj_err, normal_err, oracle_err, energy_err);
    }
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"H1 rate, sphere levels 2-5",
         [] { return sphere_rate("H1", kBandH1, &ConvergenceTable::eoc_H1); }},
        {"L2 rate, sphere levels 2-5",
         [] { return sphere_rate("L2", kBandL2, &ConvergenceTable::eoc_L2); }},
        {"Linf rate, sphere levels 2-5",
         [] { return sphere_rate("Linf", kBandLinf, &ConvergenceTable::eoc_Linf); }},
        {"torus rates, levels 1-4", criterion_torus},
        {"graph height and area, sphere levels 1-5", criterion_geometry},
        {"interpolation rates, sphere levels 2-5", criterion_interpolation},
        {"constant solution reproduced", criterion_constant},
        {"element and assembly oracles", criterion_element_oracles},
        {"Green's function study", criterion_green},
        {"quasi-optimality in H1", criterion_quasi_optimality},
        {"property suites", criterion_properties},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = fmt::format("exception: {}", e.what());
        }
        fmt::print("{} {:>2}. {}: {}\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, outcome.detail);
        failures += outcome.pass ? 0 : 1;
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
