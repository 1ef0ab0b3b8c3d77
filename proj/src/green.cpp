#include "sfem/green.hpp"

#include "sfem/assembly.hpp"
#include "sfem/errors.hpp"
#include "sfem/norms.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>

#include <cmath>
#include <future>
#include <limits>

namespace sfem {

namespace {

constexpr double kInsideSlack = 1e-12;

} // namespace

LiftedPoint locate(const TriMesh& mesh, const Vec3& z0)
{
    const Surface& surface = mesh.surface();
    const Vec3 y = surface.project(z0);
    const Vec3 n = surface.normal(y);

    LiftedPoint best;
    double best_offset = std::numeric_limits<double>::infinity();
    double best_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < mesh.n_faces(); ++t) {
        const auto [p0, p1, p2] = mesh.corners(t);
        const Vec3 cross = (p1 - p0).cross(p2 - p0);
        const double twice_area = cross.norm();
        const Vec3 n_h = cross / twice_area;
        const double cosine = n.dot(n_h);
        if (cosine <= 0.0) {
            continue;
        }
        // Intersection of the normal line y + s n with the plane of the triangle.
        const double s = (p0 - y).dot(n_h) / cosine;
        const Vec3 x = y + s * n;
        const std::array<Vec3, 3> p{p0, p1, p2};
        std::array<double, 3> lambda{};
        for (int i = 0; i < 3; ++i) {
            lambda[i] = (p[(i + 1) % 3] - x).cross(p[(i + 2) % 3] - x).dot(n_h) / twice_area;
        }
        const double margin = std::min({lambda[0], lambda[1], lambda[2]});
        if (margin < -kInsideSlack) {
            continue;
        }
        // Prefer the nearest plane; among ties (edges, vertices) the most interior hit.
        const bool nearer = std::abs(s) < best_offset - 1e-14;
        const bool tie = std::abs(std::abs(s) - best_offset) <= 1e-14;
        if (nearer || (tie && margin > best_margin)) {
            best = {t, x, lambda};
            best_offset = std::abs(s);
            best_margin = margin;
        }
    }
    if (!std::isfinite(best_offset)) {
        throw OutOfTubularNeighborhood(
            fmt::format("no triangle of the mesh lies over ({}, {}, {})", z0.x(), z0.y(), z0.z()));
    }
    return best;
}

DeltaSource delta_source(const TriMesh& mesh, const Vec3& z0, DeltaMode mode)
{
    DeltaSource src;
    src.mode = mode;
    src.lifted = locate(mesh, z0);
    const Vec3 y = mesh.surface().project(z0);

    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mesh.n_vertices(); ++i) {
        const double d = (mesh.vertex(static_cast<Index>(i)) - y).squaredNorm();
        if (d < nearest) {
            nearest = d;
            src.anchor_vertex = static_cast<Index>(i);
        }
    }

    src.load.assign(mesh.n_vertices(), 0.0);
    if (mode == DeltaMode::NodalEvaluation) {
        src.load[src.anchor_vertex] = 1.0;
        return src;
    }

    // Moment system: sum_a q_a M_ab = P_b(lifted point) = lambda_b.
    const auto [p0, p1, p2] = mesh.corners(src.lifted.triangle);
    const Eigen::Matrix3d mass = element_matrices(p0, p1, p2).mass;
    const Eigen::Vector3d lambda(src.lifted.barycentric[0], src.lifted.barycentric[1], src.lifted.barycentric[2]);
    const Eigen::Vector3d q = mass.partialPivLu().solve(lambda);
    const Eigen::Vector3d b = mass * q;
    const Face& face = mesh.face(src.lifted.triangle);
    for (int i = 0; i < 3; ++i) {
        src.density[i] = q[i];
        src.load[face[i]] += b[i];
    }
    return src;
}

FemSolution discrete_green(std::shared_ptr<const TriMesh> mesh, const Vec3& z0, DeltaMode mode, double tol)
{
    const std::vector<double> b = delta_load(*mesh, z0, mode);
    const SparseSymMatrix A = assemble_system(*mesh);
    SolveResult r = solve(A, b, tol, default_max_iterations(mesh->n_vertices()));
    return {std::move(r.x), std::move(mesh), std::nullopt, r.residual_norm, r.iterations};
}

double integral(const TriMesh& mesh, std::span<const double> nodal)
{
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.n_faces(); ++t) {
        const auto [a, b, c] = mesh.corners(t);
        const Face& f = mesh.face(t);
        total += triangle_area(a, b, c) * (nodal[f[0]] + nodal[f[1]] + nodal[f[2]]) / 3.0;
    }
    return total;
}

double w11_distance(const TriMesh& mesh, std::span<const double> a, std::span<const double> b,
                    const QuadratureRule& rule)
{
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.n_faces(); ++t) {
        const auto [p0, p1, p2] = mesh.corners(t);
        const Face& f = mesh.face(t);
        const std::array<double, 3> d{a[f[0]] - b[f[0]], a[f[1]] - b[f[1]], a[f[2]] - b[f[2]]};
        const auto grads = hat_gradients(p0, p1, p2);
        const double area = triangle_area(p0, p1, p2);
        double value = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& l = rule.points[q];
            value += rule.weights[q] * std::abs(l[0] * d[0] + l[1] * d[1] + l[2] * d[2]);
        }
        const Vec3 grad = d[0] * grads[0] + d[1] * grads[1] + d[2] * grads[2];
        total += area * (value + grad.norm());
    }
    return total;
}

double l2_distance(const TriMesh& mesh, std::span<const double> a, std::span<const double> b,
                   const QuadratureRule& rule)
{
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.n_faces(); ++t) {
        const auto [p0, p1, p2] = mesh.corners(t);
        const Face& f = mesh.face(t);
        const std::array<double, 3> d{a[f[0]] - b[f[0]], a[f[1]] - b[f[1]], a[f[2]] - b[f[2]]};
        double value = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& l = rule.points[q];
            const double v = l[0] * d[0] + l[1] * d[1] + l[2] * d[2];
            value += rule.weights[q] * v * v;
        }
        total += triangle_area(p0, p1, p2) * value;
    }
    return std::sqrt(total);
}

bool GreenStudy::rates_within(double lo, double hi) const
{
    for (const auto& row : rows) {
        if (row.eoc_w11 && !(*row.eoc_w11 >= lo && *row.eoc_w11 <= hi)) {
            return false;
        }
    }
    return true;
}

GreenStudy green_self_convergence(const Surface& surface, const Vec3& z0, int min_level, int max_level,
                                  DeltaMode mode, double tol, bool parallel)
{
    if (min_level < 0 || max_level - min_level < 2) {
        throw DomainError(fmt::format("Green study needs at least three levels, got {}..{}", min_level, max_level));
    }
    std::vector<std::shared_ptr<const TriMesh>> meshes;
    auto mesh = std::make_shared<const TriMesh>(make_mesh(surface, min_level));
    for (int k = min_level; k <= max_level; ++k) {
        if (k > min_level) {
            mesh = std::make_shared<const TriMesh>(refine(*mesh));
        }
        meshes.push_back(mesh);
    }

    std::vector<FemSolution> solutions;
    if (parallel) {
        std::vector<std::future<FemSolution>> pending;
        for (const auto& m : meshes) {
            pending.push_back(std::async(std::launch::async, [m, &z0, mode, tol] { return discrete_green(m, z0, mode, tol); }));
        }
        for (auto& p : pending) {
            solutions.push_back(p.get());
        }
    } else {
        for (const auto& m : meshes) {
            solutions.push_back(discrete_green(m, z0, mode, tol));
        }
    }

    GreenStudy study;
    for (std::size_t k = 0; k < meshes.size(); ++k) {
        const TriMesh& m = *meshes[k];
        const auto& g = solutions[k].coefficients;
        GreenStudyRow row;
        row.level = m.level();
        row.h = quality(m).h;
        row.peak = g[delta_source(m, z0, mode).anchor_vertex];
        row.total_mass = integral(m, g);
        if (k > 0) {
            const std::vector<double> coarse = prolongate(*meshes[k - 1], solutions[k - 1].coefficients);
            row.w11_diff = w11_distance(m, g, coarse);
            if (k > 1) {
                const auto& prev = study.rows.back();
                row.eoc_w11 = eoc(*prev.w11_diff, *row.w11_diff, prev.h, row.h);
            }
        }
        study.rows.push_back(row);
    }
    return study;
}

} // namespace sfem
