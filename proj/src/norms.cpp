#include "sfem/norms.hpp"

#include "sfem/assembly.hpp"
#include "sfem/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sfem {

ErrorRecord lifted_error(const TriMesh& mesh, std::span<const double> nodal, const ScalarField& u,
                         const VectorField& grad_u, const QuadratureRule& rule)
{
    if (nodal.size() != mesh.n_vertices()) {
        throw DomainError(fmt::format("{} nodal values for {} vertices", nodal.size(), mesh.n_vertices()));
    }
    const Surface& surface = mesh.surface();
    double l2_sq = 0.0;
    double grad_sq = 0.0;
    double linf = 0.0;

    for (std::size_t t = 0; t < mesh.n_faces(); ++t) {
        const auto [p0, p1, p2] = mesh.corners(t);
        const Face& face = mesh.face(t);
        const auto grads = hat_gradients(p0, p1, p2);
        const double area = triangle_area(p0, p1, p2);
        const Vec3 n_h = (p1 - p0).cross(p2 - p0).normalized();
        const double v0 = nodal[face[0]];
        const double v1 = nodal[face[1]];
        const double v2 = nodal[face[2]];
        const Vec3 grad_h = v0 * grads[0] + v1 * grads[1] + v2 * grads[2];

        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& lambda = rule.points[q];
            const Vec3 x = lambda[0] * p0 + lambda[1] * p1 + lambda[2] * p2;
            const Vec3 y = surface.project(x);
            const double diff = u(y) - (lambda[0] * v0 + lambda[1] * v1 + lambda[2] * v2);
            Vec3 g = grad_u(y);
            g -= g.dot(n_h) * n_h;
            const double w = rule.weights[q] * area;
            l2_sq += w * diff * diff;
            grad_sq += w * (g - grad_h).squaredNorm();
            linf = std::max(linf, std::abs(diff));
        }
        for (int i = 0; i < 3; ++i) {
            linf = std::max(linf, std::abs(u(mesh.vertex(face[i])) - nodal[face[i]]));
        }
    }

    ErrorRecord rec;
    rec.level = mesh.level();
    rec.n_dofs = mesh.n_vertices();
    rec.err_L2 = std::sqrt(l2_sq);
    rec.err_H1 = std::sqrt(l2_sq + grad_sq);
    rec.err_Linf = linf;
    return rec;
}

ErrorRecord error_norms(const FemSolution& solution, const QuadratureRule& rule)
{
    if (!solution.source) {
        throw DomainError("solution carries no manufactured case to compare against");
    }
    ErrorRecord rec = lifted_error(*solution.mesh, solution.coefficients, solution.source->u,
                                   solution.source->grad_u, rule);
    rec.h = quality(*solution.mesh).h;
    return rec;
}

std::vector<double> interpolate(const TriMesh& mesh, const ScalarField& u)
{
    std::vector<double> values;
    values.reserve(mesh.n_vertices());
    for (const Vec3& v : mesh.vertices()) {
        values.push_back(u(v));
    }
    return values;
}

ErrorRecord interpolation_error_study(const TriMesh& mesh, const ManufacturedCase& c, const QuadratureRule& rule)
{
    const std::vector<double> nodal = interpolate(mesh, c.u);
    ErrorRecord rec = lifted_error(mesh, nodal, c.u, c.grad_u, rule);
    rec.h = quality(mesh).h;
    return rec;
}

double eoc(double e_coarse, double e_fine, double h_coarse, double h_fine)
{
    if (!(e_coarse > 0.0 && e_fine > 0.0 && h_coarse > 0.0 && h_fine > 0.0)) {
        throw DomainError(fmt::format("eoc needs positive inputs, got e=({}, {}) h=({}, {})", e_coarse, e_fine,
                                      h_coarse, h_fine));
    }
    if (h_coarse == h_fine) {
        throw DomainError("eoc needs two distinct mesh sizes");
    }
    return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

namespace {

// Rate between two records; NaN when an error vanished and no rate is defined.
double pair_rate(double e_coarse, double e_fine, double h_coarse, double h_fine)
{
    if (!(e_coarse > 0.0 && e_fine > 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return eoc(e_coarse, e_fine, h_coarse, h_fine);
}

} // namespace

ConvergenceTable ConvergenceTable::from_records(std::vector<ErrorRecord> records)
{
    ConvergenceTable table;
    table.records = std::move(records);
    for (std::size_t k = 1; k < table.records.size(); ++k) {
        const ErrorRecord& c = table.records[k - 1];
        const ErrorRecord& f = table.records[k];
        table.eoc_L2.push_back(pair_rate(c.err_L2, f.err_L2, c.h, f.h));
        table.eoc_H1.push_back(pair_rate(c.err_H1, f.err_H1, c.h, f.h));
        table.eoc_Linf.push_back(pair_rate(c.err_Linf, f.err_Linf, c.h, f.h));
    }
    return table;
}

bool finest_pair_within(const ConvergenceTable& table, RateBand l2, RateBand h1, RateBand linf)
{
    if (table.eoc_L2.empty()) {
        return true;
    }
    return l2.contains(table.eoc_L2.back()) && h1.contains(table.eoc_H1.back())
           && linf.contains(table.eoc_Linf.back());
}

} // namespace sfem
