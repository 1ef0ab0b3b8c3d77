#include "sfem/solver.hpp"

#include "sfem/assembly.hpp"
#include "sfem/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace sfem {

SolveResult solve(const SparseSymMatrix& A, std::span<const double> b, double tol, int max_iter,
                  const IterationObserver& observer)
{
    const std::size_t n = A.size();
    if (b.size() != n) {
        throw DomainError(fmt::format("right-hand side has {} entries, matrix is {}x{}", b.size(), n, n));
    }
    if (!(tol > 0.0 && tol < 1.0)) {
        throw DomainError(fmt::format("solver tolerance must lie in (0, 1), got {}", tol));
    }

    std::vector<double> inv_diag = A.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(inv_diag[i] > 0.0)) {
            throw DomainError(fmt::format("diagonal entry {} is not positive", i));
        }
        inv_diag[i] = 1.0 / inv_diag[i];
    }

    SolveResult result;
    result.x.assign(n, 0.0);
    std::vector<double> r(b.begin(), b.end());
    std::vector<double> z(n);
    std::vector<double> p(n);
    std::vector<double> q(n);

    const double b_norm = norm2(b);
    const double target = tol * b_norm;
    if (b_norm == 0.0) {
        result.preconditioned_residuals.push_back(0.0);
        return result;
    }

    double r_norm = b_norm;
    int it = 0;
    bool first_pass = true;
    for (;;) {
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = inv_diag[i] * r[i];
        }
        p = z;
        double rz = dot(r, z);
        if (first_pass) {
            result.preconditioned_residuals.push_back(std::sqrt(rz));
        }
        first_pass = false;

        while (r_norm > target && it < max_iter) {
            A.multiply(p, q);
            const double alpha = rz / dot(p, q);
            for (std::size_t i = 0; i < n; ++i) {
                result.x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
                z[i] = inv_diag[i] * r[i];
            }
            const double rz_next = dot(r, z);
            const double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t i = 0; i < n; ++i) {
                p[i] = z[i] + beta * p[i];
            }
            r_norm = norm2(r);
            result.preconditioned_residuals.push_back(std::sqrt(rz));
            ++it;
            if (observer) {
                observer(it, result.x, r);
            }
        }

        // The recursive residual drifts from b - Ax in long runs; restart from the true one.
        A.multiply(result.x, q);
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = b[i] - q[i];
        }
        result.residual_norm = norm2(q);
        if (result.residual_norm <= target || it >= max_iter) {
            break;
        }
        r = q;
        r_norm = result.residual_norm;
    }
    result.iterations = it;
    if (result.residual_norm > target) {
        throw NoConvergence(fmt::format("CG stopped after {} iterations with residual {} (target {})", it,
                                        result.residual_norm, target),
                            it, result.residual_norm);
    }
    return result;
}

int default_max_iterations(std::size_t n)
{
    return std::max(1, static_cast<int>(std::ceil(20.0 * std::sqrt(static_cast<double>(n)))));
}

FemSolution solve_case(std::shared_ptr<const TriMesh> mesh, const ManufacturedCase& source, double tol)
{
    const SparseSymMatrix A = assemble_system(*mesh);
    const std::vector<double> b = assemble_load(*mesh, source);
    SolveResult r = solve(A, b, tol, default_max_iterations(mesh->n_vertices()));
    return {std::move(r.x), std::move(mesh), source, r.residual_norm, r.iterations};
}

} // namespace sfem
