#pragma once

#include "sfem/geometry.hpp"
#include "sfem/mesh.hpp"
#include "sfem/sparse.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace sfem {

struct SolveResult {
    std::vector<double> x;
    /// True residual ||b - A x||_2, recomputed after the last iteration.
    double residual_norm = 0.0;
    int iterations = 0;
    /// sqrt(r^T D^{-1} r) before each iteration and after the last one.
    std::vector<double> preconditioned_residuals;
};

/// Called with the iterate and the recursive residual after every CG step.
using IterationObserver = std::function<void(int iteration, std::span<const double> x, std::span<const double> r)>;

///
/// Jacobi-preconditioned conjugate gradients from x = 0.
///
/// Iterates until the recursively updated residual satisfies ||r|| <= tol ||b||, then checks
/// the true residual. If that misses the tolerance, CG restarts from b - Ax with the
/// remaining budget. Throws NoConvergence when max_iter runs out first.
///
SolveResult solve(const SparseSymMatrix& A, std::span<const double> b, double tol, int max_iter,
                  const IterationObserver& observer = {});

/// Discrete solution u_h in V_h on a particular mesh.
struct FemSolution {
    /// Nodal values, one per mesh vertex.
    std::vector<double> coefficients;
    std::shared_ptr<const TriMesh> mesh;
    /// Source problem, absent for Green's functions.
    std::optional<ManufacturedCase> source;
    double residual_norm = 0.0;
    int iterations = 0;
};

constexpr double kDefaultSolverTolerance = 1e-10;

/// Iteration budget 20 sqrt(n) used by solve_case.
int default_max_iterations(std::size_t n);

/// Assembles a_h and the load of `source` on `mesh` and solves to `tol`.
FemSolution solve_case(std::shared_ptr<const TriMesh> mesh, const ManufacturedCase& source,
                       double tol = kDefaultSolverTolerance);

} // namespace sfem
