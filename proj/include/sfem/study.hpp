#pragma once

#include "sfem/geometry.hpp"
#include "sfem/mesh.hpp"
#include "sfem/norms.hpp"

#include <memory>
#include <vector>

namespace sfem {

/// Nested meshes for levels min_level..max_level.
std::vector<std::shared_ptr<const TriMesh>> mesh_hierarchy(const Surface& surface, int min_level, int max_level);

/// refine -> solve_case -> error_norms over the levels. With `parallel` the levels are solved concurrently.
ConvergenceTable convergence_study(const Surface& surface, const ManufacturedCase& c, int min_level, int max_level,
                                   double tol = kDefaultSolverTolerance, bool parallel = false);

/// Same table for the nodal interpolant instead of the Galerkin solution.
ConvergenceTable interpolation_convergence(const Surface& surface, const ManufacturedCase& c, int min_level,
                                           int max_level);

} // namespace sfem
