#pragma once

#include "sfem/geometry.hpp"
#include "sfem/mesh.hpp"
#include "sfem/quadrature.hpp"
#include "sfem/solver.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace sfem {

struct ErrorRecord {
    int level = 0;
    double h = 0.0;
    double err_L2 = 0.0;
    /// Full H1 norm, L2 part included.
    double err_H1 = 0.0;
    double err_Linf = 0.0;
    std::size_t n_dofs = 0;
};

///
/// Distance between a P1 function on S_h (nodal values `nodal`) and the lift
/// u o project of an exact solution, integrated over S_h with `rule`.
///
/// The exact tangential gradient at project(x) is projected onto each triangle plane.
/// L-infinity is sampled at the quadrature points and the triangle corners. `h` is left
/// at zero; callers fill it from quality().
///
ErrorRecord lifted_error(const TriMesh& mesh, std::span<const double> nodal, const ScalarField& u,
                         const VectorField& grad_u, const QuadratureRule& rule = quadrature::six_point());

/// Error of a discrete solution against its manufactured case.
ErrorRecord error_norms(const FemSolution& solution, const QuadratureRule& rule = quadrature::six_point());

/// Nodal interpolant of the exact solution (vertices lie on S, so no lift is needed).
std::vector<double> interpolate(const TriMesh& mesh, const ScalarField& u);

/// Error of the nodal interpolant, i.e. the best-approximation reference for the solver.
ErrorRecord interpolation_error_study(const TriMesh& mesh, const ManufacturedCase& c,
                                      const QuadratureRule& rule = quadrature::six_point());

/// Experimental order log(e_coarse / e_fine) / log(h_coarse / h_fine). Throws DomainError on nonpositive input.
double eoc(double e_coarse, double e_fine, double h_coarse, double h_fine);

struct ConvergenceTable {
    std::vector<ErrorRecord> records;
    std::vector<double> eoc_L2;
    std::vector<double> eoc_H1;
    std::vector<double> eoc_Linf;

    /// Builds the pairwise EOC columns from ordered records.
    static ConvergenceTable from_records(std::vector<ErrorRecord> records);
};

/// Closed acceptance band [lo, hi] for an observed rate.
struct RateBand {
    double lo;
    double hi;
    [[nodiscard]] bool contains(double rate) const { return rate >= lo && rate <= hi; }
};

inline constexpr RateBand kBandL2{1.8, 2.2};
inline constexpr RateBand kBandH1{0.85, 1.15};
inline constexpr RateBand kBandLinf{1.7, 2.2};

/// True when the finest-pair EOCs are inside the bands, or there is no pair to check.
bool finest_pair_within(const ConvergenceTable& table, RateBand l2, RateBand h1, RateBand linf);

} // namespace sfem
