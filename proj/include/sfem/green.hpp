#pragma once

#include "sfem/geometry.hpp"
#include "sfem/mesh.hpp"
#include "sfem/quadrature.hpp"
#include "sfem/solver.hpp"

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace sfem {

enum class DeltaMode {
    /// Unit load at the vertex nearest to z0: a_h(g_h, v) = v(z~0).
    NodalEvaluation,
    /// Linear density q on the triangle holding the lift of z0 with
    /// integral of q p over the triangle = p(lifted z0) for every linear p.
    MomentMatched,
};

/// Position of a surface point on S_h: the triangle crossed by the normal line through it.
struct LiftedPoint {
    std::size_t triangle = 0;
    Vec3 point;
    std::array<double, 3> barycentric{};
};

/// Throws OutOfTubularNeighborhood when z0 is too far from the surface.
LiftedPoint locate(const TriMesh& mesh, const Vec3& z0);

struct DeltaSource {
    /// Vertex of S_h nearest to z0.
    Index anchor_vertex = 0;
    DeltaMode mode = DeltaMode::NodalEvaluation;
    LiftedPoint lifted;
    /// Nodal values of the moment-matched density on lifted.triangle (zero for nodal mode).
    std::array<double, 3> density{};
    /// Right-hand side over V_h.
    std::vector<double> load;
};

DeltaSource delta_source(const TriMesh& mesh, const Vec3& z0, DeltaMode mode);

inline std::vector<double> delta_load(const TriMesh& mesh, const Vec3& z0, DeltaMode mode)
{
    return delta_source(mesh, z0, mode).load;
}

/// Solves a_h(g_h, v_h) = <delta, v_h> for all v_h in V_h.
FemSolution discrete_green(std::shared_ptr<const TriMesh> mesh, const Vec3& z0, DeltaMode mode,
                           double tol = kDefaultSolverTolerance);

/// Integral over S_h of the P1 function with the given nodal values.
double integral(const TriMesh& mesh, std::span<const double> nodal);

/// W^{1,1}(S_h) norm of the difference of two P1 functions.
double w11_distance(const TriMesh& mesh, std::span<const double> a, std::span<const double> b,
                    const QuadratureRule& rule = quadrature::six_point());

/// L2(S_h) norm of the difference of two P1 functions.
double l2_distance(const TriMesh& mesh, std::span<const double> a, std::span<const double> b,
                   const QuadratureRule& rule = quadrature::six_point());

struct GreenStudyRow {
    int level = 0;
    double h = 0.0;
    /// W^{1,1} distance to the previous level's solution, prolongated; empty on the first row.
    std::optional<double> w11_diff;
    /// Rate between this and the previous w11_diff; empty on the first two rows.
    std::optional<double> eoc_w11;
    /// Value at the anchor vertex.
    double peak = 0.0;
    /// Integral of g_h over S_h.
    double total_mass = 0.0;
};

struct GreenStudy {
    std::vector<GreenStudyRow> rows;
    /// Every pairwise W^{1,1} rate lies in the band (vacuously true without rates).
    [[nodiscard]] bool rates_within(double lo, double hi) const;
};

inline constexpr double kGreenRateLo = 0.7;
inline constexpr double kGreenRateHi = 1.3;

///
/// Self-convergence of discrete Green's functions on nested meshes min_level..max_level.
///
/// The solution on level k-1 is transferred to level k through the subdivision nesting
/// and compared in W^{1,1}(S_h). Needs at least three levels.
///
GreenStudy green_self_convergence(const Surface& surface, const Vec3& z0, int min_level, int max_level,
                                  DeltaMode mode, double tol = kDefaultSolverTolerance, bool parallel = false);

} // namespace sfem
