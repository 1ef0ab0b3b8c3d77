#pragma once

#include "sfem/geometry.hpp"
#include "sfem/mesh.hpp"
#include "sfem/quadrature.hpp"
#include "sfem/sparse.hpp"

#include <Eigen/Core>

#include <vector>

namespace sfem {

struct ElementMatrices {
    /// K_ab = integral of <grad P_a, grad P_b> over the triangle.
    Eigen::Matrix3d stiffness;
    /// M_ab = integral of P_a P_b over the triangle.
    Eigen::Matrix3d mass;
    double area = 0.0;
};

///
/// Exact P1 stiffness and mass matrices of a flat triangle in R^3.
///
/// Hat-function gradients are formed in an orthonormal in-plane frame spanned by the
/// first edge and the orthogonalized second edge. Throws DegenerateTriangle when the
/// area is <= 1e-14.
///
ElementMatrices element_matrices(const Vec3& a, const Vec3& b, const Vec3& c);

/// Gradients (in R^3, tangent to the triangle) of the three barycentric coordinates.
std::array<Vec3, 3> hat_gradients(const Vec3& a, const Vec3& b, const Vec3& c);

/// Sparsity pattern of P1 on the mesh (vertex adjacency plus diagonal), all values zero.
SparseSymMatrix p1_pattern(const TriMesh& mesh);

/// Global matrix of stiffness_weight * K + mass_weight * M.
SparseSymMatrix assemble(const TriMesh& mesh, double stiffness_weight, double mass_weight);

/// Matrix of a_h(u, v) = integral over S_h of <Du, Dv> + u v restricted to V_h.
inline SparseSymMatrix assemble_system(const TriMesh& mesh)
{
    return assemble(mesh, 1.0, 1.0);
}

inline SparseSymMatrix assemble_mass(const TriMesh& mesh)
{
    return assemble(mesh, 0.0, 1.0);
}

/// Element load integral of f P_i over the flat triangle (a, b, c), f evaluated on the triangle itself.
Eigen::Vector3d element_load(const Vec3& a, const Vec3& b, const Vec3& c, const ScalarField& f,
                             const QuadratureRule& rule = quadrature::edge_midpoints());

///
/// Load vector b_i = integral over S_h of f_h P_i, with f_h = f o project.
///
/// Each triangle contributes sum_q w_q area f(project(x_q)) P_i(x_q).
///
std::vector<double> assemble_load(const TriMesh& mesh, const ScalarField& f,
                                  const QuadratureRule& rule = quadrature::edge_midpoints());

inline std::vector<double> assemble_load(const TriMesh& mesh, const ManufacturedCase& c,
                                         const QuadratureRule& rule = quadrature::edge_midpoints())
{
    return assemble_load(mesh, c.f, rule);
}

} // namespace sfem
