#pragma once

#include <array>
#include <vector>

namespace sfem {

///
/// Symmetric quadrature rule on a triangle in barycentric coordinates.
/// Weights sum to 1 and are multiplied by the triangle area when applied.
///
struct QuadratureRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    /// Highest total polynomial degree integrated exactly.
    int degree = 0;

    [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
};

namespace quadrature {

/// Single point at the barycenter, degree 1.
const QuadratureRule& centroid();
/// Three edge midpoints, degree 2. Used for load assembly.
const QuadratureRule& edge_midpoints();
/// Six-point rule of degree 4. Used for error norms.
const QuadratureRule& six_point();
/// Twelve-point rule of degree 6.
const QuadratureRule& twelve_point();

/// Cheapest rule of at least the requested degree (1, 2, 4 or 6); throws DomainError above 6.
const QuadratureRule& of_degree(int degree);

} // namespace quadrature

} // namespace sfem
