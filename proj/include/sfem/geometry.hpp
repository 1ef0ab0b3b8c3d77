#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sfem {

using Vec3 = Eigen::Vector3d;

enum class SurfaceKind { UnitSphere, Torus, Ellipsoid };

/// Result of a closest-point query.
struct ClosestPoint {
    Vec3 point;
    /// Negative inside the enclosed volume, positive outside.
    double signed_distance = 0.0;
};

///
/// An exact smooth closed surface in R^3.
///
/// Supported shapes are the unit sphere, the torus of revolution about the z axis
/// with major radius R and minor radius r, and the axis-aligned ellipsoid with
/// semi-axes (a, b, c). Closest-point queries are answered for signed distances in
/// [-0.9 * inner_reach(), 0.9 * outer_reach()]; outside of that OutOfTubularNeighborhood is thrown.
///
class Surface {
public:
    static Surface unit_sphere();
    /// Requires major > minor > 0.
    static Surface torus(double major, double minor);
    /// Requires a, b, c > 0.
    static Surface ellipsoid(double a, double b, double c);

    [[nodiscard]] SurfaceKind kind() const noexcept { return kind_; }
    /// Shape parameters: {} for the sphere, {R, r} for the torus, {a, b, c} for the ellipsoid.
    [[nodiscard]] const std::vector<double>& params() const noexcept { return params_; }

    /// Distance from the surface to the part of its medial axis inside the enclosed volume.
    [[nodiscard]] double inner_reach() const;
    /// Same for the exterior; infinite for the convex shapes.
    [[nodiscard]] double outer_reach() const;
    /// Distance from the surface to its medial axis.
    [[nodiscard]] double reach() const { return std::min(inner_reach(), outer_reach()); }
    /// Symmetric band |signed distance| <= 0.9 reach() on both sides.
    [[nodiscard]] double tubular_width() const { return 0.9 * reach(); }

    [[nodiscard]] ClosestPoint closest_point(const Vec3& p) const;
    [[nodiscard]] double signed_distance(const Vec3& p) const { return closest_point(p).signed_distance; }
    [[nodiscard]] Vec3 project(const Vec3& p) const { return closest_point(p).point; }

    /// Outward unit normal at a point of the surface.
    [[nodiscard]] Vec3 normal(const Vec3& on_surface) const;

    /// Exact surface area.
    [[nodiscard]] double area() const;

    /// Euler characteristic of the surface.
    [[nodiscard]] int euler_characteristic() const noexcept { return kind_ == SurfaceKind::Torus ? 0 : 2; }

    /// Short name used on the command line and in mesh files: sphere, torus, ellipsoid.
    [[nodiscard]] std::string_view name() const noexcept;

    friend bool operator==(const Surface&, const Surface&) = default;

private:
    Surface(SurfaceKind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}

    ClosestPoint closest_on_ellipsoid(const Vec3& p) const;

    SurfaceKind kind_;
    std::vector<double> params_;
};

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

///
/// A manufactured solution pair for -Lap_S u + u = f.
///
/// All fields are evaluated at points of the surface; grad_u is the tangential gradient.
///
struct ManufacturedCase {
    Surface surface;
    std::string name;
    ScalarField u;
    VectorField grad_u;
    ScalarField f;
};

/// Catalog of analytic test problems for the given surface (at least two per surface).
std::vector<ManufacturedCase> manufactured_cases(const Surface& surface);

/// Looks a case up by name.
std::optional<ManufacturedCase> find_case(const Surface& surface, std::string_view name);

} // namespace sfem
