#include "sfem/geometry.hpp"

#include "sfem/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sfem {

namespace {

constexpr int kEllipsoidMaxIterations = 50;
constexpr double kEllipsoidTolerance = 1e-12;

constexpr double kTubularFraction = 0.9;

void require_tubular(const Surface& s, const Vec3& p, double distance)
{
    const double limit = kTubularFraction * (distance < 0.0 ? s.inner_reach() : s.outer_reach());
    if (!(std::abs(distance) <= limit)) {
        throw OutOfTubularNeighborhood(fmt::format("point ({}, {}, {}) is {} {} the {}; the limit is {}", p.x(),
                                                   p.y(), p.z(), std::abs(distance),
                                                   distance < 0.0 ? "inside" : "outside", s.name(), limit));
    }
}

} // namespace

Surface Surface::unit_sphere()
{
    return Surface(SurfaceKind::UnitSphere, {});
}

Surface Surface::torus(double major, double minor)
{
    if (!(minor > 0.0) || !(major > minor) || !std::isfinite(major)) {
        throw DomainError(fmt::format("torus requires R > r > 0, got R={} r={}", major, minor));
    }
    return Surface(SurfaceKind::Torus, {major, minor});
}

Surface Surface::ellipsoid(double a, double b, double c)
{
    for (double s : {a, b, c}) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw DomainError(fmt::format("ellipsoid requires positive semi-axes, got ({}, {}, {})", a, b, c));
        }
    }
    return Surface(SurfaceKind::Ellipsoid, {a, b, c});
}

std::string_view Surface::name() const noexcept
{
    switch (kind_) {
    case SurfaceKind::UnitSphere: return "sphere";
    case SurfaceKind::Torus: return "torus";
    case SurfaceKind::Ellipsoid: return "ellipsoid";
    }
    return "unknown";
}

double Surface::inner_reach() const
{
    switch (kind_) {
    case SurfaceKind::UnitSphere: return 1.0;
    case SurfaceKind::Torus: return params_[1];
    case SurfaceKind::Ellipsoid: {
        // Smallest principal radius of curvature.
        const auto [lo, hi] = std::minmax({params_[0], params_[1], params_[2]});
        return lo * lo / hi;
    }
    }
    return 0.0;
}

double Surface::outer_reach() const
{
    // The only exterior medial axis is the torus' axis of revolution.
    if (kind_ == SurfaceKind::Torus) {
        return params_[0] - params_[1];
    }
    return std::numeric_limits<double>::infinity();
}

ClosestPoint Surface::closest_point(const Vec3& p) const
{
    switch (kind_) {
    case SurfaceKind::UnitSphere: {
        const double radius = p.norm();
        const double distance = radius - 1.0;
        require_tubular(*this, p, distance);
        return {p / radius, distance};
    }
    case SurfaceKind::Torus: {
        const double major = params_[0];
        const double minor = params_[1];
        const double rho = std::hypot(p.x(), p.y());
        const double to_core = std::hypot(rho - major, p.z());
        const double distance = to_core - minor;
        require_tubular(*this, p, distance);
        const Vec3 core(major * p.x() / rho, major * p.y() / rho, 0.0);
        return {core + (minor / to_core) * (p - core), distance};
    }
    case SurfaceKind::Ellipsoid: return closest_on_ellipsoid(p);
    }
    throw Error("unknown surface kind");
}

///
/// Closest point on the ellipsoid sum x_i^2/a_i^2 = 1.
///
/// The Lagrange condition gives x_i = a_i^2 p_i / (a_i^2 + t) where t solves
/// g(t) = sum a_i^2 p_i^2 / (a_i^2 + t)^2 - 1 = 0 on t > -min a_i^2. g is convex
/// and decreasing there, so Newton with a bisection-style damping towards the
/// lower bound converges from t = 0.
///
ClosestPoint Surface::closest_on_ellipsoid(const Vec3& p) const
{
    const Vec3 axes2(params_[0] * params_[0], params_[1] * params_[1], params_[2] * params_[2]);
    const double lower = -axes2.minCoeff();

    const auto residual = [&](double t) {
        double g = -1.0;
        double dg = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double denom = axes2[i] + t;
            const double num = axes2[i] * p[i] * p[i];
            g += num / (denom * denom);
            dg -= 2.0 * num / (denom * denom * denom);
        }
        return std::pair{g, dg};
    };

    double t = 0.0;
    auto [g, dg] = residual(t);
    int it = 0;
    while (std::abs(g) > 1e-15 && it < kEllipsoidMaxIterations) {
        double next = t - g / dg;
        if (!(next > lower)) {
            next = 0.5 * (t + lower);
        }
        const double step = next - t;
        t = next;
        std::tie(g, dg) = residual(t);
        ++it;
        if (std::abs(step) <= 1e-17 * (1.0 + std::abs(t))) {
            break;
        }
    }
    if (!(std::abs(g) <= kEllipsoidTolerance)) {
        throw NoConvergence(
            fmt::format("ellipsoid projection of ({}, {}, {}) did not converge", p.x(), p.y(), p.z()),
            it, std::abs(g));
    }

    Vec3 x;
    for (int i = 0; i < 3; ++i) {
        x[i] = axes2[i] * p[i] / (axes2[i] + t);
    }
    const double level = (p.array().square() / axes2.array()).sum() - 1.0;
    const double distance = std::copysign((p - x).norm(), level);
    require_tubular(*this, p, distance);
    return {x, distance};
}

Vec3 Surface::normal(const Vec3& x) const
{
    switch (kind_) {
    case SurfaceKind::UnitSphere: return x.normalized();
    case SurfaceKind::Torus: {
        const double major = params_[0];
        const double rho = std::hypot(x.x(), x.y());
        const Vec3 core(major * x.x() / rho, major * x.y() / rho, 0.0);
        return (x - core).normalized();
    }
    case SurfaceKind::Ellipsoid: {
        const Vec3 g(x.x() / (params_[0] * params_[0]), x.y() / (params_[1] * params_[1]),
                     x.z() / (params_[2] * params_[2]));
        return g.normalized();
    }
    }
    return Vec3::Zero();
}

double Surface::area() const
{
    using std::numbers::pi;
    switch (kind_) {
    case SurfaceKind::UnitSphere: return 4.0 * pi;
    case SurfaceKind::Torus: return 4.0 * pi * pi * params_[0] * params_[1];
    case SurfaceKind::Ellipsoid: {
        std::vector<double> s = params_;
        std::sort(s.begin(), s.end(), std::greater<>());
        const double a = s[0];
        const double b = s[1];
        const double c = s[2];
        if (a - c <= 1e-14 * a) {
            return 4.0 * pi * a * a;
        }
        // Legendre's formula with incomplete elliptic integrals.
        const double phi = std::acos(c / a);
        const double k = std::sqrt(a * a * (b * b - c * c) / (b * b * (a * a - c * c)));
        const double sin_phi = std::sin(phi);
        const double cos_phi = std::cos(phi);
        return 2.0 * pi * c * c
               + 2.0 * pi * a * b / sin_phi
                     * (std::ellint_2(k, phi) * sin_phi * sin_phi + std::ellint_1(k, phi) * cos_phi * cos_phi);
    }
    }
    return 0.0;
}

// --- manufactured solutions -------------------------------------------------

namespace {

ManufacturedCase constant_case(const Surface& s)
{
    return {s, "constant", [](const Vec3&) { return 1.0; }, [](const Vec3&) { return Vec3::Zero().eval(); },
            [](const Vec3&) { return 1.0; }};
}

std::vector<ManufacturedCase> sphere_cases(const Surface& s)
{
    std::vector<ManufacturedCase> cases;
    cases.push_back(constant_case(s));
    // Spherical harmonics of degree l satisfy -Lap u = l(l+1) u.
    cases.push_back({s, "linear-harmonic", [](const Vec3& x) { return x.z(); },
                     [](const Vec3& x) {
                         const Vec3 n = x.normalized();
                         return (Vec3::UnitZ() - n.z() * n).eval();
                     },
                     [](const Vec3& x) { return 3.0 * x.z(); }});
    cases.push_back({s, "quadratic-harmonic", [](const Vec3& x) { return x.x() * x.y(); },
                     [](const Vec3& x) {
                         const Vec3 n = x.normalized();
                         const Vec3 g(x.y(), x.x(), 0.0);
                         return (g - g.dot(n) * n).eval();
                     },
                     [](const Vec3& x) { return 7.0 * x.x() * x.y(); }});
    return cases;
}

struct TorusAngles {
    double sin_t, cos_t, sin_p, cos_p;
};

TorusAngles torus_angles(const Vec3& x, double major)
{
    const double rho = std::hypot(x.x(), x.y());
    const double theta = std::atan2(x.y(), x.x());
    const double phi = std::atan2(x.z(), rho - major);
    return {std::sin(theta), std::cos(theta), std::sin(phi), std::cos(phi)};
}

std::vector<ManufacturedCase> torus_cases(const Surface& s)
{
    const double R = s.params()[0];
    const double r = s.params()[1];
    std::vector<ManufacturedCase> cases;
    cases.push_back(constant_case(s));

    // u = sin(2 theta) cos(phi) with x = ((R + r cos phi) cos theta, (R + r cos phi) sin theta, r sin phi).
    // Lap u = u_tt / rho^2 + u_pp / r^2 - sin(phi) u_p / (r rho), rho = R + r cos(phi).
    auto u = [R](const Vec3& x) {
        const auto a = torus_angles(x, R);
        return 2.0 * a.sin_t * a.cos_t * a.cos_p;
    };
    auto grad = [R, r](const Vec3& x) {
        const auto a = torus_angles(x, R);
        const double rho = R + r * a.cos_p;
        const double sin2t = 2.0 * a.sin_t * a.cos_t;
        const double cos2t = a.cos_t * a.cos_t - a.sin_t * a.sin_t;
        const double du_dtheta = 2.0 * cos2t * a.cos_p;
        const double du_dphi = -sin2t * a.sin_p;
        const Vec3 e_theta(-a.sin_t, a.cos_t, 0.0);
        const Vec3 e_phi(-a.sin_p * a.cos_t, -a.sin_p * a.sin_t, a.cos_p);
        return ((du_dtheta / rho) * e_theta + (du_dphi / r) * e_phi).eval();
    };
    auto f = [R, r](const Vec3& x) {
        const auto a = torus_angles(x, R);
        const double rho = R + r * a.cos_p;
        const double sin2t = 2.0 * a.sin_t * a.cos_t;
        return sin2t
               * (4.0 * a.cos_p / (rho * rho) + a.cos_p / (r * r) - a.sin_p * a.sin_p / (r * rho) + a.cos_p);
    };
    cases.push_back({s, "angular-trig", u, grad, f});
    return cases;
}

std::vector<ManufacturedCase> ellipsoid_cases(const Surface& s)
{
    const Vec3 inv2(1.0 / (s.params()[0] * s.params()[0]), 1.0 / (s.params()[1] * s.params()[1]),
                    1.0 / (s.params()[2] * s.params()[2]));
    std::vector<ManufacturedCase> cases;
    cases.push_back(constant_case(s));

    // Lap_S of a coordinate function is -H n_i with H = div(n) the summed curvature.
    auto normal = [inv2](const Vec3& x) { return x.cwiseProduct(inv2).normalized().eval(); };
    auto mean_curvature = [inv2](const Vec3& x) {
        const Vec3 grad = 2.0 * x.cwiseProduct(inv2);
        const Vec3 n = grad.normalized();
        const double trace = 2.0 * inv2.sum();
        const double normal_part = 2.0 * n.cwiseProduct(n).dot(inv2);
        return (trace - normal_part) / grad.norm();
    };
    cases.push_back({s, "linear-z", [](const Vec3& x) { return x.z(); },
                     [normal](const Vec3& x) {
                         const Vec3 n = normal(x);
                         return (Vec3::UnitZ() - n.z() * n).eval();
                     },
                     [normal, mean_curvature](const Vec3& x) { return x.z() + mean_curvature(x) * normal(x).z(); }});
    return cases;
}

} // namespace

std::vector<ManufacturedCase> manufactured_cases(const Surface& surface)
{
    switch (surface.kind()) {
    case SurfaceKind::UnitSphere: return sphere_cases(surface);
    case SurfaceKind::Torus: return torus_cases(surface);
    case SurfaceKind::Ellipsoid: return ellipsoid_cases(surface);
    }
    return {};
}

std::optional<ManufacturedCase> find_case(const Surface& surface, std::string_view name)
{
    for (auto& c : manufactured_cases(surface)) {
        if (c.name == name) {
            return std::move(c);
        }
    }
    return std::nullopt;
}

} // namespace sfem
