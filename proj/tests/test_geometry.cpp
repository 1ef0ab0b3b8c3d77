#include "sfem/errors.hpp"
#include "sfem/geometry.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

namespace sfem {
namespace {

using std::numbers::pi;
using testing::make_rng;
using testing::random_surface_point;
using testing::random_tubular_point;
using testing::fd_laplace_beltrami;
using testing::sample_surfaces;

// Nearest point of the torus by exhaustive search over (theta, phi), zooming in twice.
Vec3 torus_brute_force(double R, double r, const Vec3& p)
{
    const auto point = [&](double theta, double phi) {
        return Vec3((R + r * std::cos(phi)) * std::cos(theta), (R + r * std::cos(phi)) * std::sin(theta),
                    r * std::sin(phi));
    };
    double best_theta = 0.0;
    double best_phi = 0.0;
    double best = std::numeric_limits<double>::infinity();
    double span_theta = 2.0 * pi;
    double span_phi = 2.0 * pi;
    double center_theta = pi;
    double center_phi = pi;
    for (int pass = 0; pass < 6; ++pass) {
        constexpr int n = 400;
        for (int i = 0; i <= n; ++i) {
            const double theta = center_theta + span_theta * (static_cast<double>(i) / n - 0.5);
            for (int j = 0; j <= n; ++j) {
                const double phi = center_phi + span_phi * (static_cast<double>(j) / n - 0.5);
                const double d = (point(theta, phi) - p).squaredNorm();
                if (d < best) {
                    best = d;
                    best_theta = theta;
                    best_phi = phi;
                }
            }
        }
        center_theta = best_theta;
        center_phi = best_phi;
        span_theta *= 8.0 / n;
        span_phi *= 8.0 / n;
    }
    return point(best_theta, best_phi);
}

TEST(SignedDistance, SphereRadialExamples)
{
    const Surface s = Surface::unit_sphere();
    EXPECT_DOUBLE_EQ(s.signed_distance(Vec3(0, 0, 0.5)), -0.5);
    EXPECT_DOUBLE_EQ(s.signed_distance(Vec3(2, 0, 0)), 1.0);
}

TEST(SignedDistance, TorusClosedFormMatchesBruteForce)
{
    const Surface s = Surface::torus(2.0, 0.5);
    const Vec3 p(2.0, 0.0, 0.25);
    EXPECT_NEAR(s.signed_distance(p), -0.25, 1e-15);
    const Vec3 nearest = torus_brute_force(2.0, 0.5, p);
    EXPECT_NEAR((nearest - p).norm(), 0.25, 1e-10);
}

TEST(Project, SphereAndFixedPoints)
{
    const Surface s = Surface::unit_sphere();
    EXPECT_TRUE(s.project(Vec3(2, 0, 0)).isApprox(Vec3(1, 0, 0), 1e-15));

    auto rng = make_rng();
    for (const Surface& surface : sample_surfaces()) {
        for (int i = 0; i < 20; ++i) {
            const Vec3 y = surface.project(random_surface_point(surface, rng));
            EXPECT_LE((surface.project(y) - y).norm(), 1e-12) << surface.name();
        }
    }
}

TEST(Project, TorusMatchesBruteForce)
{
    const Surface s = Surface::torus(2.0, 0.5);
    EXPECT_LE((s.project(Vec3(2.75, 0, 0)) - Vec3(2.5, 0, 0)).norm(), 1e-15);

    auto rng = make_rng();
    for (int i = 0; i < 5; ++i) {
        const Vec3 p = random_tubular_point(s, rng);
        EXPECT_LE((s.project(p) - torus_brute_force(2.0, 0.5, p)).norm(), 1e-8);
    }
}

TEST(Project, EllipsoidLandsOnSurface)
{
    const Surface s = Surface::ellipsoid(1.0, 0.8, 0.6);
    auto rng = make_rng();
    for (int i = 0; i < 200; ++i) {
        const Vec3 p = random_tubular_point(s, rng);
        const Vec3 x = s.project(p);
        const double level = x.x() * x.x() + x.y() * x.y() / 0.64 + x.z() * x.z() / 0.36 - 1.0;
        EXPECT_LE(std::abs(level), 1e-12);
        // A sampled point y + d n(y) projects back onto y.
        EXPECT_LE(std::abs(std::abs(s.signed_distance(p)) - (p - x).norm()), 1e-15);
    }
}

TEST(Project, PropertiesOnAllSurfaces)
{
    auto rng = make_rng();
    for (const Surface& s : sample_surfaces()) {
        for (int i = 0; i < 200; ++i) {
            const Vec3 p = random_tubular_point(s, rng);
            const Vec3 y = s.project(p);
            // Idempotence.
            EXPECT_LE((s.project(y) - y).norm(), 1e-12) << s.name();
            EXPECT_LE(std::abs(s.signed_distance(y)), 1e-12) << s.name();
            // Normality.
            EXPECT_LE((p - y).cross(s.normal(y)).norm(), 1e-10) << s.name();
            // Sign convention.
            EXPECT_GE(s.signed_distance(p) * (p - y).dot(s.normal(y)), 0.0) << s.name();
        }
    }
}

TEST(SignedDistance, EikonalUnderCentralDifferences)
{
    constexpr double step = 1e-6;
    auto rng = make_rng();
    for (const Surface& s : sample_surfaces()) {
        for (int i = 0; i < 50; ++i) {
            const Vec3 p = random_tubular_point(s, rng, 0.7);
            Vec3 grad;
            for (int k = 0; k < 3; ++k) {
                Vec3 e = Vec3::Zero();
                e[k] = step;
                grad[k] = (s.signed_distance(p + e) - s.signed_distance(p - e)) / (2.0 * step);
            }
            EXPECT_NEAR(grad.norm(), 1.0, 1e-6) << s.name();
        }
    }
}

TEST(Project, RejectsPointsOutsideTubularNeighborhood)
{
    EXPECT_THROW((void)Surface::unit_sphere().project(Vec3(0.05, 0, 0)), OutOfTubularNeighborhood);
    EXPECT_THROW((void)Surface::unit_sphere().project(Vec3(0, 0, 0)), OutOfTubularNeighborhood);
    // Convex shapes have no exterior medial axis.
    EXPECT_NO_THROW((void)Surface::unit_sphere().project(Vec3(5, 0, 0)));
    EXPECT_NO_THROW((void)Surface::ellipsoid(1.0, 0.8, 0.6).project(Vec3(3, -4, 5)));
    const Surface torus = Surface::torus(2.0, 0.5);
    EXPECT_THROW((void)torus.project(Vec3(0, 0, 0.3)), OutOfTubularNeighborhood);
    EXPECT_THROW((void)torus.project(Vec3(2, 0, 0)), OutOfTubularNeighborhood);
    EXPECT_THROW((void)Surface::ellipsoid(1.0, 0.8, 0.6).project(Vec3(0, 0, 0)), Error);
    EXPECT_NO_THROW((void)torus.project(Vec3(2.9, 0, 0)));
}

TEST(Surface, RejectsInvalidParameters)
{
    EXPECT_THROW((void)Surface::torus(0.5, 0.5), DomainError);
    EXPECT_THROW((void)Surface::torus(1.0, 0.0), DomainError);
    EXPECT_THROW((void)Surface::ellipsoid(1.0, -1.0, 1.0), DomainError);
}

TEST(Surface, ReachAndArea)
{
    EXPECT_DOUBLE_EQ(Surface::unit_sphere().reach(), 1.0);
    EXPECT_DOUBLE_EQ(Surface::torus(2.0, 0.5).reach(), 0.5);
    EXPECT_DOUBLE_EQ(Surface::torus(1.2, 0.8).reach(), 1.2 - 0.8);
    EXPECT_DOUBLE_EQ(Surface::torus(2.0, 0.5).outer_reach(), 1.5);
    EXPECT_TRUE(std::isinf(Surface::unit_sphere().outer_reach()));
    EXPECT_DOUBLE_EQ(Surface::ellipsoid(1.0, 0.8, 0.6).reach(), 0.36);
    EXPECT_DOUBLE_EQ(Surface::unit_sphere().area(), 4.0 * pi);
    EXPECT_DOUBLE_EQ(Surface::torus(2.0, 0.5).area(), 4.0 * pi * pi);
    EXPECT_NEAR(Surface::ellipsoid(2.0, 2.0, 2.0).area(), 16.0 * pi, 1e-12);

    // Ellipsoid area against Richardson-extrapolated midpoint quadrature of the parametric area element.
    const double a = 1.0;
    const double b = 0.8;
    const double c = 0.6;
    const auto midpoint_area = [&](int n) {
        double area = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = pi * (i + 0.5) / n;
            for (int j = 0; j < n; ++j) {
                const double u = 2.0 * pi * (j + 0.5) / n;
                const Vec3 xu(-a * std::sin(v) * std::sin(u), b * std::sin(v) * std::cos(u), 0.0);
                const Vec3 xv(a * std::cos(v) * std::cos(u), b * std::cos(v) * std::sin(u), -c * std::sin(v));
                area += xu.cross(xv).norm();
            }
        }
        return area * (pi / n) * (2.0 * pi / n);
    };
    const double extrapolated = (4.0 * midpoint_area(1000) - midpoint_area(500)) / 3.0;
    EXPECT_NEAR(Surface::ellipsoid(a, b, c).area(), extrapolated, 1e-9);
}

TEST(ManufacturedCases, CatalogContents)
{
    for (const Surface& s : sample_surfaces()) {
        const auto cases = manufactured_cases(s);
        EXPECT_GE(cases.size(), 2U) << s.name();
        ASSERT_TRUE(find_case(s, "constant").has_value());
    }
    const Surface sphere = Surface::unit_sphere();
    ASSERT_TRUE(find_case(sphere, "linear-harmonic"));
    ASSERT_TRUE(find_case(sphere, "quadratic-harmonic"));
    ASSERT_TRUE(find_case(Surface::torus(2.0, 0.5), "angular-trig"));
    EXPECT_FALSE(find_case(sphere, "no-such-case"));

    const Vec3 p = Vec3(0.3, -0.4, 0.5).normalized();
    EXPECT_DOUBLE_EQ(find_case(sphere, "linear-harmonic")->f(p), 3.0 * p.z());
    EXPECT_DOUBLE_EQ(find_case(sphere, "quadratic-harmonic")->f(p), 7.0 * p.x() * p.y());
    EXPECT_DOUBLE_EQ(find_case(sphere, "constant")->f(p), 1.0);
}

TEST(ManufacturedCases, FiniteDifferenceOracleAgrees)
{
    auto rng = make_rng();
    for (const Surface& s : sample_surfaces()) {
        for (const ManufacturedCase& c : manufactured_cases(s)) {
            for (int i = 0; i < 20; ++i) {
                const Vec3 p = s.project(random_surface_point(s, rng));
                // -Lap u + u = f  <=>  Lap u = u - f.
                const double expected = c.u(p) - c.f(p);
                const double fd = fd_laplace_beltrami(s, c.u, p, 1e-4);
                EXPECT_LE(std::abs(fd - expected), 1e-5 * std::max(1.0, std::abs(expected)))
                    << s.name() << '/' << c.name << " at " << p.transpose();
            }
        }
    }
}

TEST(ManufacturedCases, GradientIsTangentialAndMatchesDifferences)
{
    constexpr double step = 1e-6;
    auto rng = make_rng();
    for (const Surface& s : sample_surfaces()) {
        for (const ManufacturedCase& c : manufactured_cases(s)) {
            for (int i = 0; i < 20; ++i) {
                const Vec3 p = s.project(random_surface_point(s, rng));
                const Vec3 n = s.normal(p);
                const Vec3 g = c.grad_u(p);
                EXPECT_LE(std::abs(g.dot(n)), 1e-12) << s.name() << '/' << c.name;
                const Vec3 t1 = (std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(n).normalized();
                const Vec3 t2 = n.cross(t1);
                for (const Vec3& t : {t1, t2}) {
                    const double fd = (c.u(s.project(p + step * t)) - c.u(s.project(p - step * t))) / (2.0 * step);
                    EXPECT_NEAR(fd, g.dot(t), 1e-7) << s.name() << '/' << c.name;
                }
            }
        }
    }
}

} // namespace
} // namespace sfem
