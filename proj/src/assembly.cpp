#include "sfem/assembly.hpp"

#include "sfem/errors.hpp"

#include <fmt/format.h>

#include <Eigen/Geometry>

#include <algorithm>

namespace sfem {

namespace {

constexpr double kMinArea = 1e-14;

} // namespace

std::array<Vec3, 3> hat_gradients(const Vec3& a, const Vec3& b, const Vec3& c)
{
    // In-plane frame: e1 along ab, e2 the part of ac orthogonal to e1.
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const double len_ab = ab.norm();
    const Vec3 e1 = ab / len_ab;
    const Vec3 ac_perp = ac - ac.dot(e1) * e1;
    const double height = ac_perp.norm();
    const double area = 0.5 * len_ab * height;
    if (!(area > kMinArea)) {
        throw DegenerateTriangle(fmt::format("triangle area {} is below {}", area, kMinArea));
    }
    const Vec3 e2 = ac_perp / height;

    // 2D corners p0 = (0,0), p1 = (len_ab, 0), p2 = (ac.e1, height).
    const Eigen::Vector2d p[3] = {{0.0, 0.0}, {len_ab, 0.0}, {ac.dot(e1), height}};
    std::array<Vec3, 3> grads;
    for (int i = 0; i < 3; ++i) {
        // grad lambda_i is the inward normal of the opposite edge scaled by its length / (2 area).
        const Eigen::Vector2d edge = p[(i + 2) % 3] - p[(i + 1) % 3];
        const Eigen::Vector2d g(-edge.y() / (2.0 * area), edge.x() / (2.0 * area));
        grads[i] = g.x() * e1 + g.y() * e2;
    }
    return grads;
}

ElementMatrices element_matrices(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const auto grads = hat_gradients(a, b, c);
    ElementMatrices em;
    em.area = triangle_area(a, b, c);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            em.stiffness(i, j) = em.area * grads[i].dot(grads[j]);
            em.mass(i, j) = em.area / 12.0 * (i == j ? 2.0 : 1.0);
        }
    }
    return em;
}

SparseSymMatrix p1_pattern(const TriMesh& mesh)
{
    const std::size_t n = mesh.n_vertices();
    std::vector<std::vector<std::uint32_t>> adjacency(n);
    for (std::size_t i = 0; i < n; ++i) {
        adjacency[i].push_back(static_cast<std::uint32_t>(i));
    }
    for (const auto& [a, b] : mesh.edges()) {
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    }
    std::vector<std::size_t> offsets(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::sort(adjacency[i].begin(), adjacency[i].end());
        offsets[i + 1] = offsets[i] + adjacency[i].size();
    }
    std::vector<std::uint32_t> cols;
    cols.reserve(offsets.back());
    for (const auto& row : adjacency) {
        cols.insert(cols.end(), row.begin(), row.end());
    }
    std::vector<double> values(cols.size(), 0.0);
    return SparseSymMatrix(n, std::move(offsets), std::move(cols), std::move(values));
}

SparseSymMatrix assemble(const TriMesh& mesh, double stiffness_weight, double mass_weight)
{
    SparseSymMatrix A = p1_pattern(mesh);
    auto values = A.values();
    for (std::size_t t = 0; t < mesh.n_faces(); ++t) {
        const auto [a, b, c] = mesh.corners(t);
        ElementMatrices em;
        try {
            em = element_matrices(a, b, c);
        } catch (const DegenerateTriangle& e) {
            throw DegenerateTriangle(fmt::format("triangle {}: {}", t, e.what()), t);
        }
        const Eigen::Matrix3d local = stiffness_weight * em.stiffness + mass_weight * em.mass;
        const Face& f = mesh.face(t);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                values[A.find(f[i], f[j])] += local(i, j);
            }
        }
    }
    return A;
}

Eigen::Vector3d element_load(const Vec3& a, const Vec3& b, const Vec3& c, const ScalarField& f,
                             const QuadratureRule& rule)
{
    const double area = triangle_area(a, b, c);
    Eigen::Vector3d local = Eigen::Vector3d::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto& lambda = rule.points[q];
        const double fx = rule.weights[q] * area * f(lambda[0] * a + lambda[1] * b + lambda[2] * c);
        for (int i = 0; i < 3; ++i) {
            local[i] += fx * lambda[i];
        }
    }
    return local;
}

std::vector<double> assemble_load(const TriMesh& mesh, const ScalarField& f, const QuadratureRule& rule)
{
    std::vector<double> b(mesh.n_vertices(), 0.0);
    const Surface& surface = mesh.surface();
    const ScalarField lifted = [&](const Vec3& x) { return f(surface.project(x)); };
    for (std::size_t t = 0; t < mesh.n_faces(); ++t) {
        const auto [p0, p1, p2] = mesh.corners(t);
        const Eigen::Vector3d local = element_load(p0, p1, p2, lifted, rule);
        const Face& face = mesh.face(t);
        for (int i = 0; i < 3; ++i) {
            b[face[i]] += local[i];
        }
    }
    return b;
}

} // namespace sfem
