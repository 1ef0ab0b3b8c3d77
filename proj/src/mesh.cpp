#include "sfem/mesh.hpp"

#include "sfem/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace sfem {

namespace {

constexpr double kOnSurfaceTolerance = 1e-12;
constexpr double kMinArea = 1e-14;

std::uint64_t directed_key(Index from, Index to)
{
    return (static_cast<std::uint64_t>(from) << 32) | to;
}

std::uint64_t undirected_key(Index a, Index b)
{
    return a < b ? directed_key(a, b) : directed_key(b, a);
}

} // namespace

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c)
{
    return 0.5 * (b - a).cross(c - a).norm();
}

double circumdiameter(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const double la = (b - c).norm();
    const double lb = (c - a).norm();
    const double lc = (a - b).norm();
    return la * lb * lc / (2.0 * triangle_area(a, b, c));
}

double indiameter(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const double perimeter = (b - c).norm() + (c - a).norm() + (a - b).norm();
    return 4.0 * triangle_area(a, b, c) / perimeter;
}

TopologyReport check_topology(const Surface& surface, std::span<const Vec3> vertices, std::span<const Face> faces)
{
    TopologyReport report;
    std::unordered_map<std::uint64_t, int> directed;
    std::unordered_map<std::uint64_t, int> undirected;
    directed.reserve(3 * faces.size());
    undirected.reserve(2 * faces.size());

    bool unique_directed = true;
    bool outward = true;
    for (const Face& f : faces) {
        for (int k = 0; k < 3; ++k) {
            const Index a = f[k];
            const Index b = f[(k + 1) % 3];
            if (++directed[directed_key(a, b)] > 1) {
                unique_directed = false;
            }
            ++undirected[undirected_key(a, b)];
        }
        const Vec3& p0 = vertices[f[0]];
        const Vec3& p1 = vertices[f[1]];
        const Vec3& p2 = vertices[f[2]];
        const Vec3 face_normal = (p1 - p0).cross(p2 - p0);
        const Vec3 surface_normal = surface.normal(p0) + surface.normal(p1) + surface.normal(p2);
        if (!(face_normal.dot(surface_normal) > 0.0)) {
            outward = false;
        }
    }

    report.n_edges = undirected.size();
    report.closed_manifold = std::all_of(undirected.begin(), undirected.end(),
                                         [](const auto& kv) { return kv.second == 2; });
    report.consistently_oriented = unique_directed && report.closed_manifold;
    if (report.consistently_oriented) {
        for (const auto& [key, count] : directed) {
            const auto from = static_cast<Index>(key >> 32);
            const auto to = static_cast<Index>(key & 0xffffffffu);
            if (!directed.contains(directed_key(to, from))) {
                report.consistently_oriented = false;
                break;
            }
        }
    }
    report.outward = outward;
    report.euler_characteristic = static_cast<int>(vertices.size()) - static_cast<int>(report.n_edges)
                                  + static_cast<int>(faces.size());
    return report;
}

TriMesh::TriMesh(Surface surface, std::vector<Vec3> vertices, std::vector<Face> faces, int level)
    : surface_(std::move(surface)), vertices_(std::move(vertices)), faces_(std::move(faces)), level_(level)
{
    const auto n = vertices_.size();
    for (std::size_t t = 0; t < faces_.size(); ++t) {
        const Face& f = faces_[t];
        for (Index i : f) {
            if (i >= n) {
                throw InvalidMesh(fmt::format("face {} references vertex {} of {}", t, i, n));
            }
        }
        if (f[0] == f[1] || f[1] == f[2] || f[2] == f[0]) {
            throw InvalidMesh(fmt::format("face {} repeats a vertex", t));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double distance = 0.0;
        try {
            distance = surface_.signed_distance(vertices_[i]);
        } catch (const Error& e) {
            throw InvalidMesh(fmt::format("vertex {}: {}", i, e.what()));
        }
        if (!(std::abs(distance) <= kOnSurfaceTolerance)) {
            throw InvalidMesh(fmt::format("vertex {} is {} off the surface", i, distance));
        }
    }
    const TopologyReport topo = check_topology(surface_, vertices_, faces_);
    if (!topo.closed_manifold) {
        throw InvalidMesh("mesh is not a closed 2-manifold");
    }
    if (!topo.consistently_oriented) {
        throw InvalidMesh("mesh orientation is inconsistent");
    }
    if (!topo.outward) {
        throw InvalidMesh("mesh faces are not oriented along the outward normal");
    }
    if (topo.euler_characteristic != surface_.euler_characteristic()) {
        throw InvalidMesh(fmt::format("Euler characteristic {} does not match the {} ({})",
                                      topo.euler_characteristic, surface_.name(), surface_.euler_characteristic()));
    }
}

std::vector<Edge> TriMesh::edges() const
{
    std::vector<Edge> result;
    result.reserve(faces_.size() * 3 / 2);
    std::unordered_map<std::uint64_t, Index> seen;
    seen.reserve(faces_.size() * 3 / 2);
    for (const Face& f : faces_) {
        for (int k = 0; k < 3; ++k) {
            const Index a = f[k];
            const Index b = f[(k + 1) % 3];
            if (seen.try_emplace(undirected_key(a, b), static_cast<Index>(result.size())).second) {
                result.push_back({std::min(a, b), std::max(a, b)});
            }
        }
    }
    return result;
}

double TriMesh::area() const
{
    double total = 0.0;
    for (std::size_t t = 0; t < faces_.size(); ++t) {
        const auto [a, b, c] = corners(t);
        total += triangle_area(a, b, c);
    }
    return total;
}

MeshQuality quality(const TriMesh& mesh)
{
    MeshQuality q;
    q.n_vertices = mesh.n_vertices();
    q.n_triangles = mesh.n_faces();
    double min_in = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < mesh.n_faces(); ++t) {
        const auto [a, b, c] = mesh.corners(t);
        const double area = triangle_area(a, b, c);
        if (!(area > kMinArea)) {
            throw DegenerateTriangle(fmt::format("triangle {} has area {}", t, area), t);
        }
        q.h = std::max(q.h, circumdiameter(a, b, c));
        min_in = std::min(min_in, indiameter(a, b, c));
        const Vec3 barycenter = (a + b + c) / 3.0;
        q.max_graph_height = std::max(q.max_graph_height, std::abs(mesh.surface().signed_distance(barycenter)));
    }
    q.gamma_h = min_in / q.h;
    return q;
}

namespace {

TriMesh icosahedron(const Surface& surface)
{
    using std::numbers::pi;
    std::vector<Vec3> unit;
    unit.reserve(12);
    const double ring_z = 1.0 / std::sqrt(5.0);
    const double ring_r = 2.0 / std::sqrt(5.0);
    unit.emplace_back(0.0, 0.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        const double angle = 2.0 * pi * k / 5.0;
        unit.emplace_back(ring_r * std::cos(angle), ring_r * std::sin(angle), ring_z);
    }
    for (int k = 0; k < 5; ++k) {
        const double angle = 2.0 * pi * k / 5.0 + pi / 5.0;
        unit.emplace_back(ring_r * std::cos(angle), ring_r * std::sin(angle), -ring_z);
    }
    unit.emplace_back(0.0, 0.0, -1.0);

    std::vector<Face> faces;
    faces.reserve(20);
    for (Index k = 0; k < 5; ++k) {
        const Index next = (k + 1) % 5;
        faces.push_back({0, 1 + k, 1 + next});
        faces.push_back({1 + k, 6 + k, 1 + next});
        faces.push_back({1 + next, 6 + k, 6 + next});
        faces.push_back({11, 6 + next, 6 + k});
    }

    std::vector<Vec3> vertices;
    vertices.reserve(unit.size());
    Vec3 scale = Vec3::Ones();
    if (surface.kind() == SurfaceKind::Ellipsoid) {
        scale = Vec3(surface.params()[0], surface.params()[1], surface.params()[2]);
    }
    for (const Vec3& v : unit) {
        vertices.push_back(surface.project(v.cwiseProduct(scale)));
    }
    return TriMesh(surface, std::move(vertices), std::move(faces), 0);
}

TriMesh torus_grid(const Surface& surface)
{
    using std::numbers::pi;
    constexpr Index n = 8;
    const double R = surface.params()[0];
    const double r = surface.params()[1];
    std::vector<Vec3> vertices;
    vertices.reserve(n * n);
    for (Index i = 0; i < n; ++i) {
        const double theta = 2.0 * pi * i / n;
        for (Index j = 0; j < n; ++j) {
            const double phi = 2.0 * pi * j / n;
            const double rho = R + r * std::cos(phi);
            vertices.push_back(surface.project(Vec3(rho * std::cos(theta), rho * std::sin(theta), r * std::sin(phi))));
        }
    }
    const auto id = [](Index i, Index j) { return (i % n) * n + (j % n); };
    std::vector<Face> faces;
    faces.reserve(2 * n * n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return TriMesh(surface, std::move(vertices), std::move(faces), 0);
}

} // namespace

TriMesh base_mesh(const Surface& surface)
{
    return surface.kind() == SurfaceKind::Torus ? torus_grid(surface) : icosahedron(surface);
}

TriMesh refine(const TriMesh& mesh)
{
    const std::vector<Edge> edges = mesh.edges();
    const auto n = static_cast<Index>(mesh.n_vertices());

    std::unordered_map<std::uint64_t, Index> midpoint;
    midpoint.reserve(edges.size());
    std::vector<Vec3> vertices(mesh.vertices().begin(), mesh.vertices().end());
    vertices.reserve(n + edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [a, b] = edges[e];
        midpoint.emplace(undirected_key(a, b), static_cast<Index>(n + e));
        vertices.push_back(mesh.surface().project(0.5 * (mesh.vertex(a) + mesh.vertex(b))));
    }

    std::vector<Face> faces;
    faces.reserve(4 * mesh.n_faces());
    for (const Face& f : mesh.faces()) {
        const Index ab = midpoint.at(undirected_key(f[0], f[1]));
        const Index bc = midpoint.at(undirected_key(f[1], f[2]));
        const Index ca = midpoint.at(undirected_key(f[2], f[0]));
        faces.push_back({f[0], ab, ca});
        faces.push_back({f[1], bc, ab});
        faces.push_back({f[2], ca, bc});
        faces.push_back({ab, bc, ca});
    }
    return TriMesh(mesh.surface(), std::move(vertices), std::move(faces), mesh.level() + 1);
}

TriMesh make_mesh(const Surface& surface, int level)
{
    if (level < 0) {
        throw DomainError(fmt::format("refinement level must be non-negative, got {}", level));
    }
    TriMesh mesh = base_mesh(surface);
    for (int k = 0; k < level; ++k) {
        mesh = refine(mesh);
    }
    return mesh;
}

std::vector<double> prolongate(const TriMesh& coarse, std::span<const double> values)
{
    if (values.size() != coarse.n_vertices()) {
        throw DomainError(fmt::format("prolongate: {} values for {} vertices", values.size(), coarse.n_vertices()));
    }
    const std::vector<Edge> edges = coarse.edges();
    std::vector<double> fine(values.begin(), values.end());
    fine.reserve(values.size() + edges.size());
    for (const auto& [a, b] : edges) {
        fine.push_back(0.5 * (values[a] + values[b]));
    }
    return fine;
}

} // namespace sfem
