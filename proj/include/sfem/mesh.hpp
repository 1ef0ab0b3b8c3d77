#pragma once

#include "sfem/geometry.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace sfem {

using Index = std::uint32_t;
using Face = std::array<Index, 3>;
using Edge = std::array<Index, 2>;

///
/// Flat-triangle approximation S_h of a surface: every vertex lies on the exact surface,
/// faces are counterclockwise with respect to the outward normal, and the mesh is a closed
/// consistently oriented 2-manifold. The constructor checks all of this and throws InvalidMesh.
///
class TriMesh {
public:
    TriMesh(Surface surface, std::vector<Vec3> vertices, std::vector<Face> faces, int level = 0);

    [[nodiscard]] const Surface& surface() const noexcept { return surface_; }
    [[nodiscard]] std::span<const Vec3> vertices() const noexcept { return vertices_; }
    [[nodiscard]] std::span<const Face> faces() const noexcept { return faces_; }
    [[nodiscard]] const Vec3& vertex(Index i) const { return vertices_[i]; }
    [[nodiscard]] const Face& face(std::size_t t) const { return faces_[t]; }
    [[nodiscard]] std::size_t n_vertices() const noexcept { return vertices_.size(); }
    [[nodiscard]] std::size_t n_faces() const noexcept { return faces_.size(); }
    [[nodiscard]] int level() const noexcept { return level_; }

    /// Corner positions of face t.
    [[nodiscard]] std::array<Vec3, 3> corners(std::size_t t) const
    {
        const Face& f = faces_[t];
        return {vertices_[f[0]], vertices_[f[1]], vertices_[f[2]]};
    }

    /// Unique undirected edges (i < j), in order of first appearance while scanning faces.
    [[nodiscard]] std::vector<Edge> edges() const;

    /// Total area of S_h.
    [[nodiscard]] double area() const;

private:
    Surface surface_;
    std::vector<Vec3> vertices_;
    std::vector<Face> faces_;
    int level_;
};

struct TopologyReport {
    std::size_t n_edges = 0;
    /// Every edge is used by exactly two faces.
    bool closed_manifold = false;
    /// Every interior edge is traversed in opposite directions by its two faces.
    bool consistently_oriented = false;
    /// Every face normal points away from the enclosed volume.
    bool outward = false;
    int euler_characteristic = 0;
};

/// Checks the combinatorial invariants without throwing.
TopologyReport check_topology(const Surface& surface, std::span<const Vec3> vertices, std::span<const Face> faces);

struct MeshQuality {
    /// Largest circumscribed-disc diameter.
    double h = 0.0;
    /// Smallest inscribed-disc diameter divided by h.
    double gamma_h = 0.0;
    std::size_t n_vertices = 0;
    std::size_t n_triangles = 0;
    /// Largest distance from a face barycenter to the exact surface.
    double max_graph_height = 0.0;
};

/// Circumscribed-disc diameter of a triangle from its side lengths.
double circumdiameter(const Vec3& a, const Vec3& b, const Vec3& c);
/// Inscribed-disc diameter of a triangle.
double indiameter(const Vec3& a, const Vec3& b, const Vec3& c);
double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

/// Throws DegenerateTriangle if a face has area <= 1e-14.
MeshQuality quality(const TriMesh& mesh);

/// Icosahedron (sphere, ellipsoid) or 8x8 angular grid (torus), vertices on the surface.
TriMesh base_mesh(const Surface& surface);

///
/// Regular 1:4 subdivision with projected midpoints.
///
/// Vertex i < V of the result is vertex i of the input; vertex V + e is the projected
/// midpoint of edge e of mesh.edges().
///
TriMesh refine(const TriMesh& mesh);

/// base_mesh refined `level` times.
TriMesh make_mesh(const Surface& surface, int level);

///
/// Transfers nodal values of a P1 function on `coarse` to refine(coarse): coarse vertices keep
/// their value and each midpoint takes the mean of its edge endpoints.
///
std::vector<double> prolongate(const TriMesh& coarse, std::span<const double> values);

} // namespace sfem
