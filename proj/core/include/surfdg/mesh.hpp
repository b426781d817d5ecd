#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "surfdg/geometry.hpp"

namespace surfdg {

/// Interior mesh edge shared by two triangles. The element with the smaller
/// global index is the "+" side; `vertices` is the global pair ordered
/// (low, high), which also fixes the edge parametrization direction.
struct MeshEdge {
    int elem_plus = -1;
    int elem_minus = -1;
    int local_plus = -1;
    int local_minus = -1;
    std::array<int, 2> vertices{-1, -1};
};

/// Base polyhedral triangulation with all vertices on the surface.
///
/// Triangles carry a consistent outward orientation; local edge e of a
/// triangle (v0,v1,v2) joins vertices ((e+1)%3, (e+2)%3), matching the
/// reference element convention. Meshes are immutable by convention:
/// refinement returns a new value.
struct SurfaceMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<MeshEdge> edges;                 // interior edges only
    std::vector<std::array<int, 3>> elem_edges;  // per-element edge ids by local edge
    bool closed = true;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int euler_characteristic() const {
        return vertex_count() - edge_count() + triangle_count();
    }

    /// Maximum Euclidean element diameter (the mesh size h).
    double max_diameter() const;
    /// Minimum inradius/diameter ratio over all triangles.
    double min_quality() const;
};

/// Fill edge connectivity from vertices+triangles; checks that the
/// orientation is consistent (each shared edge traversed in opposite
/// directions by its two triangles).
SurfaceMesh build_mesh(std::vector<Vec3> vertices,
                       std::vector<std::array<int, 3>> triangles);

/// Subdivided icosahedron with all vertices projected onto the sphere.
/// Counts: V = 10*4^level + 2, F = 20*4^level, E = 30*4^level.
SurfaceMesh icosphere(const ImplicitSurface& surface, int level);

/// Structured triangulation of a torus with an n_major x n_minor angle grid.
SurfaceMesh torus_base(const ImplicitSurface& surface, int n_major, int n_minor);

/// Uniform 1->4 refinement with edge midpoints projected onto the surface.
SurfaceMesh refine(const SurfaceMesh& mesh, const ImplicitSurface& surface);

/// ASCII OFF triangle mesh import; vertices are projected onto the surface.
SurfaceMesh load_off(std::istream& in, const ImplicitSurface& surface);
SurfaceMesh load_off_file(const std::string& path, const ImplicitSurface& surface);

} // namespace surfdg
