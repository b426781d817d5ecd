#include "surfdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace surfdg {

double SurfaceMesh::max_diameter() const {
    double h = 0.0;
    for (const auto& t : triangles)
        for (int a = 0; a < 3; ++a)
            h = std::max(h, (vertices[t[a]] - vertices[t[(a + 1) % 3]]).norm());
    return h;
}

double SurfaceMesh::min_quality() const {
    double q = 1.0;
    for (const auto& t : triangles) {
        const Vec3 &a = vertices[t[0]], &b = vertices[t[1]], &c = vertices[t[2]];
        const double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
        const double s = 0.5 * (la + lb + lc);
        const double area = 0.5 * (b - a).cross(c - a).norm();
        const double inradius = area / s;
        const double diameter = std::max({la, lb, lc});
        q = std::min(q, inradius / diameter);
    }
    return q;
}

SurfaceMesh build_mesh(std::vector<Vec3> vertices,
                       std::vector<std::array<int, 3>> triangles) {
    SurfaceMesh m;
    m.vertices = std::move(vertices);
    m.triangles = std::move(triangles);
    m.elem_edges.assign(m.triangles.size(), {-1, -1, -1});

    struct Side {
        int elem, local;
        bool forward; // traversal order matches the (low, high) vertex pair
    };
    std::map<std::array<int, 2>, std::vector<Side>> sides;
    for (int e = 0; e < m.triangle_count(); ++e) {
        const auto& t = m.triangles[e];
        for (int l = 0; l < 3; ++l) {
            const int a = t[(l + 1) % 3], b = t[(l + 2) % 3];
            const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
            sides[key].push_back({e, l, a == key[0]});
        }
    }

    for (const auto& [key, list] : sides) {
        if (list.size() == 1) {
            m.closed = false;
            continue;
        }
        if (list.size() > 2)
            throw ValidationError("mesh", "edge shared by more than two triangles");
        if (list[0].forward == list[1].forward)
            throw ValidationError("mesh", "inconsistent triangle orientation");
        MeshEdge edge;
        const Side& p = list[0].elem < list[1].elem ? list[0] : list[1];
        const Side& q = list[0].elem < list[1].elem ? list[1] : list[0];
        edge.elem_plus = p.elem;
        edge.local_plus = p.local;
        edge.elem_minus = q.elem;
        edge.local_minus = q.local;
        edge.vertices = key;
        const int id = static_cast<int>(m.edges.size());
        m.edges.push_back(edge);
        m.elem_edges[p.elem][p.local] = id;
        m.elem_edges[q.elem][q.local] = id;
    }
    return m;
}

namespace {

// Flip every triangle if the mesh is oriented inward (majority vote on the
// alignment between face normals and the surface normal at the centroid).
void orient_outward(std::vector<Vec3>& vertices,
                    std::vector<std::array<int, 3>>& triangles,
                    const ImplicitSurface& surface) {
    int outward = 0, inward = 0;
    for (const auto& t : triangles) {
        const Vec3 &a = vertices[t[0]], &b = vertices[t[1]], &c = vertices[t[2]];
        const Vec3 n = (b - a).cross(c - a);
        const Vec3 centroid = (a + b + c) / 3.0;
        (n.dot(surface.normal(centroid)) > 0 ? outward : inward) += 1;
    }
    if (inward > outward)
        for (auto& t : triangles) std::swap(t[1], t[2]);
}

} // namespace

SurfaceMesh icosphere(const ImplicitSurface& surface, int level) {
    if (surface.kind() != ImplicitSurface::Kind::Sphere)
        throw ValidationError("surface", "icosphere requires a sphere");
    if (level < 0) throw ValidationError("level", "must be >= 0");

    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    std::vector<Vec3> verts = {
        {-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
    const double R = surface.sphere_radius();
    for (auto& v : verts) v = surface.closest_point(R * v.normalized());
    std::vector<std::array<int, 3>> tris = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    orient_outward(verts, tris, surface);

    SurfaceMesh m = build_mesh(std::move(verts), std::move(tris));
    for (int l = 0; l < level; ++l) m = refine(m, surface);
    return m;
}

SurfaceMesh torus_base(const ImplicitSurface& surface, int n_major, int n_minor) {
    if (surface.kind() != ImplicitSurface::Kind::Torus)
        throw ValidationError("surface", "torus_base requires a torus");
    if (n_major < 3 || n_minor < 3)
        throw ValidationError("resolution", "n_major, n_minor must be >= 3");

    const double R = surface.torus_major(), r = surface.torus_minor();
    std::vector<Vec3> verts;
    verts.reserve(n_major * n_minor);
    for (int i = 0; i < n_major; ++i) {
        const double th = 2.0 * M_PI * i / n_major;
        for (int j = 0; j < n_minor; ++j) {
            const double ph = 2.0 * M_PI * j / n_minor;
            const double w = R + r * std::cos(ph);
            verts.emplace_back(w * std::cos(th), w * std::sin(th), r * std::sin(ph));
        }
    }
    auto vid = [&](int i, int j) {
        return (i % n_major) * n_minor + (j % n_minor);
    };
    std::vector<std::array<int, 3>> tris;
    tris.reserve(2 * n_major * n_minor);
    for (int i = 0; i < n_major; ++i)
        for (int j = 0; j < n_minor; ++j) {
            tris.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            tris.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    orient_outward(verts, tris, surface);
    return build_mesh(std::move(verts), std::move(tris));
}

SurfaceMesh refine(const SurfaceMesh& mesh, const ImplicitSurface& surface) {
    std::vector<Vec3> verts = mesh.vertices;
    std::vector<std::array<int, 3>> tris;
    tris.reserve(4 * mesh.triangles.size());

    std::map<std::array<int, 2>, int> midpoint;
    auto mid = [&](int a, int b) {
        const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const Vec3 p = surface.closest_point(0.5 * (verts[a] + verts[b]));
        const int id = static_cast<int>(verts.size());
        verts.push_back(p);
        midpoint.emplace(key, id);
        return id;
    };

    for (const auto& t : mesh.triangles) {
        const int m0 = mid(t[1], t[2]), m1 = mid(t[2], t[0]), m2 = mid(t[0], t[1]);
        tris.push_back({t[0], m2, m1});
        tris.push_back({t[1], m0, m2});
        tris.push_back({t[2], m1, m0});
        tris.push_back({m0, m1, m2});
    }
    return build_mesh(std::move(verts), std::move(tris));
}

SurfaceMesh load_off(std::istream& in, const ImplicitSurface& surface) {
    std::string header;
    in >> header;
    if (header != "OFF") throw ParseError("expected OFF header", 1);
    int nv = 0, nf = 0, ne = 0;
    if (!(in >> nv >> nf >> ne)) throw ParseError("expected vertex/face counts", 2);

    std::vector<Vec3> verts(nv);
    for (int i = 0; i < nv; ++i) {
        double x, y, z;
        if (!(in >> x >> y >> z)) throw ParseError("bad vertex line", 3 + i);
        verts[i] = surface.closest_point(Vec3(x, y, z));
    }
    std::vector<std::array<int, 3>> tris(nf);
    for (int i = 0; i < nf; ++i) {
        int n, a, b, c;
        if (!(in >> n >> a >> b >> c) || n != 3)
            throw ParseError("bad (non-triangle) face line", 3 + nv + i);
        tris[i] = {a, b, c};
    }
    orient_outward(verts, tris, surface);
    return build_mesh(std::move(verts), std::move(tris));
}

SurfaceMesh load_off_file(const std::string& path, const ImplicitSurface& surface) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh file: " + path);
    return load_off(in, surface);
}

} // namespace surfdg
