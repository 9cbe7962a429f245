#include "nlbem/surface_mesh.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace nlbem {

namespace {

int find_root(std::vector<int>& parent, int i)
{
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}// namespace

SurfaceMesh::SurfaceMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
    const int nv = static_cast<int>(vertices_.size());
    const int nt = static_cast<int>(triangles_.size());
    if (nt == 0)
        throw ValidationError("mesh has no triangles");

    normals_.resize(nt);
    areas_.resize(nt);
    for (int t = 0; t < nt; ++t) {
        for (int k = 0; k < 3; ++k) {
            if (triangles_[t][k] < 0 || triangles_[t][k] >= nv)
                throw ValidationError("triangle " + std::to_string(t) + " references vertex out of range");
        }
        const Vec3 n = (vertex(t, 1) - vertex(t, 0)).cross(vertex(t, 2) - vertex(t, 0));
        const double nn = n.norm();
        if (!(nn > 0.0))
            throw ValidationError("triangle " + std::to_string(t) + " is degenerate");
        areas_[t] = 0.5 * nn;
        normals_[t] = n / nn;
    }

    // edge -> (triangle, +1 if the triangle runs lower->higher)
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edge_map;
    for (int t = 0; t < nt; ++t) {
        for (int k = 0; k < 3; ++k) {
            const int a = triangles_[t][(k + 1) % 3];
            const int b = triangles_[t][(k + 2) % 3];
            edge_map[{std::min(a, b), std::max(a, b)}].push_back({t, a < b ? 1 : -1});
        }
    }

    std::vector<int> parent(nt);
    std::iota(parent.begin(), parent.end(), 0);

    edges_.reserve(edge_map.size());
    std::map<std::pair<int, int>, int> edge_index;
    for (const auto& [key, adj] : edge_map) {
        if (adj.size() != 2) {
            std::ostringstream msg;
            msg << "non-manifold or open edge (" << key.first << "," << key.second << ") with "
                << adj.size() << " adjacent triangles";
            throw ValidationError(msg.str());
        }
        if (adj[0].second == adj[1].second) {
            std::ostringstream msg;
            msg << "inconsistent orientation: triangles " << adj[0].first << " and " << adj[1].first
                << " traverse edge (" << key.first << "," << key.second << ") in the same direction";
            throw ValidationError(msg.str());
        }
        Edge e;
        e.v = {key.first, key.second};
        e.tri = {std::min(adj[0].first, adj[1].first), std::max(adj[0].first, adj[1].first)};
        edge_index[key] = static_cast<int>(edges_.size());
        edges_.push_back(e);
        parent[find_root(parent, adj[0].first)] = find_root(parent, adj[1].first);
    }

    tri_edges_.resize(nt);
    for (int t = 0; t < nt; ++t) {
        for (int k = 0; k < 3; ++k) {
            const int a = triangles_[t][(k + 1) % 3];
            const int b = triangles_[t][(k + 2) % 3];
            tri_edges_[t][k] = edge_index.at({std::min(a, b), std::max(a, b)});
        }
    }

    // components numbered by first appearance
    component_.assign(nt, -1);
    std::map<int, int> root_id;
    for (int t = 0; t < nt; ++t) {
        const int r = find_root(parent, t);
        auto it = root_id.find(r);
        if (it == root_id.end())
            it = root_id.emplace(r, static_cast<int>(root_id.size())).first;
        component_[t] = it->second;
    }
    n_components_ = static_cast<int>(root_id.size());

    std::vector<double> volume(n_components_, 0.0);
    for (int t = 0; t < nt; ++t)
        volume[component_[t]] += vertex(t, 0).dot(vertex(t, 1).cross(vertex(t, 2))) / 6.0;
    for (int c = 0; c < n_components_; ++c) {
        if (!(volume[c] > 0.0)) {
            std::ostringstream msg;
            msg << "inward orientation detected: component " << c << " has signed volume " << volume[c];
            throw ValidationError(msg.str());
        }
    }
}

Vec3 SurfaceMesh::centroid(int t) const
{
    return (vertex(t, 0) + vertex(t, 1) + vertex(t, 2)) / 3.0;
}

double SurfaceMesh::diameter(int t) const
{
    const Vec3 a = vertex(t, 0), b = vertex(t, 1), c = vertex(t, 2);
    return std::max({(a - b).norm(), (b - c).norm(), (c - a).norm()});
}

double SurfaceMesh::total_area() const
{
    return std::accumulate(areas_.begin(), areas_.end(), 0.0);
}

MeshStatistics mesh_statistics(const SurfaceMesh& mesh)
{
    MeshStatistics s;
    s.n_vertices = mesh.n_vertices();
    s.n_edges = mesh.n_edges();
    s.n_triangles = mesh.n_triangles();
    s.components = mesh.n_components();
    s.euler_characteristic = static_cast<int>(s.n_vertices) - static_cast<int>(s.n_edges) + static_cast<int>(s.n_triangles);
    s.h_min = std::numeric_limits<double>::infinity();
    for (const Edge& e : mesh.edges()) {
        const double len = (mesh.vertices()[e.v[0]] - mesh.vertices()[e.v[1]]).norm();
        s.h_max = std::max(s.h_max, len);
        s.h_min = std::min(s.h_min, len);
    }
    return s;
}

SurfaceMesh make_cube_mesh(const Vec3& center, double side, int n)
{
    if (n < 1)
        throw ValidationError("cube mesh needs n >= 1 subdivisions");
    if (!(side > 0.0))
        throw ValidationError("cube side must be positive");

    // lattice points (i,j,k) in {0..n}^3 on the boundary
    const int np = n + 1;
    std::vector<int> index(np * np * np, -1);
    std::vector<Vec3> vertices;
    auto lattice = [&](int i, int j, int k) {
        int& id = index[(i * np + j) * np + k];
        if (id < 0) {
            id = static_cast<int>(vertices.size());
            const Vec3 p(i, j, k);
            vertices.push_back(center + side * (p / n - Vec3::Constant(0.5)));
        }
        return id;
    };

    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(12 * n * n);
    // For each axis and side, (u,v) are chosen so that u x v points outward.
    for (int axis = 0; axis < 3; ++axis) {
        for (int hi = 0; hi < 2; ++hi) {
            int u = (axis + 1) % 3, v = (axis + 2) % 3;
            if (!hi)
                std::swap(u, v);
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    auto node = [&](int da, int db) {
                        int ijk[3];
                        ijk[axis] = hi ? n : 0;
                        ijk[u] = a + da;
                        ijk[v] = b + db;
                        return lattice(ijk[0], ijk[1], ijk[2]);
                    };
                    const int p00 = node(0, 0), p10 = node(1, 0), p11 = node(1, 1), p01 = node(0, 1);
                    triangles.push_back({p00, p10, p11});
                    triangles.push_back({p00, p11, p01});
                }// for
            }// for
        }// for
    }// for
    return SurfaceMesh(std::move(vertices), std::move(triangles));
}

SurfaceMesh merge_meshes(const std::vector<SurfaceMesh>& parts)
{
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    for (const SurfaceMesh& m : parts) {
        const int off = static_cast<int>(vertices.size());
        vertices.insert(vertices.end(), m.vertices().begin(), m.vertices().end());
        for (auto t : m.triangles())
            triangles.push_back({t[0] + off, t[1] + off, t[2] + off});
    }
    return SurfaceMesh(std::move(vertices), std::move(triangles));
}

}// namespace nlbem
