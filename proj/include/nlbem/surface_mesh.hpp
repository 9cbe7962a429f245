#pragma once

#include <array>
#include <string>
#include <vector>

#include "nlbem/common.hpp"

namespace nlbem {

struct Edge {
    std::array<int, 2> v;     // v[0] < v[1]; global orientation v[0] -> v[1]
    std::array<int, 2> tri;   // adjacent triangles, tri[0] < tri[1]
};

// Closed, outward oriented triangulated surface. Immutable once built.
class SurfaceMesh {
public:
    SurfaceMesh() = default;

    // Validates and completes the mesh (edges, normals, areas, components).
    // Throws ValidationError for open/non-manifold/inward surfaces.
    SurfaceMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles);

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Vec3>& normals() const { return normals_; }
    const std::vector<double>& areas() const { return areas_; }

    // edge index of the edge opposite local vertex k of triangle t
    int triangle_edge(int t, int k) const { return tri_edges_[t][k]; }
    int component_of(int t) const { return component_[t]; }
    int n_components() const { return n_components_; }

    size_t n_vertices() const { return vertices_.size(); }
    size_t n_edges() const { return edges_.size(); }
    size_t n_triangles() const { return triangles_.size(); }

    Vec3 vertex(int t, int k) const { return vertices_[triangles_[t][k]]; }
    Vec3 centroid(int t) const;
    double diameter(int t) const;
    double total_area() const;

private:
    std::vector<Vec3> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> tri_edges_;
    std::vector<Vec3> normals_;
    std::vector<double> areas_;
    std::vector<int> component_;
    int n_components_ = 0;
};

struct MeshStatistics {
    double h_max = 0, h_min = 0;
    size_t n_vertices = 0, n_edges = 0, n_triangles = 0;
    int components = 0;
    int euler_characteristic = 0;
};

MeshStatistics mesh_statistics(const SurfaceMesh& mesh);

enum class MeshFormat { gmsh_ascii_v2, off };

MeshFormat mesh_format_from_string(const std::string& name);

SurfaceMesh load_mesh(const std::string& path, MeshFormat format);
SurfaceMesh read_off(std::istream& in);
SurfaceMesh read_gmsh_v2(std::istream& in);
void write_off(std::ostream& out, const SurfaceMesh& mesh);
void write_gmsh_v2(std::ostream& out, const SurfaceMesh& mesh);

// Axis aligned cube, every face an n x n grid of squares split along a fixed diagonal.
SurfaceMesh make_cube_mesh(const Vec3& center, double side, int n);

// Disjoint union of meshes (vertex indices shifted).
SurfaceMesh merge_meshes(const std::vector<SurfaceMesh>& parts);

}// namespace nlbem
