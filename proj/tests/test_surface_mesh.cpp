#include <doctest.h>

#include <sstream>

#include "nlbem/surface_mesh.hpp"

using namespace nlbem;

TEST_SUITE("surface_mesh") {

TEST_CASE("cube mesh counts and topology")
{
    for (int n : {1, 2, 3, 4}) {
        const SurfaceMesh m = make_cube_mesh(Vec3(0.5, -1.0, 2.0), 2.0, n);
        const MeshStatistics st = mesh_statistics(m);
        CHECK(st.n_triangles == size_t(12 * n * n));
        CHECK(st.n_edges == size_t(18 * n * n));
        CHECK(st.n_vertices == size_t(6 * n * n + 2));
        CHECK(st.euler_characteristic == 2);
        CHECK(st.components == 1);
        CHECK(m.total_area() == doctest::Approx(24.0).epsilon(1e-13));
        // diagonal split: longest edge is the face diagonal
        CHECK(st.h_max == doctest::Approx(2.0 * std::sqrt(2.0) / n).epsilon(1e-13));
    }
}

TEST_CASE("normals point outward")
{
    const Vec3 c(1.0, 0.0, 0.0);
    const SurfaceMesh m = make_cube_mesh(c, 1.0, 3);
    for (size_t t = 0; t < m.n_triangles(); ++t)
        CHECK(m.normals()[t].dot(m.centroid(int(t)) - c) > 0.0);
}

TEST_CASE("every edge has two triangles with opposite traversal")
{
    const SurfaceMesh m = make_cube_mesh(Vec3::Zero(), 1.0, 2);
    for (const Edge& e : m.edges()) {
        CHECK(e.v[0] < e.v[1]);
        CHECK(e.tri[0] < e.tri[1]);
        int dir[2];
        for (int s = 0; s < 2; ++s) {
            const auto& tri = m.triangles()[e.tri[s]];
            for (int k = 0; k < 3; ++k)
                if (tri[k] == e.v[0])
                    dir[s] = tri[(k + 1) % 3] == e.v[1] ? 1 : -1;
        }
        CHECK(dir[0] == -dir[1]);
    }
}

TEST_CASE("merged cubes give two components")
{
    const SurfaceMesh m =
        merge_meshes({make_cube_mesh(Vec3(-0.75, 0, 0), 1.0, 2), make_cube_mesh(Vec3(0.75, 0, 0), 1.0, 2)});
    CHECK(m.n_components() == 2);
    CHECK(mesh_statistics(m).euler_characteristic == 4);
}

TEST_CASE("OFF and gmsh round trips")
{
    const SurfaceMesh m = make_cube_mesh(Vec3(0.1, 0.2, 0.3), 1.5, 2);
    std::stringstream off, msh;
    write_off(off, m);
    write_gmsh_v2(msh, m);
    const SurfaceMesh a = read_off(off), b = read_gmsh_v2(msh);
    for (const SurfaceMesh* r : {&a, &b}) {
        REQUIRE(r->n_triangles() == m.n_triangles());
        REQUIRE(r->n_vertices() == m.n_vertices());
        for (size_t v = 0; v < m.n_vertices(); ++v)
            CHECK((r->vertices()[v] - m.vertices()[v]).norm() < 1e-15);
    }
}

TEST_CASE("invalid surfaces are rejected")
{
    const std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    // open: one face of a tetrahedron missing
    CHECK_THROWS_AS(SurfaceMesh(v, {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}}), ValidationError);
    // inward orientation
    CHECK_THROWS_AS(SurfaceMesh(v, {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}}), ValidationError);
    // the outward tetrahedron is fine
    CHECK_NOTHROW(SurfaceMesh(v, {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}}));
    std::istringstream bad("OFF\n3 1 0\n0 0 0\n1 0 0\n");
    CHECK_THROWS_AS(read_off(bad), ValidationError);
}

}
