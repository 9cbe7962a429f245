#include "nlbem/surface_mesh.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace nlbem {

namespace {

// Next line that is neither blank nor a '#' comment.
bool next_data_line(std::istream& in, std::string& line)
{
    while (std::getline(in, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#')
            continue;
        return true;
    }
    return false;
}

[[noreturn]] void parse_fail(const std::string& what)
{
    throw ValidationError("mesh parse error: " + what);
}

}// namespace

MeshFormat mesh_format_from_string(const std::string& name)
{
    if (name == "off")
        return MeshFormat::off;
    if (name == "gmsh" || name == "msh" || name == "gmsh-ascii-v2")
        return MeshFormat::gmsh_ascii_v2;
    throw ValidationError("unknown mesh format '" + name + "' (expected off or gmsh)");
}

SurfaceMesh load_mesh(const std::string& path, MeshFormat format)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open mesh file " + path);
    return format == MeshFormat::off ? read_off(in) : read_gmsh_v2(in);
}

//
// OFF: "OFF" header, "nv nf ne", nv vertex lines, nf face lines "3 i j k".
//
SurfaceMesh read_off(std::istream& in)
{
    std::string line;
    if (!next_data_line(in, line))
        parse_fail("empty OFF file");
    std::istringstream head(line);
    std::string magic;
    head >> magic;
    if (magic != "OFF")
        parse_fail("missing OFF header");

    long nv = -1, nf = -1, ne = 0;
    if (!(head >> nv)) {
        if (!next_data_line(in, line))
            parse_fail("missing OFF counts");
        std::istringstream counts(line);
        counts >> nv >> nf >> ne;
    }
    else
        head >> nf >> ne;
    if (nv <= 0 || nf <= 0)
        parse_fail("bad OFF counts");

    std::vector<Vec3> vertices(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_data_line(in, line))
            parse_fail("truncated vertex list");
        std::istringstream ls(line);
        if (!(ls >> vertices[i][0] >> vertices[i][1] >> vertices[i][2]))
            parse_fail("bad vertex line " + std::to_string(i));
    }
    std::vector<std::array<int, 3>> triangles(nf);
    for (long i = 0; i < nf; ++i) {
        if (!next_data_line(in, line))
            parse_fail("truncated face list");
        std::istringstream ls(line);
        int k = 0;
        if (!(ls >> k) || k != 3)
            parse_fail("face " + std::to_string(i) + " is not a triangle");
        for (int j = 0; j < 3; ++j) {
            long id;
            if (!(ls >> id))
                parse_fail("bad face line " + std::to_string(i));
            if (id < 0 || id >= nv)
                parse_fail("face " + std::to_string(i) + " index out of range");
            triangles[i][j] = static_cast<int>(id);
        }
    }
    return SurfaceMesh(std::move(vertices), std::move(triangles));
}

//
// Gmsh ASCII 2.x: $MeshFormat, $Nodes, $Elements. Only type-2 elements.
//
SurfaceMesh read_gmsh_v2(std::istream& in)
{
    std::string line;
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::map<long, int> node_id;
    bool have_format = false, have_nodes = false, have_elements = false;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line == "$MeshFormat") {
            if (!std::getline(in, line))
                parse_fail("truncated $MeshFormat");
            std::istringstream ls(line);
            double version;
            int file_type;
            if (!(ls >> version >> file_type))
                parse_fail("bad $MeshFormat line");
            if (version < 2.0 || version >= 3.0)
                parse_fail("only Gmsh ASCII version 2 is supported");
            if (file_type != 0)
                parse_fail("binary Gmsh files are not supported");
            have_format = true;
        }
        else if (line == "$Nodes") {
            long n;
            if (!(in >> n) || n <= 0)
                parse_fail("bad node count");
            vertices.resize(n);
            for (long i = 0; i < n; ++i) {
                long tag;
                if (!(in >> tag >> vertices[i][0] >> vertices[i][1] >> vertices[i][2]))
                    parse_fail("bad node line");
                node_id[tag] = static_cast<int>(i);
            }
            have_nodes = true;
        }
        else if (line == "$Elements") {
            long n;
            if (!(in >> n) || n <= 0)
                parse_fail("bad element count");
            std::getline(in, line);
            for (long i = 0; i < n; ++i) {
                if (!std::getline(in, line))
                    parse_fail("truncated element list");
                std::istringstream ls(line);
                long tag;
                int type, ntags;
                if (!(ls >> tag >> type >> ntags))
                    parse_fail("bad element line");
                if (type != 2)
                    parse_fail("element " + std::to_string(tag) + " has type " + std::to_string(type) +
                               "; only 3-node triangles (type 2) are accepted");
                for (int j = 0; j < ntags; ++j) {
                    long dummy;
                    ls >> dummy;
                }
                std::array<int, 3> tri;
                for (int j = 0; j < 3; ++j) {
                    long node;
                    if (!(ls >> node))
                        parse_fail("bad triangle nodes in element " + std::to_string(tag));
                    auto it = node_id.find(node);
                    if (it == node_id.end())
                        parse_fail("element " + std::to_string(tag) + " references unknown node");
                    tri[j] = it->second;
                }
                triangles.push_back(tri);
            }
            have_elements = true;
        }
    }
    if (!have_format || !have_nodes || !have_elements)
        parse_fail("missing $MeshFormat, $Nodes or $Elements section");
    return SurfaceMesh(std::move(vertices), std::move(triangles));
}

void write_off(std::ostream& out, const SurfaceMesh& mesh)
{
    out << "OFF\n" << mesh.n_vertices() << ' ' << mesh.n_triangles() << " 0\n" << std::setprecision(17);
    for (const Vec3& p : mesh.vertices())
        out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
    for (const auto& t : mesh.triangles())
        out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_gmsh_v2(std::ostream& out, const SurfaceMesh& mesh)
{
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n" << mesh.n_vertices() << '\n' << std::setprecision(17);
    for (size_t i = 0; i < mesh.n_vertices(); ++i) {
        const Vec3& p = mesh.vertices()[i];
        out << i + 1 << ' ' << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
    }
    out << "$EndNodes\n$Elements\n" << mesh.n_triangles() << '\n';
    for (size_t i = 0; i < mesh.n_triangles(); ++i) {
        const auto& t = mesh.triangles()[i];
        out << i + 1 << " 2 2 1 1 " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
    out << "$EndElements\n";
}

}// namespace nlbem
