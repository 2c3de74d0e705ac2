#include "ecert/errors.hpp"
#include "ecert/fem/mesh.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace ecert::fem {

void write_mesh(std::ostream& os, const Mesh& mesh) {
    os << fmt::format("{} {} {}\n", mesh.vertex_count(), mesh.cell_count(), mesh.boundary_edges().size());
    for (const auto& p : mesh.vertices()) os << fmt::format("{:.17g} {:.17g}\n", p.x, p.y);
    for (const auto& c : mesh.cells()) os << fmt::format("{} {} {}\n", c[0], c[1], c[2]);
    for (const auto& e : mesh.boundary_edges())
        os << fmt::format("{} {} {}\n", e.v[0], e.v[1], e.tag == BoundaryTag::dirichlet ? 'D' : 'N');
}

Mesh read_mesh(std::istream& is, const std::string& source_name) {
    int line_no = 0;
    std::string line;
    auto next_line = [&]() -> std::istringstream {
        while (std::getline(is, line)) {
            ++line_no;
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            return std::istringstream(line);
        }
        throw ParseError(fmt::format("{}: unexpected end of file after line {}", source_name, line_no));
    };
    auto fail = [&](const std::string& what) {
        throw ParseError(fmt::format("{}:{}: {}", source_name, line_no, what));
    };
    long nv = 0, nc = 0, nb = 0;
    {
        auto ss = next_line();
        if (!(ss >> nv >> nc >> nb) || nv < 3 || nc < 1 || nb < 3)
            fail("header must be 'n_vertices n_cells n_bedges'");
    }
    std::vector<Point> verts(nv);
    for (auto& p : verts) {
        auto ss = next_line();
        if (!(ss >> p.x >> p.y)) fail("expected vertex coordinates 'x y'");
    }
    std::vector<std::array<int, 3>> cells(nc);
    for (auto& c : cells) {
        auto ss = next_line();
        if (!(ss >> c[0] >> c[1] >> c[2])) fail("expected cell triple 'v0 v1 v2'");
    }
    std::vector<BoundaryEdge> edges(nb);
    for (auto& e : edges) {
        auto ss = next_line();
        std::string tag;
        if (!(ss >> e.v[0] >> e.v[1] >> tag) || (tag != "D" && tag != "N"))
            fail("expected boundary edge 'v0 v1 D|N'");
        e.tag = tag == "D" ? BoundaryTag::dirichlet : BoundaryTag::neumann;
    }
    return Mesh(std::move(verts), std::move(cells), std::move(edges));
}

Mesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError(fmt::format("cannot open mesh file '{}'", path));
    return read_mesh(in, path);
}

} // namespace ecert::fem
