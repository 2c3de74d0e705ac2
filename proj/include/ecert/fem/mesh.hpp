#pragma once

#include "ecert/problem.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ecert::fem {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Point a, Point b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

enum class BoundaryTag { dirichlet, neumann };

struct BoundaryEdge {
    std::array<int, 2> v;
    BoundaryTag tag;
};

struct Location {
    int cell;
    std::array<double, 3> bary;
};

// Triangulated polygon with tagged boundary edges.
class Mesh {
public:
    Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
         std::vector<BoundaryEdge> boundary_edges);

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& cells() const { return cells_; }
    const std::vector<BoundaryEdge>& boundary_edges() const { return bedges_; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int cell_count() const { return static_cast<int>(cells_.size()); }

    double h_max() const { return h_max_; }
    double area(int cell) const { return area_[cell]; }
    // Gradient of the barycentric basis function of local vertex k on a cell.
    const std::array<std::array<double, 2>, 3>& basis_gradients(int cell) const { return grads_[cell]; }
    Point centroid(int cell) const;

    double total_area() const { return total_area_; }
    double boundary_measure(BoundaryTag tag) const;
    double diameter() const { return diameter_; }
    bool convex() const { return convex_; }
    bool has_dirichlet() const { return boundary_measure(BoundaryTag::dirichlet) > 0.0; }
    bool is_dirichlet_vertex(int v) const { return dirichlet_vertex_[v] != 0; }
    bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
    // Distance from p to the boundary polygon.
    double boundary_distance(Point p) const;

    std::optional<Location> locate(Point p) const;
    int nearest_vertex(Point p) const;

    // Copy with every boundary edge carrying the given tag.
    Mesh retagged(BoundaryTag tag) const;
    // Stable content hash (coordinates, connectivity and tags).
    std::uint64_t hash() const;

    DomainGeometry geometry(std::optional<double> poincare_override = std::nullopt) const;

private:
    void build_locator();

    std::vector<Point> vertices_;
    std::vector<std::array<int, 3>> cells_;
    std::vector<BoundaryEdge> bedges_;
    std::vector<double> area_;
    std::vector<std::array<std::array<double, 2>, 3>> grads_;
    std::vector<char> dirichlet_vertex_;
    std::vector<char> boundary_vertex_;
    double h_max_ = 0.0;
    double total_area_ = 0.0;
    double diameter_ = 0.0;
    bool convex_ = false;

    // uniform bucket grid over cell bounding boxes
    double gx0_ = 0, gy0_ = 0, gdx_ = 1, gdy_ = 1;
    int gnx_ = 1, gny_ = 1;
    std::vector<std::vector<int>> buckets_;
};

// Tag assignment for one side of the unit square, parametrised by [0, 1].
struct TagSegment {
    double from;
    double to;
    BoundaryTag tag;
};

// Sides in the order bottom, right, top, left; the parameter is x on bottom
// and top, y on left and right. Each side is covered by
// contiguous segments; an edge takes the tag of the segment holding its
// midpoint.
struct SquareTags {
    std::array<std::vector<TagSegment>, 4> sides;

    static SquareTags uniform(BoundaryTag tag);
    static SquareTags per_side(BoundaryTag bottom, BoundaryTag right, BoundaryTag top,
                               BoundaryTag left);
    void validate() const;
};

Mesh build_structured_square(int m, const SquareTags& tags);
Mesh build_disk(int m, BoundaryTag tag = BoundaryTag::dirichlet);

// Plain-text mesh format: header "n_vertices n_cells n_bedges", vertex
// coordinates, cell triples, then "v0 v1 D|N" lines.
void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is, const std::string& source_name = "<mesh>");
Mesh read_mesh_file(const std::string& path);

} // namespace ecert::fem
