#include "ecert/fem/mesh.hpp"

#include "ecert/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numbers>

namespace ecert::fem {
namespace {

double cross(Point o, Point a, Point b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double segment_distance(Point p, Point a, Point b) {
    double dx = b.x - a.x, dy = b.y - a.y;
    double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, {a.x + t * dx, a.y + t * dy});
}

std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

} // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
           std::vector<BoundaryEdge> boundary_edges)
    : vertices_(std::move(vertices)), cells_(std::move(cells)), bedges_(std::move(boundary_edges)) {
    const int nv = vertex_count();
    if (nv < 3 || cells_.empty()) throw ConfigurationError("mesh needs at least one cell");
    for (const auto& p : vertices_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw ConfigurationError("mesh vertex with non-finite coordinate");

    area_.resize(cells_.size());
    grads_.resize(cells_.size());
    // owner cell and local orientation of each edge
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
    for (int c = 0; c < cell_count(); ++c) {
        const auto& t = cells_[c];
        for (int v : t)
            if (v < 0 || v >= nv)
                throw ConfigurationError(fmt::format("cell {} references vertex {} out of range", c, v));
        Point p0 = vertices_[t[0]], p1 = vertices_[t[1]], p2 = vertices_[t[2]];
        double twice = cross(p0, p1, p2);
        double scale = std::max({distance(p0, p1), distance(p1, p2), distance(p2, p0)});
        if (!(twice > 1e-14 * scale * scale))
            throw AssemblyError(fmt::format("cell {} is degenerate or negatively oriented", c));
        area_[c] = 0.5 * twice;
        total_area_ += area_[c];
        // grad of barycentric lambda_k = rot90(opposite edge) / (2 area)
        for (int k = 0; k < 3; ++k) {
            Point a = vertices_[t[(k + 1) % 3]], b = vertices_[t[(k + 2) % 3]];
            grads_[c][k] = {(a.y - b.y) / twice, (b.x - a.x) / twice};
        }
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            h_max_ = std::max(h_max_, distance(vertices_[a], vertices_[b]));
            edges[edge_key(a, b)].push_back({a, b});
        }
    }

    std::map<std::pair<int, int>, int> tagged;
    for (std::size_t i = 0; i < bedges_.size(); ++i) {
        auto key = edge_key(bedges_[i].v[0], bedges_[i].v[1]);
        if (!tagged.emplace(key, static_cast<int>(i)).second)
            throw ConfigurationError(
                fmt::format("boundary edge {}-{} listed twice", key.first, key.second));
    }
    // next[v] = successor along the boundary with the interior on the left
    std::vector<int> next(nv, -1), indeg(nv, 0);
    for (const auto& [key, uses] : edges) {
        if (uses.size() > 2)
            throw ConfigurationError(fmt::format("edge {}-{} shared by more than two cells", key.first, key.second));
        bool on_boundary = uses.size() == 1;
        bool listed = tagged.count(key) != 0;
        if (on_boundary && !listed)
            throw ConfigurationError(fmt::format("boundary edge {}-{} carries no tag", key.first, key.second));
        if (!on_boundary && listed)
            throw ConfigurationError(fmt::format("tagged edge {}-{} is interior", key.first, key.second));
        if (on_boundary) {
            auto [a, b] = uses.front();
            if (next[a] != -1)
                throw ConfigurationError(fmt::format("boundary does not form simple loops at vertex {}", a));
            next[a] = b;
            ++indeg[b];
        }
    }
    if (tagged.size() != bedges_.size()) throw ConfigurationError("inconsistent boundary edge list");
    for (const auto& [key, idx] : tagged)
        if (!edges.count(key))
            throw ConfigurationError(fmt::format("tagged edge {}-{} is not a mesh edge", key.first, key.second));

    dirichlet_vertex_.assign(nv, 0);
    boundary_vertex_.assign(nv, 0);
    for (const auto& e : bedges_) {
        for (int v : e.v) {
            boundary_vertex_[v] = 1;
            if (e.tag == BoundaryTag::dirichlet) dirichlet_vertex_[v] = 1;
        }
    }
    for (int v = 0; v < nv; ++v)
        if (boundary_vertex_[v] && (next[v] == -1 || indeg[v] != 1))
            throw ConfigurationError(fmt::format("boundary does not form closed loops at vertex {}", v));

    std::vector<int> bverts;
    for (int v = 0; v < nv; ++v)
        if (boundary_vertex_[v]) bverts.push_back(v);
    for (std::size_t i = 0; i < bverts.size(); ++i)
        for (std::size_t j = i + 1; j < bverts.size(); ++j)
            diameter_ = std::max(diameter_, distance(vertices_[bverts[i]], vertices_[bverts[j]]));

    // convex iff one loop with no reflex turn
    int loops = 0;
    std::vector<char> seen(nv, 0);
    convex_ = true;
    for (int v : bverts) {
        if (seen[v]) continue;
        ++loops;
        int u = v;
        do {
            seen[u] = 1;
            int w = next[u], x = next[w];
            Point a = vertices_[u], b = vertices_[w], c = vertices_[x];
            double len = distance(a, b) * distance(b, c);
            if (cross(a, b, c) < -1e-12 * len) convex_ = false;
            u = w;
        } while (u != v);
    }
    if (loops != 1) convex_ = false;
    build_locator();
}

void Mesh::build_locator() {
    double x0 = vertices_[0].x, x1 = x0, y0 = vertices_[0].y, y1 = y0;
    for (const auto& p : vertices_) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    int side = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(cells_.size()) / 2.0)));
    gnx_ = gny_ = side;
    gx0_ = x0;
    gy0_ = y0;
    gdx_ = std::max(x1 - x0, 1e-300) / gnx_;
    gdy_ = std::max(y1 - y0, 1e-300) / gny_;
    buckets_.assign(static_cast<std::size_t>(gnx_) * gny_, {});
    auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi - 1); };
    for (int c = 0; c < cell_count(); ++c) {
        double bx0 = 1e300, bx1 = -1e300, by0 = 1e300, by1 = -1e300;
        for (int v : cells_[c]) {
            bx0 = std::min(bx0, vertices_[v].x);
            bx1 = std::max(bx1, vertices_[v].x);
            by0 = std::min(by0, vertices_[v].y);
            by1 = std::max(by1, vertices_[v].y);
        }
        int i0 = clampi(static_cast<int>(std::floor((bx0 - gx0_) / gdx_)), gnx_);
        int i1 = clampi(static_cast<int>(std::floor((bx1 - gx0_) / gdx_)), gnx_);
        int j0 = clampi(static_cast<int>(std::floor((by0 - gy0_) / gdy_)), gny_);
        int j1 = clampi(static_cast<int>(std::floor((by1 - gy0_) / gdy_)), gny_);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j) * gnx_ + i].push_back(c);
    }
}

Point Mesh::centroid(int cell) const {
    const auto& t = cells_[cell];
    return {(vertices_[t[0]].x + vertices_[t[1]].x + vertices_[t[2]].x) / 3.0,
            (vertices_[t[0]].y + vertices_[t[1]].y + vertices_[t[2]].y) / 3.0};
}

double Mesh::boundary_measure(BoundaryTag tag) const {
    double s = 0.0;
    for (const auto& e : bedges_)
        if (e.tag == tag) s += distance(vertices_[e.v[0]], vertices_[e.v[1]]);
    return s;
}

double Mesh::boundary_distance(Point p) const {
    double d = 1e300;
    for (const auto& e : bedges_)
        d = std::min(d, segment_distance(p, vertices_[e.v[0]], vertices_[e.v[1]]));
    return d;
}

std::optional<Location> Mesh::locate(Point p) const {
    int i = static_cast<int>(std::floor((p.x - gx0_) / gdx_));
    int j = static_cast<int>(std::floor((p.y - gy0_) / gdy_));
    const double tol = 1e-12;
    if (i < -1 || j < -1 || i > gnx_ || j > gny_) return std::nullopt;
    i = std::clamp(i, 0, gnx_ - 1);
    j = std::clamp(j, 0, gny_ - 1);
    std::optional<Location> best;
    double best_min = -1e300;
    for (int c : buckets_[static_cast<std::size_t>(j) * gnx_ + i]) {
        const auto& t = cells_[c];
        Point a = vertices_[t[0]], b = vertices_[t[1]], d = vertices_[t[2]];
        double twice = 2.0 * area_[c];
        std::array<double, 3> l = {cross(p, b, d) / twice, cross(a, p, d) / twice, cross(a, b, p) / twice};
        double mn = std::min({l[0], l[1], l[2]});
        if (mn >= -tol && mn > best_min) {
            best_min = mn;
            best = Location{c, l};
        }
    }
    return best;
}

int Mesh::nearest_vertex(Point p) const {
    int best = 0;
    double bd = 1e300;
    for (int v = 0; v < vertex_count(); ++v) {
        double d = distance(p, vertices_[v]);
        if (d < bd) {
            bd = d;
            best = v;
        }
    }
    return best;
}

Mesh Mesh::retagged(BoundaryTag tag) const {
    auto edges = bedges_;
    for (auto& e : edges) e.tag = tag;
    return Mesh(vertices_, cells_, std::move(edges));
}

std::uint64_t Mesh::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    for (const auto& p : vertices_) {
        mix(&p.x, sizeof(double));
        mix(&p.y, sizeof(double));
    }
    for (const auto& c : cells_) mix(c.data(), sizeof(int) * 3);
    for (const auto& e : bedges_) {
        mix(e.v.data(), sizeof(int) * 2);
        char t = e.tag == BoundaryTag::dirichlet ? 'D' : 'N';
        mix(&t, 1);
    }
    return h;
}

DomainGeometry Mesh::geometry(std::optional<double> poincare_override) const {
    DomainGeometry g;
    g.n = Dimension(2);
    g.volume = total_area_;
    g.diameter = diameter_;
    g.gammaD_measure = boundary_measure(BoundaryTag::dirichlet);
    g.gamma_measure = boundary_measure(BoundaryTag::neumann);
    g.convex = convex_;
    if (poincare_override || convex_) g.poincare = constants::poincare_default(g, poincare_override);
    g.validate();
    return g;
}

SquareTags SquareTags::uniform(BoundaryTag tag) { return per_side(tag, tag, tag, tag); }

SquareTags SquareTags::per_side(BoundaryTag bottom, BoundaryTag right, BoundaryTag top,
                                BoundaryTag left) {
    SquareTags s;
    s.sides[0] = {{0.0, 1.0, bottom}};
    s.sides[1] = {{0.0, 1.0, right}};
    s.sides[2] = {{0.0, 1.0, top}};
    s.sides[3] = {{0.0, 1.0, left}};
    return s;
}

void SquareTags::validate() const {
    static const char* names[] = {"bottom", "right", "top", "left"};
    const double tol = 1e-12;
    for (int k = 0; k < 4; ++k) {
        const auto& segs = sides[k];
        if (segs.empty()) throw ConfigurationError(fmt::format("tag-spec: {} side has no segments", names[k]));
        double at = 0.0;
        for (const auto& s : segs) {
            if (!(s.to > s.from))
                throw ConfigurationError(fmt::format("tag-spec: {} side has an empty segment [{}, {}]", names[k], s.from, s.to));
            if (std::abs(s.from - at) > tol)
                throw ConfigurationError(fmt::format("tag-spec: {} side has a {} at {}", names[k],
                                                     s.from > at ? "gap" : "overlap", at));
            at = s.to;
        }
        if (std::abs(at - 1.0) > tol)
            throw ConfigurationError(fmt::format("tag-spec: {} side is not covered up to 1", names[k]));
    }
}

Mesh build_structured_square(int m, const SquareTags& tags) {
    if (m < 2) throw ConfigurationError(fmt::format("structured square requires m >= 2, got {}", m));
    tags.validate();
    auto id = [m](int i, int j) { return j * (m + 1) + i; };
    std::vector<Point> verts;
    verts.reserve(static_cast<std::size_t>(m + 1) * (m + 1));
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= m; ++i) verts.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});
    std::vector<std::array<int, 3>> cells;
    cells.reserve(2 * static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    auto tag_at = [&tags](int side, double t) {
        for (const auto& s : tags.sides[side])
            if (t >= s.from && t <= s.to) return s.tag;
        return tags.sides[side].back().tag;
    };
    std::vector<BoundaryEdge> edges;
    for (int i = 0; i < m; ++i) {
        double t = (i + 0.5) / m;
        edges.push_back({{id(i, 0), id(i + 1, 0)}, tag_at(0, t)});
        edges.push_back({{id(m, i), id(m, i + 1)}, tag_at(1, t)});
        edges.push_back({{id(i, m), id(i + 1, m)}, tag_at(2, t)});
        edges.push_back({{id(0, i), id(0, i + 1)}, tag_at(3, t)});
    }
    return Mesh(std::move(verts), std::move(cells), std::move(edges));
}

Mesh build_disk(int m, BoundaryTag tag) {
    if (m < 1) throw ConfigurationError(fmt::format("disk mesh requires m >= 1, got {}", m));
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<Point> verts{{0.0, 0.0}};
    std::vector<int> ring_start{0};
    for (int k = 1; k <= m; ++k) {
        ring_start.push_back(static_cast<int>(verts.size()));
        double r = static_cast<double>(k) / m;
        for (int j = 0; j < 6 * k; ++j) {
            double th = two_pi * j / (6.0 * k);
            verts.push_back({r * std::cos(th), r * std::sin(th)});
        }
    }
    if (m > 0) {
        // exact unit radius on the boundary ring
        for (int j = 0; j < 6 * m; ++j) {
            Point& p = verts[ring_start[m] + j];
            double len = std::hypot(p.x, p.y);
            p.x /= len;
            p.y /= len;
        }
    }
    std::vector<std::array<int, 3>> cells;
    auto add = [&](int a, int b, int c) {
        const Point &pa = verts[a], &pb = verts[b], &pc = verts[c];
        if (cross(pa, pb, pc) > 0)
            cells.push_back({a, b, c});
        else
            cells.push_back({a, c, b});
    };
    for (int j = 0; j < 6; ++j) add(0, ring_start[1] + j, ring_start[1] + (j + 1) % 6);
    for (int k = 2; k <= m; ++k) {
        int ni = 6 * (k - 1), no = 6 * k;
        int i = 0, j = 0;
        while (i < ni || j < no) {
            // advance along whichever ring has the smaller next angle
            double ti = static_cast<double>(i + 1) / ni;
            double to = static_cast<double>(j + 1) / no;
            int a = ring_start[k - 1] + i % ni;
            int b = ring_start[k] + j % no;
            if (j < no && (i >= ni || to <= ti)) {
                add(a, b, ring_start[k] + (j + 1) % no);
                ++j;
            } else {
                add(a, b, ring_start[k - 1] + (i + 1) % ni);
                ++i;
            }
        }
    }
    std::vector<BoundaryEdge> edges;
    for (int j = 0; j < 6 * m; ++j)
        edges.push_back({{ring_start[m] + j, ring_start[m] + (j + 1) % (6 * m)}, tag});
    return Mesh(std::move(verts), std::move(cells), std::move(edges));
}

} // namespace ecert::fem
