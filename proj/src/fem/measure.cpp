#include "ecert/fem/measure.hpp"

#include "ecert/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ecert::fem {
namespace {

double cross2(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

// Area of the part of a triangle where the linear function with vertex
// values s[] exceeds k.
double superlevel_area(const std::array<Point, 3>& p, const std::array<double, 3>& s, double k,
                       double cell_area) {
    int above = 0;
    for (double v : s)
        if (v > k) ++above;
    if (above == 0) return 0.0;
    if (above == 3) return cell_area;
    // clip the polygon against s > k
    std::vector<Point> poly;
    std::vector<double> val;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3;
        bool in_i = s[i] > k, in_j = s[j] > k;
        if (in_i) poly.push_back(p[i]);
        if (in_i != in_j) {
            double t = (k - s[i]) / (s[j] - s[i]);
            poly.push_back({p[i].x + t * (p[j].x - p[i].x), p[i].y + t * (p[j].y - p[i].y)});
        }
    }
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& u = poly[i];
        const Point& v = poly[(i + 1) % poly.size()];
        a += u.x * v.y - u.y * v.x;
    }
    return std::abs(a) / 2.0;
}

// Signed area of disk(0, r) intersected with triangle (0, A, B).
double tri_disk(double ax, double ay, double bx, double by, double r) {
    double r2 = r * r;
    double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by;
    auto sector = [r2](double px, double py, double qx, double qy) {
        return 0.5 * r2 * std::atan2(cross2(px, py, qx, qy), px * qx + py * qy);
    };
    if (a2 <= r2 && b2 <= r2) return 0.5 * cross2(ax, ay, bx, by);
    double dx = bx - ax, dy = by - ay;
    double qa = dx * dx + dy * dy;
    if (qa == 0.0) return 0.0;
    double qb = 2.0 * (ax * dx + ay * dy);
    double qc = a2 - r2;
    double disc = qb * qb - 4.0 * qa * qc;
    if (disc <= 0.0) return sector(ax, ay, bx, by);
    double s = std::sqrt(disc);
    double t1 = (-qb - s) / (2.0 * qa), t2 = (-qb + s) / (2.0 * qa);
    if (a2 <= r2) {
        double px = ax + t2 * dx, py = ay + t2 * dy;
        return 0.5 * cross2(ax, ay, px, py) + sector(px, py, bx, by);
    }
    if (b2 <= r2) {
        double px = ax + t1 * dx, py = ay + t1 * dy;
        return sector(ax, ay, px, py) + 0.5 * cross2(px, py, bx, by);
    }
    if (t1 > 0.0 && t2 < 1.0) {
        double px = ax + t1 * dx, py = ay + t1 * dy;
        double qx = ax + t2 * dx, qy = ay + t2 * dy;
        return sector(ax, ay, px, py) + 0.5 * cross2(px, py, qx, qy) + sector(qx, qy, bx, by);
    }
    return sector(ax, ay, bx, by);
}

double point_triangle_distance(Point x, const std::array<Point, 3>& p) {
    double t0 = cross2(p[1].x - p[0].x, p[1].y - p[0].y, x.x - p[0].x, x.y - p[0].y);
    double t1 = cross2(p[2].x - p[1].x, p[2].y - p[1].y, x.x - p[1].x, x.y - p[1].y);
    double t2 = cross2(p[0].x - p[2].x, p[0].y - p[2].y, x.x - p[2].x, x.y - p[2].y);
    if (t0 >= 0 && t1 >= 0 && t2 >= 0) return 0.0;
    double d = 1e300;
    for (int i = 0; i < 3; ++i) {
        Point a = p[i], b = p[(i + 1) % 3];
        double dx = b.x - a.x, dy = b.y - a.y;
        double t = std::clamp(((x.x - a.x) * dx + (x.y - a.y) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
        d = std::min(d, distance(x, {a.x + t * dx, a.y + t * dy}));
    }
    return d;
}

std::array<Point, 3> corners(const Mesh& mesh, int c) {
    const auto& t = mesh.cells()[c];
    return {mesh.vertices()[t[0]], mesh.vertices()[t[1]], mesh.vertices()[t[2]]};
}

} // namespace

std::vector<Vec2> cell_gradients(const DiscreteField& u, const Mesh& mesh) {
    u.check(mesh);
    std::vector<Vec2> out(mesh.cell_count());
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto& t = mesh.cells()[c];
        const auto& g = mesh.basis_gradients(c);
        Vec2 s{0.0, 0.0};
        for (int k = 0; k < 3; ++k) {
            s[0] += u[t[k]] * g[k][0];
            s[1] += u[t[k]] * g[k][1];
        }
        out[c] = s;
    }
    return out;
}

double grad_norm(const DiscreteField& u, const Mesh& mesh, double q) {
    if (!(q >= 1.0)) throw DomainError(fmt::format("gradient norm requires q >= 1, got {}", q));
    auto g = cell_gradients(u, mesh);
    if (std::isinf(q)) {
        double m = 0.0;
        for (const auto& v : g) m = std::max(m, std::hypot(v[0], v[1]));
        return m;
    }
    double s = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c)
        s += mesh.area(c) * std::pow(std::hypot(g[c][0], g[c][1]), q);
    return std::pow(s, 1.0 / q);
}

const std::vector<QuadPoint>& rule_degree2() {
    static const std::vector<QuadPoint> r = {
        {0.5, 0.5, 0.0, 1.0 / 3.0}, {0.0, 0.5, 0.5, 1.0 / 3.0}, {0.5, 0.0, 0.5, 1.0 / 3.0}};
    return r;
}

const std::vector<QuadPoint>& rule_degree5() {
    static const std::vector<QuadPoint> r = [] {
        const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
        const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
        return std::vector<QuadPoint>{{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
                                      {a1, b1, b1, w1}, {b1, a1, b1, w1}, {b1, b1, a1, w1},
                                      {a2, b2, b2, w2}, {b2, a2, b2, w2}, {b2, b2, a2, w2}};
    }();
    return r;
}

double integrate_cell(const Mesh& mesh, int cell, const std::vector<QuadPoint>& rule, int levels,
                      const std::function<double(Point, const std::array<double, 3>&)>& fn) {
    auto p = corners(mesh, cell);
    int N = 1 << std::max(0, levels);
    double sub_area = mesh.area(cell) / (static_cast<double>(N) * N);
    double total = 0.0;
    // sub-triangle corners in barycentric coordinates (l2, l3) on an N-grid
    auto eval_sub = [&](std::array<std::array<double, 2>, 3> s) {
        double acc = 0.0;
        for (const auto& q : rule) {
            double l2 = q.l1 * s[0][0] + q.l2 * s[1][0] + q.l3 * s[2][0];
            double l3 = q.l1 * s[0][1] + q.l2 * s[1][1] + q.l3 * s[2][1];
            double l1 = 1.0 - l2 - l3;
            Point x{l1 * p[0].x + l2 * p[1].x + l3 * p[2].x, l1 * p[0].y + l2 * p[1].y + l3 * p[2].y};
            acc += q.w * fn(x, {l1, l2, l3});
        }
        return acc * sub_area;
    };
    for (int i = 0; i < N; ++i) {
        for (int j = 0; i + j < N; ++j) {
            double a = static_cast<double>(i) / N, b = static_cast<double>(j) / N, d = 1.0 / N;
            total += eval_sub({{{a, b}, {a + d, b}, {a, b + d}}});
            if (i + j < N - 1) total += eval_sub({{{a + d, b}, {a + d, b + d}, {a, b + d}}});
        }
    }
    return total;
}

double lq_norm(const DiscreteField& u, const Mesh& mesh, double q, int levels) {
    u.check(mesh);
    if (!(q >= 1.0)) throw DomainError(fmt::format("Lebesgue norm requires q >= 1, got {}", q));
    if (std::isinf(q)) return sup_norm(u);
    double s = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto& t = mesh.cells()[c];
        double u0 = u[t[0]], u1 = u[t[1]], u2 = u[t[2]];
        if (q == 2.0) {
            s += mesh.area(c) / 6.0 * (u0 * u0 + u1 * u1 + u2 * u2 + u0 * u1 + u1 * u2 + u2 * u0);
        } else {
            s += integrate_cell(mesh, c, rule_degree2(), levels, [&](Point, const std::array<double, 3>& l) {
                return std::pow(std::abs(l[0] * u0 + l[1] * u1 + l[2] * u2), q);
            });
        }
    }
    return std::pow(s, 1.0 / q);
}

double sup_norm(const DiscreteField& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
}

std::optional<double> evaluate(const DiscreteField& u, const Mesh& mesh, Point p) {
    auto loc = mesh.locate(p);
    if (!loc) return std::nullopt;
    const auto& t = mesh.cells()[loc->cell];
    return loc->bary[0] * u[t[0]] + loc->bary[1] * u[t[1]] + loc->bary[2] * u[t[2]];
}

double level_measure(const DiscreteField& u, const Mesh& mesh, double k) {
    u.check(mesh);
    if (!(k >= 0.0)) throw DomainError(fmt::format("level measure requires k >= 0, got {}", k));
    double total = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto& t = mesh.cells()[c];
        auto p = corners(mesh, c);
        std::array<double, 3> s{u[t[0]], u[t[1]], u[t[2]]};
        std::array<double, 3> ns{-s[0], -s[1], -s[2]};
        total += superlevel_area(p, s, k, mesh.area(c)) + superlevel_area(p, ns, k, mesh.area(c));
    }
    return total;
}

std::vector<double> sola_truncate(std::span<const double> f, double m) {
    if (!(m >= 1.0)) throw DomainError(fmt::format("truncation level requires m >= 1, got {}", m));
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = m * f[i] / (m + std::abs(f[i]));
    return out;
}

double circle_triangle_area(Point center, double rho, Point a, Point b, Point c) {
    double ax = a.x - center.x, ay = a.y - center.y;
    double bx = b.x - center.x, by = b.y - center.y;
    double cx = c.x - center.x, cy = c.y - center.y;
    double s = tri_disk(ax, ay, bx, by, rho) + tri_disk(bx, by, cx, cy, rho) + tri_disk(cx, cy, ax, ay, rho);
    return std::abs(s);
}

std::vector<double> mollified_dirac(const Mesh& mesh, Point x, double rho) {
    if (!(rho > 0.0)) throw DomainError(fmt::format("mollifier radius must be positive, got {}", rho));
    if (!mesh.locate(x)) throw DomainError(fmt::format("source ({}, {}) lies outside the mesh", x.x, x.y));
    if (mesh.boundary_distance(x) < rho * (1.0 - 1e-12))
        throw DomainError(fmt::format("ball of radius {} around ({}, {}) exits the domain", rho, x.x, x.y));
    const double ball = std::numbers::pi * rho * rho;
    std::vector<double> out(mesh.cell_count(), 0.0);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        auto p = corners(mesh, c);
        if (point_triangle_distance(x, p) >= rho) continue;
        out[c] = circle_triangle_area(x, rho, p[0], p[1], p[2]) / ball / mesh.area(c);
    }
    return out;
}

CaccioppoliTerms caccioppoli_ratio(const DiscreteField& u, const Mesh& mesh, const Coefficient& coeff,
                                   Point x, double r, double R) {
    u.check(mesh);
    if (!(r > 0.0) || !(r < R))
        throw DomainError(fmt::format("Caccioppoli cutoff requires 0 < r < R (r={}, R={})", r, R));
    auto grads = cell_gradients(u, mesh);
    const auto& b = coeff.bounds();
    CaccioppoliTerms out{0.0, 0.0, 4.0 * b.a_upper / b.a_lower};
    const double slope = 1.0 / (R - r);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        auto p = corners(mesh, c);
        if (point_triangle_distance(x, p) >= R) continue;
        const auto& t = mesh.cells()[c];
        double g2 = grads[c][0] * grads[c][0] + grads[c][1] * grads[c][1];
        double u0 = u[t[0]], u1 = u[t[1]], u2 = u[t[2]];
        out.lhs += integrate_cell(mesh, c, rule_degree5(), 3, [&](Point y, const std::array<double, 3>&) {
            double eta = std::clamp((R - distance(x, y)) * slope, 0.0, 1.0);
            return eta * eta * g2;
        });
        out.rhs += integrate_cell(mesh, c, rule_degree5(), 3, [&](Point y, const std::array<double, 3>& l) {
            double d = distance(x, y);
            if (d <= r || d >= R) return 0.0;
            double v = l[0] * u0 + l[1] * u1 + l[2] * u2;
            return v * v * slope * slope;
        });
    }
    out.rhs *= out.prefactor;
    return out;
}

double dirichlet_extension_energy(const Mesh& mesh, const Coefficient& coeff,
                                  const std::vector<double>& g, double tol) {
    if (g.size() != static_cast<std::size_t>(mesh.vertex_count()))
        throw ConfigurationError("boundary data size does not match the mesh");
    if (!mesh.has_dirichlet()) return 0.0;
    ProblemData data = ProblemData::zero(mesh);
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (mesh.is_dirichlet_vertex(v)) data.g[v] = g[v];
    auto sys = assemble(mesh, coeff, data);
    auto u = solve(sys, tol);
    return grad_norm(u, mesh, 2.0);
}

} // namespace ecert::fem
