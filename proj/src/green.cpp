#include "ecert/green.hpp"

#include "ecert/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace ecert::green {

const char* kind_name(KernelKind k) {
    switch (k) {
    case KernelKind::green_mixed: return "green-mixed";
    case KernelKind::green_dirichlet: return "green-dirichlet";
    case KernelKind::neumann: return "neumann";
    }
    return "?";
}

fem::Mesh kernel_mesh(const fem::Mesh& mesh, KernelKind kind) {
    switch (kind) {
    case KernelKind::green_dirichlet: return mesh.retagged(fem::BoundaryTag::dirichlet);
    case KernelKind::neumann: return mesh.retagged(fem::BoundaryTag::neumann);
    case KernelKind::green_mixed:
        if (!mesh.has_dirichlet())
            throw WrongRegimeError("mixed Green kernel requires a Dirichlet boundary part");
        return mesh;
    }
    return mesh;
}

namespace {

std::vector<double> nodal_load(const fem::LinearSystem& sys, int v) {
    std::vector<double> load(sys.stiffness.n, 0.0);
    load[v] = 1.0;
    return load;
}

fem::DiscreteField solve_nodal(fem::LinearSystem sys, int v, double tol) {
    fem::set_load(sys, nodal_load(sys, v));
    return fem::solve(sys, tol);
}

KernelKind kind_of(const fem::Mesh& mesh) {
    if (!mesh.has_dirichlet()) return KernelKind::neumann;
    if (mesh.boundary_measure(fem::BoundaryTag::neumann) > 0.0) return KernelKind::green_mixed;
    return KernelKind::green_dirichlet;
}

} // namespace

KernelColumn kernel_column(const fem::Mesh& mesh, const fem::Coefficient& coeff, Point x, double rho,
                           KernelKind kind, double tol) {
    if (!(rho >= 0.0)) throw DomainError(fmt::format("mollifier radius must be nonnegative, got {}", rho));
    fem::Mesh km = kernel_mesh(mesh, kind);
    if (!km.locate(x)) throw DomainError(fmt::format("source ({}, {}) lies outside the domain", x.x, x.y));
    KernelColumn col;
    col.kind = kind;
    fem::ProblemData data = fem::ProblemData::zero(km);
    if (rho == 0.0) {
        int v = km.nearest_vertex(x);
        if (km.is_dirichlet_vertex(v))
            throw DomainError(fmt::format("source ({}, {}) snaps to a Dirichlet vertex", x.x, x.y));
        auto sys = fem::assemble(km, coeff, data);
        col.field = solve_nodal(std::move(sys), v, tol);
        col.source = km.vertices()[v];
        col.source_vertex = v;
        col.rho = 0.0;
        return col;
    }
    col.rho = std::max(2.0 * km.h_max(), rho);
    data.f = fem::mollified_dirac(km, x, col.rho);
    auto sys = fem::assemble(km, coeff, data);
    col.field = fem::solve(sys, tol);
    col.source = x;
    return col;
}

double disk_green_oracle(Point x, Point y) {
    double rx2 = x.x * x.x + x.y * x.y;
    double ry2 = y.x * y.x + y.y * y.y;
    if (!(rx2 < 1.0)) throw DomainError("disk Green function requires |x| < 1");
    if (ry2 > 1.0 + 1e-12) throw DomainError("disk Green function requires |y| <= 1");
    double d2 = (x.x - y.x) * (x.x - y.x) + (x.y - y.y) * (x.y - y.y);
    if (d2 == 0.0) throw DomainError("disk Green function requires x != y");
    double num = rx2 * ry2 - 2.0 * (x.x * y.x + x.y * y.y) + 1.0;
    return std::max(0.0, std::log(num / d2) / (4.0 * std::numbers::pi));
}

std::string DecayReport::to_csv() const {
    std::string out = "src_x,src_y,y_x,y_y,dist,value,bound,ratio\n";
    for (const auto& s : samples)
        out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.source.x,
                           s.source.y, s.y.x, s.y.y, s.dist, s.value, s.bound, s.ratio);
    return out;
}

namespace {

template <class ValueAt>
DecayReport decay_common(const KernelColumn& column, const fem::Mesh& mesh, const KernelBound& bound,
                         const std::vector<Point>& samples, ValueAt value_at) {
    DecayReport rep;
    rep.formula_id = bound.report.formula_id;
    const double min_dist = 4.0 * std::max(column.rho, mesh.h_max());
    for (const auto& y : samples) {
        double d = fem::distance(column.source, y);
        if (d < min_dist)
            throw SamplingError(fmt::format("sample ({}, {}) is {} from the source, below 4 max(rho, h) = {}",
                                            y.x, y.y, d, min_dist));
        double v = value_at(y);
        double b = bound(d);
        DecaySample s{column.source, y, d, v, b, std::abs(v) / b};
        rep.max_ratio = std::max(rep.max_ratio, s.ratio);
        rep.samples.push_back(s);
    }
    rep.pass = rep.max_ratio <= 1.0;
    return rep;
}

} // namespace

DecayReport decay_check(const KernelColumn& column, const fem::Mesh& mesh, const KernelBound& bound,
                        const std::vector<Point>& samples) {
    return decay_common(column, mesh, bound, samples, [&](Point y) {
        auto v = fem::evaluate(column.field, mesh, y);
        if (!v) throw SamplingError(fmt::format("sample ({}, {}) lies outside the mesh", y.x, y.y));
        return *v;
    });
}

DecayReport gradient_decay_check(const KernelColumn& column, const fem::Mesh& mesh,
                                 const KernelBound& bound, const std::vector<Point>& samples) {
    auto grads = gradient_column(column, mesh);
    return decay_common(column, mesh, bound, samples, [&](Point y) {
        auto loc = mesh.locate(y);
        if (!loc) throw SamplingError(fmt::format("sample ({}, {}) lies outside the mesh", y.x, y.y));
        return std::hypot(grads[loc->cell][0], grads[loc->cell][1]);
    });
}

std::vector<fem::Vec2> gradient_column(const KernelColumn& column, const fem::Mesh& mesh) {
    return fem::cell_gradients(column.field, mesh);
}

fem::DiscreteField source_derivative_column(const fem::Mesh& mesh, const fem::Coefficient& coeff, Point x,
                                            double rho, KernelKind kind, int axis, double tol) {
    if (axis != 0 && axis != 1) throw ConfigurationError("derivative axis must be 0 or 1");
    double h = mesh.h_max();
    Point lo = x, hi = x;
    (axis == 0 ? lo.x : lo.y) -= h;
    (axis == 0 ? hi.x : hi.y) += h;
    auto a = kernel_column(mesh, coeff, lo, rho, kind, tol);
    auto b = kernel_column(mesh, coeff, hi, rho, kind, tol);
    double step = axis == 0 ? b.source.x - a.source.x : b.source.y - a.source.y;
    if (!(step > 0.0)) throw DomainError("source difference quotient collapsed to one vertex");
    std::vector<double> d(a.field.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (b.field[i] - a.field[i]) / step;
    return fem::DiscreteField(std::move(d));
}

std::shared_ptr<const fem::DiscreteField> KernelCache::get_or_compute(const fem::Mesh& kmesh,
                                                                      const fem::Coefficient& coeff,
                                                                      KernelKind kind, int vertex,
                                                                      const fem::LinearSystem& system,
                                                                      double tol) {
    Key key{kmesh.hash(), coeff.hash(), static_cast<int>(kind), vertex};
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = columns_.find(key);
        if (it != columns_.end()) return it->second;
    }
    auto col = std::make_shared<const fem::DiscreteField>(solve_nodal(system, vertex, tol));
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = columns_.emplace(key, col);
    return it->second;
}

std::size_t KernelCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return columns_.size();
}

fem::DiscreteField representation_reconstruct(const fem::Mesh& mesh, const fem::Coefficient& coeff,
                                              const fem::ProblemData& data, KernelCache* cache, int threads,
                                              double tol) {
    if (mesh.vertex_count() > representation_vertex_limit)
        throw ResourceGuardError(fmt::format("representation reconstruction is limited to {} vertices, mesh has {}",
                                             representation_vertex_limit, mesh.vertex_count()));
    auto sys = fem::assemble(mesh, coeff, data);
    KernelKind kind = kind_of(mesh);
    const int nv = mesh.vertex_count();
    std::vector<int> free;
    for (int v = 0; v < nv; ++v)
        if (!sys.fixed[v]) free.push_back(v);

    // b_j: load with the Dirichlet lifting applied (the unprojected rhs)
    std::vector<double> b = sys.load;
    if (sys.constraint == fem::Constraint::none) {
        for (int i : free) {
            for (int k = sys.stiffness.row_ptr[i]; k < sys.stiffness.row_ptr[i + 1]; ++k) {
                int j = sys.stiffness.col[k];
                if (sys.fixed[j]) b[i] -= sys.stiffness.val[k] * sys.fixed_values[j];
            }
        }
    }

    KernelCache local;
    KernelCache& kc = cache ? *cache : local;
    fem::ProblemData zero = fem::ProblemData::zero(mesh);
    auto base = fem::assemble(mesh, coeff, zero);
    std::vector<std::shared_ptr<const fem::DiscreteField>> cols(free.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < free.size(); k = next++)
            cols[k] = kc.get_or_compute(mesh, coeff, kind, free[k], base, tol);
    };
    int nt = std::max(1, threads);
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<double> u(nv, 0.0);
    for (std::size_t k = 0; k < free.size(); ++k) {
        double bj = b[free[k]];
        if (bj == 0.0) continue;
        const auto& c = cols[k]->values;
        for (int i = 0; i < nv; ++i) u[i] += c[i] * bj;
    }
    for (int v = 0; v < nv; ++v)
        if (sys.fixed[v]) u[v] = sys.fixed_values[v];
    return fem::DiscreteField(std::move(u));
}

} // namespace ecert::green
