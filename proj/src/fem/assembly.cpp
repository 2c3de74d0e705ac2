#include "ecert/fem/assembly.hpp"

#include "ecert/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <thread>

namespace ecert::fem {

Coefficient::Coefficient(std::vector<double> values, CoefficientBounds declared)
    : values_(std::move(values)), bounds_(declared) {
    bounds_.validate();
    for (std::size_t c = 0; c < values_.size(); ++c) {
        double a = values_[c];
        if (!std::isfinite(a) || a < bounds_.a_lower * (1.0 - 1e-14) || a > bounds_.a_upper * (1.0 + 1e-14))
            throw ConfigurationError(fmt::format("coefficient {} on cell {} outside declared bounds [{}, {}]",
                                                 a, c, bounds_.a_lower, bounds_.a_upper));
    }
}

Coefficient Coefficient::constant(const Mesh& mesh, double a) {
    return Coefficient(std::vector<double>(mesh.cell_count(), a), CoefficientBounds{a, a, std::nullopt});
}

std::uint64_t Coefficient::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (double v : values_) {
        const auto* b = reinterpret_cast<const unsigned char*>(&v);
        for (std::size_t i = 0; i < sizeof(double); ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    }
    return h;
}

ProblemData ProblemData::zero(const Mesh& mesh) {
    ProblemData d;
    d.f.assign(mesh.cell_count(), 0.0);
    d.fvec.assign(mesh.cell_count(), {0.0, 0.0});
    d.h.assign(mesh.boundary_edges().size(), 0.0);
    d.g.assign(mesh.vertex_count(), 0.0);
    return d;
}

void ProblemData::validate(const Mesh& mesh) const {
    if (f.size() != static_cast<std::size_t>(mesh.cell_count()) || fvec.size() != f.size() ||
        h.size() != mesh.boundary_edges().size() || g.size() != static_cast<std::size_t>(mesh.vertex_count()))
        throw ConfigurationError("problem data sizes do not match the mesh");
    for (std::size_t c = 0; c < f.size(); ++c)
        if (!std::isfinite(f[c]) || !std::isfinite(fvec[c][0]) || !std::isfinite(fvec[c][1]))
            throw ConfigurationError(fmt::format("non-finite source data on cell {}", c));
    for (std::size_t e = 0; e < h.size(); ++e) {
        if (!std::isfinite(h[e])) throw ConfigurationError(fmt::format("non-finite h on boundary edge {}", e));
        if (h[e] != 0.0 && mesh.boundary_edges()[e].tag == BoundaryTag::dirichlet)
            throw ConfigurationError(fmt::format("h given on Dirichlet edge {}", e));
    }
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (!std::isfinite(g[v])) throw ConfigurationError(fmt::format("non-finite g at vertex {}", v));
        if (g[v] != 0.0 && !mesh.is_dirichlet_vertex(v))
            throw ConfigurationError(fmt::format("g given at non-Dirichlet vertex {}", v));
    }
}

void DiscreteField::check(const Mesh& mesh) const {
    if (values.size() != static_cast<std::size_t>(mesh.vertex_count()))
        throw ConfigurationError(fmt::format("field has {} values, mesh has {} vertices", values.size(),
                                             mesh.vertex_count()));
    for (double v : values)
        if (!std::isfinite(v)) throw ConfigurationError("field has a non-finite value");
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
        y[i] = s;
    }
}

double CsrMatrix::at(int i, int j) const {
    auto b = col.begin() + row_ptr[i], e = col.begin() + row_ptr[i + 1];
    auto it = std::lower_bound(b, e, j);
    return (it != e && *it == j) ? val[it - col.begin()] : 0.0;
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = at(i, i);
    return d;
}

double CsrMatrix::max_abs() const {
    double m = 0.0;
    for (double v : val) m = std::max(m, std::abs(v));
    return m;
}

double CsrMatrix::max_asymmetry() const {
    double m = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) m = std::max(m, std::abs(val[k] - at(col[k], i)));
    return m;
}

std::array<std::array<double, 3>, 3> element_stiffness(const Mesh& mesh, int cell) {
    const auto& g = mesh.basis_gradients(cell);
    double area = mesh.area(cell);
    std::array<std::array<double, 3>, 3> k{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k[i][j] = area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
    return k;
}

namespace {

CsrMatrix pattern(const Mesh& mesh) {
    int nv = mesh.vertex_count();
    std::vector<std::vector<int>> adj(nv);
    for (const auto& c : mesh.cells())
        for (int a : c)
            for (int b : c) adj[a].push_back(b);
    CsrMatrix m;
    m.n = nv;
    m.row_ptr.assign(nv + 1, 0);
    for (int i = 0; i < nv; ++i) {
        auto& r = adj[i];
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        m.row_ptr[i + 1] = m.row_ptr[i] + static_cast<int>(r.size());
    }
    m.col.reserve(m.row_ptr[nv]);
    for (auto& r : adj) m.col.insert(m.col.end(), r.begin(), r.end());
    m.val.assign(m.col.size(), 0.0);
    return m;
}

int slot(const CsrMatrix& m, int i, int j) {
    auto b = m.col.begin() + m.row_ptr[i], e = m.col.begin() + m.row_ptr[i + 1];
    return static_cast<int>(std::lower_bound(b, e, j) - m.col.begin());
}

struct Local {
    std::array<std::array<double, 3>, 3> k;
    std::array<double, 3> b;
};

Local local_contribution(const Mesh& mesh, const Coefficient& coeff, const ProblemData& data, int c) {
    Local L;
    L.k = element_stiffness(mesh, c);
    double a = coeff[c];
    double area = mesh.area(c);
    const auto& g = mesh.basis_gradients(c);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) L.k[i][j] *= a;
        L.b[i] = data.f[c] * area / 3.0 + area * (data.fvec[c][0] * g[i][0] + data.fvec[c][1] * g[i][1]);
    }
    return L;
}

} // namespace

LinearSystem assemble(const Mesh& mesh, const Coefficient& coeff, const ProblemData& data,
                      const AssemblyOptions& options) {
    if (coeff.values().size() != static_cast<std::size_t>(mesh.cell_count()))
        throw ConfigurationError("coefficient size does not match the mesh");
    data.validate(mesh);
    const int nv = mesh.vertex_count();
    const int nc = mesh.cell_count();

    std::vector<Local> locals(nc);
    int threads = std::max(1, options.threads);
    if (threads == 1 || nc < 4096) {
        for (int c = 0; c < nc; ++c) locals[c] = local_contribution(mesh, coeff, data, c);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (int c = t; c < nc; c += threads) locals[c] = local_contribution(mesh, coeff, data, c);
            });
        }
        for (auto& th : pool) th.join();
    }

    LinearSystem sys;
    sys.stiffness = pattern(mesh);
    sys.load.assign(nv, 0.0);
    sys.weights.assign(nv, 0.0);
    // scatter in cell order so the sums do not depend on the thread count
    for (int c = 0; c < nc; ++c) {
        const auto& t = mesh.cells()[c];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) sys.stiffness.val[slot(sys.stiffness, t[i], t[j])] += locals[c].k[i][j];
            sys.load[t[i]] += locals[c].b[i];
        }
    }
    const auto& bedges = mesh.boundary_edges();
    for (std::size_t e = 0; e < bedges.size(); ++e) {
        double len = distance(mesh.vertices()[bedges[e].v[0]], mesh.vertices()[bedges[e].v[1]]);
        for (int v : bedges[e].v) sys.load[v] += data.h[e] * len / 2.0;
    }

    sys.fixed.assign(nv, 0);
    sys.fixed_values.assign(nv, 0.0);
    bool any_fixed = false;
    for (int v = 0; v < nv; ++v) {
        if (mesh.is_dirichlet_vertex(v)) {
            sys.fixed[v] = 1;
            sys.fixed_values[v] = data.g[v];
            any_fixed = true;
        }
    }

    sys.matrix = sys.stiffness;
    if (any_fixed) {
        sys.constraint = Constraint::none;
        for (int i = 0; i < nv; ++i) {
            for (int k = sys.matrix.row_ptr[i]; k < sys.matrix.row_ptr[i + 1]; ++k) {
                int j = sys.matrix.col[k];
                if (i != j && (sys.fixed[i] || sys.fixed[j])) sys.matrix.val[k] = 0.0;
            }
        }
        for (int c = 0; c < nc; ++c)
            for (int v : mesh.cells()[c]) sys.weights[v] += mesh.area(c) / 3.0;
    } else {
        sys.constraint = options.neumann_constraint == Constraint::none ? Constraint::zero_mean_domain
                                                                        : options.neumann_constraint;
        if (sys.constraint == Constraint::zero_mean_domain) {
            for (int c = 0; c < nc; ++c)
                for (int v : mesh.cells()[c]) sys.weights[v] += mesh.area(c) / 3.0;
        } else {
            for (const auto& e : bedges) {
                double len = distance(mesh.vertices()[e.v[0]], mesh.vertices()[e.v[1]]);
                for (int v : e.v) sys.weights[v] += len / 2.0;
            }
        }
    }
    set_load(sys, sys.load);
    return sys;
}

void set_load(LinearSystem& sys, std::vector<double> load) {
    const int nv = sys.stiffness.n;
    if (load.size() != static_cast<std::size_t>(nv)) throw ConfigurationError("load size does not match the system");
    sys.load = std::move(load);
    sys.rhs = sys.load;
    if (sys.constraint == Constraint::none) {
        // symmetric elimination: move known values to the right-hand side
        const CsrMatrix& K = sys.stiffness;
        for (int i = 0; i < nv; ++i) {
            if (sys.fixed[i]) {
                sys.rhs[i] = sys.matrix.at(i, i) * sys.fixed_values[i];
                continue;
            }
            for (int k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k) {
                int j = K.col[k];
                if (sys.fixed[j]) sys.rhs[i] -= K.val[k] * sys.fixed_values[j];
            }
        }
        return;
    }
    double sb = 0.0, sw = 0.0;
    for (int i = 0; i < nv; ++i) {
        sb += sys.rhs[i];
        sw += sys.weights[i];
    }
    for (int i = 0; i < nv; ++i) sys.rhs[i] -= sb / sw * sys.weights[i];
}

} // namespace ecert::fem
