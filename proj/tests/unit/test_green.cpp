#include "ecert/errors.hpp"
#include "ecert/green.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ecert;
using namespace ecert::green;
using fem::BoundaryTag;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
constexpr auto D = BoundaryTag::dirichlet;
constexpr auto N = BoundaryTag::neumann;

fem::Mesh mixed_square(int m) { return fem::build_structured_square(m, fem::SquareTags::per_side(N, N, N, D)); }

fem::ProblemData full_data(const fem::Mesh& mesh) {
    auto d = fem::ProblemData::zero(mesh);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        auto p = mesh.centroid(c);
        d.f[c] = 1.0 + p.x * p.y;
        d.fvec[c] = {0.3 * p.y, -0.2};
    }
    for (std::size_t e = 0; e < mesh.boundary_edges().size(); ++e) {
        const auto& be = mesh.boundary_edges()[e];
        if (be.tag == N) d.h[e] = 0.5 * mesh.vertices()[be.v[0]].x;
    }
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (mesh.is_dirichlet_vertex(v)) d.g[v] = 0.1 + mesh.vertices()[v].y;
    return d;
}
} // namespace

TEST_CASE("kind names and kernel meshes") {
    CHECK(std::string(kind_name(KernelKind::green_mixed)) == "green-mixed");
    CHECK(std::string(kind_name(KernelKind::green_dirichlet)) == "green-dirichlet");
    CHECK(std::string(kind_name(KernelKind::neumann)) == "neumann");
    auto m = mixed_square(6);
    CHECK(kernel_mesh(m, KernelKind::green_dirichlet).boundary_measure(D) == Approx(4.0));
    CHECK(kernel_mesh(m, KernelKind::neumann).boundary_measure(N) == Approx(4.0));
    CHECK(kernel_mesh(m, KernelKind::green_mixed).boundary_measure(D) == Approx(1.0));
    CHECK_THROWS_AS(kernel_mesh(m.retagged(N), KernelKind::green_mixed), WrongRegimeError);
}

TEST_CASE("disk Green function oracle") {
    CHECK(disk_green_oracle({0, 0}, {0.5, 0}) == Approx(std::log(2.0) / (2 * pi)).epsilon(1e-14));
    CHECK(disk_green_oracle({0, 0}, {0.5, 0}) == Approx(0.11031780007632579).epsilon(1e-14));
    CHECK(std::abs(disk_green_oracle({0.3, 0.2}, {1.0, 0.0})) < 1e-15);
    CHECK(std::abs(disk_green_oracle({0.3, 0.2}, {0.0, -1.0})) < 1e-15);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> r(0.0, 0.95), t(0.0, 2 * pi);
    for (int i = 0; i < 100; ++i) {
        double r1 = r(rng), t1 = t(rng), r2 = r(rng), t2 = t(rng);
        Point x{r1 * std::cos(t1), r1 * std::sin(t1)}, y{r2 * std::cos(t2), r2 * std::sin(t2)};
        if (fem::distance(x, y) < 1e-3) continue;
        CHECK(disk_green_oracle(x, y) == Approx(disk_green_oracle(y, x)).epsilon(1e-12));
        CHECK(disk_green_oracle(x, y) > 0.0);
    }
    CHECK_THROWS_AS(disk_green_oracle({0.2, 0.1}, {0.2, 0.1}), DomainError);
    CHECK_THROWS_AS(disk_green_oracle({1.0, 0.0}, {0.2, 0.1}), DomainError);
    CHECK_THROWS_AS(disk_green_oracle({0.0, 0.0}, {1.5, 0.0}), DomainError);
}

TEST_CASE("nodal kernels are symmetric") {
    auto m = mixed_square(8);
    auto a = fem::Coefficient::constant(m, 1.0);
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int> pick(0, m.vertex_count() - 1);
    for (auto kind : {KernelKind::green_mixed, KernelKind::green_dirichlet, KernelKind::neumann}) {
        auto km = kernel_mesh(m, kind);
        for (int t = 0; t < 12; ++t) {
            int i = pick(rng), j = pick(rng);
            if (km.is_dirichlet_vertex(i) || km.is_dirichlet_vertex(j)) continue;
            auto ci = kernel_column(m, a, m.vertices()[i], 0.0, kind);
            auto cj = kernel_column(m, a, m.vertices()[j], 0.0, kind);
            CHECK(ci.source_vertex == i);
            CHECK(ci.field[j] == Approx(cj.field[i]).epsilon(1e-8).scale(1e-6));
        }
    }
}

TEST_CASE("Green kernels are nonnegative, Neumann kernels have zero mean") {
    auto m = mixed_square(10);
    auto a = fem::Coefficient::constant(m, 2.0);
    for (auto kind : {KernelKind::green_mixed, KernelKind::green_dirichlet}) {
        auto c = kernel_column(m, a, {0.4, 0.6}, 0.0, kind);
        for (double v : c.field.values) CHECK(v >= -1e-12);
    }
    auto n = kernel_column(m, a, {0.4, 0.6}, 0.0, KernelKind::neumann);
    double mean = 0.0;
    for (int c = 0; c < m.cell_count(); ++c) {
        const auto& t = m.cells()[c];
        mean += m.area(c) * (n.field[t[0]] + n.field[t[1]] + n.field[t[2]]) / 3.0;
    }
    CHECK(std::abs(mean) < 1e-10);
}

TEST_CASE("kernel column errors") {
    auto m = mixed_square(8);
    auto a = fem::Coefficient::constant(m, 1.0);
    CHECK_THROWS_AS(kernel_column(m, a, {0.0, 0.5}, 0.0, KernelKind::green_mixed), DomainError);
    CHECK_THROWS_AS(kernel_column(m, a, {1.5, 0.5}, 0.0, KernelKind::green_mixed), DomainError);
    CHECK_THROWS_AS(kernel_column(m, a, {1.5, 0.5}, 0.1, KernelKind::green_mixed), DomainError);
}

TEST_CASE("mollified columns use at least two mesh sizes") {
    auto m = mixed_square(16);
    auto a = fem::Coefficient::constant(m, 1.0);
    auto c = kernel_column(m, a, {0.5, 0.5}, 0.01, KernelKind::green_mixed);
    CHECK(c.rho == Approx(2 * m.h_max()));
    auto c2 = kernel_column(m, a, {0.5, 0.5}, 0.3, KernelKind::green_mixed);
    CHECK(c2.rho == 0.3);
    CHECK(c2.source_vertex == -1);
}

TEST_CASE("discrete disk kernel approaches the oracle away from the source") {
    auto m = fem::build_disk(32);
    auto a = fem::Coefficient::constant(m, 1.0);
    Point x{0.3, 0.2};
    auto c = kernel_column(m, a, x, 0.0, KernelKind::green_dirichlet);
    double worst = 0.0;
    for (int v = 0; v < m.vertex_count(); ++v) {
        const auto& y = m.vertices()[v];
        double d = fem::distance(x, y);
        if (d < 0.3 || m.is_dirichlet_vertex(v) || std::hypot(y.x, y.y) > 0.9) continue;
        double g = disk_green_oracle(x, y);
        worst = std::max(worst, std::abs(c.field[v] - g) / g);
    }
    CHECK(worst < 0.05);
}

TEST_CASE("decay checks") {
    auto m = mixed_square(16);
    auto a = fem::Coefficient::constant(m, 1.0);
    auto col = kernel_column(m, a, {0.5, 0.5}, 0.0, KernelKind::green_mixed);
    KernelBound b;
    b.constant = 1.0;
    b.exponent = -1.0;
    b.report.formula_id = "test";
    auto r = decay_check(col, m, b, {{0.9, 0.9}, {0.9, 0.1}});
    CHECK(r.samples.size() == 2);
    CHECK(r.pass);
    CHECK(r.max_ratio < 1.0);
    CHECK(r.samples[0].bound == Approx(1.0 / r.samples[0].dist));
    CHECK(r.to_csv().rfind("src_x,src_y,y_x,y_y,dist,value,bound,ratio\n", 0) == 0);
    CHECK_THROWS_AS(decay_check(col, m, b, {{0.52, 0.5}}), SamplingError);
    b.constant = 1e-6;
    CHECK_FALSE(decay_check(col, m, b, {{0.9, 0.9}}).pass);

    b.constant = 1.0;
    b.exponent = -2.0;
    auto g = gradient_decay_check(col, m, b, {{0.9, 0.9}});
    CHECK(g.samples.size() == 1);
    CHECK(g.samples[0].value > 0.0);
    CHECK(gradient_column(col, m).size() == static_cast<std::size_t>(m.cell_count()));
}

TEST_CASE("source derivative is odd under reflection") {
    auto m = fem::build_structured_square(16, fem::SquareTags::uniform(D));
    auto a = fem::Coefficient::constant(m, 1.0);
    auto dx = source_derivative_column(m, a, {0.5, 0.5}, 0.0, KernelKind::green_dirichlet, 0);
    for (int v = 0; v < m.vertex_count(); ++v) {
        auto p = m.vertices()[v];
        int w = m.nearest_vertex({1.0 - p.x, p.y});
        CHECK(dx[v] == Approx(-dx[w]).scale(1e-6).epsilon(1e-6));
    }
}

TEST_CASE("representation formula reproduces the discrete solution") {
    for (auto tags : {fem::SquareTags::per_side(N, N, N, D), fem::SquareTags::uniform(D),
                      fem::SquareTags::uniform(N)}) {
        auto m = fem::build_structured_square(10, tags);
        std::vector<double> vals(m.cell_count());
        for (int c = 0; c < m.cell_count(); ++c) vals[c] = m.centroid(c).x < 0.5 ? 1.0 : 10.0;
        CoefficientBounds bnd;
        bnd.a_upper = 10.0;
        fem::Coefficient a(vals, bnd);
        auto d = full_data(m);
        if (!m.has_dirichlet()) {
            // compatibility: zero total load
            double tot = 0.0;
            for (int c = 0; c < m.cell_count(); ++c) tot += d.f[c] * m.area(c);
            for (int c = 0; c < m.cell_count(); ++c) d.f[c] -= tot;
            std::fill(d.h.begin(), d.h.end(), 0.0);
        }
        auto u = fem::solve(fem::assemble(m, a, d), 1e-13);
        KernelCache cache;
        auto rec = representation_reconstruct(m, a, d, &cache, 2);
        double err = 0.0, sup = 0.0;
        for (int v = 0; v < m.vertex_count(); ++v) {
            err = std::max(err, std::abs(rec[v] - u[v]));
            sup = std::max(sup, std::abs(u[v]));
        }
        CHECK(err <= 1e-8 * std::max(1.0, sup));
        auto before = cache.size();
        CHECK(before > 0);
        auto again = representation_reconstruct(m, a, d, &cache, 1);
        CHECK(cache.size() == before);
        CHECK(again.values == rec.values);
    }
}

TEST_CASE("representation guard") {
    auto m = fem::build_structured_square(50, fem::SquareTags::uniform(D));
    CHECK(m.vertex_count() > representation_vertex_limit);
    CHECK_THROWS_AS(representation_reconstruct(m, fem::Coefficient::constant(m, 1.0), fem::ProblemData::zero(m)),
                    ResourceGuardError);
}
