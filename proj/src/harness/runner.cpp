#include "ecert/harness/runner.hpp"

#include "ecert/bounds.hpp"
#include "ecert/errors.hpp"
#include "ecert/fem/measure.hpp"
#include "ecert/fem/solver.hpp"
#include "ecert/green.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <thread>

namespace ecert::harness {

Solved solve_level(const Scenario& sc, int level, int threads) {
    auto mesh = sc.build_mesh(level);
    auto coeff = sc.build_coefficient(mesh);
    auto data = sc.build_data(mesh);
    fem::AssemblyOptions opt;
    opt.threads = threads;
    auto sys = fem::assemble(mesh, coeff, data, opt);
    auto field = fem::solve(sys, sc.tol);
    return Solved{level, std::move(mesh), std::move(coeff), std::move(data), std::move(field)};
}

namespace {

// 3-point Gauss-Legendre on [0, 1]
constexpr double gl_x[3] = {0.11270166537925831, 0.5, 0.88729833462074169};
constexpr double gl_w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

double finish(double sum, double p) { return std::pow(sum, 1.0 / p); }

} // namespace

NormEstimator::NormEstimator(const Scenario& sc, const Solved& s) : s_(s), cd_(sc.data) {}

double NormEstimator::f(double p) const {
    const auto& m = s_.mesh;
    double disc = 0.0, quad = 0.0;
    for (int c = 0; c < m.cell_count(); ++c) {
        double v = std::abs(s_.data.f[c]);
        if (std::isinf(p)) disc = std::max(disc, v);
        else disc += std::pow(v, p) * m.area(c);
        if (cd_.f && !std::isinf(p))
            quad += fem::integrate_cell(m, c, fem::rule_degree5(), 1, [&](fem::Point x, const std::array<double, 3>&) {
                return std::pow(std::abs((*cd_.f)(x.x, x.y)), p);
            });
    }
    if (!std::isinf(p)) {
        disc = finish(disc, p);
        quad = finish(quad, p);
    }
    return std::max(disc, quad) * inflation;
}

double NormEstimator::fvec(double p) const {
    const auto& m = s_.mesh;
    double disc = 0.0, quad = 0.0;
    for (int c = 0; c < m.cell_count(); ++c) {
        double v = std::hypot(s_.data.fvec[c][0], s_.data.fvec[c][1]);
        if (std::isinf(p)) disc = std::max(disc, v);
        else disc += std::pow(v, p) * m.area(c);
        if ((cd_.fvec_x || cd_.fvec_y) && !std::isinf(p))
            quad += fem::integrate_cell(m, c, fem::rule_degree5(), 1, [&](fem::Point x, const std::array<double, 3>&) {
                double a = cd_.fvec_x ? (*cd_.fvec_x)(x.x, x.y) : 0.0;
                double b = cd_.fvec_y ? (*cd_.fvec_y)(x.x, x.y) : 0.0;
                return std::pow(std::hypot(a, b), p);
            });
    }
    if (!std::isinf(p)) {
        disc = finish(disc, p);
        quad = finish(quad, p);
    }
    return std::max(disc, quad) * inflation;
}

double NormEstimator::h(double p) const {
    const auto& m = s_.mesh;
    const auto& vs = m.vertices();
    double disc = 0.0, quad = 0.0;
    for (std::size_t e = 0; e < m.boundary_edges().size(); ++e) {
        const auto& be = m.boundary_edges()[e];
        if (be.tag != fem::BoundaryTag::neumann) continue;
        fem::Point a = vs[be.v[0]], b = vs[be.v[1]];
        double len = fem::distance(a, b);
        double v = std::abs(s_.data.h[e]);
        if (std::isinf(p)) disc = std::max(disc, v);
        else disc += std::pow(v, p) * len;
        if (cd_.h && !std::isinf(p))
            for (int i = 0; i < 3; ++i) {
                double x = a.x + gl_x[i] * (b.x - a.x), y = a.y + gl_x[i] * (b.y - a.y);
                quad += gl_w[i] * len * std::pow(std::abs((*cd_.h)(x, y)), p);
            }
    }
    if (!std::isinf(p)) {
        disc = finish(disc, p);
        quad = finish(quad, p);
    }
    return std::max(disc, quad) * inflation;
}

double NormEstimator::g_inf() const {
    const auto& m = s_.mesh;
    const auto& vs = m.vertices();
    double g = 0.0;
    for (int v = 0; v < m.vertex_count(); ++v) g = std::max(g, std::abs(s_.data.g[v]));
    if (cd_.g)
        for (const auto& be : m.boundary_edges()) {
            if (be.tag != fem::BoundaryTag::dirichlet) continue;
            fem::Point a = vs[be.v[0]], b = vs[be.v[1]];
            for (double t : gl_x) g = std::max(g, std::abs((*cd_.g)(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))));
        }
    return g * inflation;
}

double NormEstimator::grad_g_ext() const {
    if (g_zero()) return 0.0;
    return fem::dirichlet_extension_energy(s_.mesh, s_.coeff, s_.data.g) * inflation;
}

bool NormEstimator::g_zero() const {
    return std::all_of(s_.data.g.begin(), s_.data.g.end(), [](double v) { return v == 0.0; });
}

Extrapolated extrapolated_sup(const Solved& coarse, const Solved& fine) {
    double sc = fem::sup_norm(coarse.field), sf = fem::sup_norm(fine.field);
    double r = static_cast<double>(fine.level) / coarse.level;
    if (!(r > 1.0)) throw ConfigurationError("extrapolation needs two distinct mesh levels");
    return {sc, sf, sf + (sf - sc) / (r * r - 1.0)};
}

std::vector<RateRow> convergence_study(const Scenario& sc, const std::vector<int>& levels) {
    CompiledData cd(sc.data);
    if (!cd.exact || !cd.exact_dx || !cd.exact_dy)
        throw ConfigurationError(fmt::format("{}: convergence needs exact, exact_dx and exact_dy", sc.name));
    std::vector<RateRow> rows;
    for (int level : levels) {
        auto s = solve_level(sc, level);
        const auto& m = s.mesh;
        auto grads = fem::cell_gradients(s.field, m);
        double l2 = 0.0, en = 0.0;
        for (int c = 0; c < m.cell_count(); ++c) {
            const auto& t = m.cells()[c];
            double u0 = s.field[t[0]], u1 = s.field[t[1]], u2 = s.field[t[2]];
            l2 += fem::integrate_cell(m, c, fem::rule_degree5(), 1, [&](fem::Point x, const std::array<double, 3>& l) {
                double d = l[0] * u0 + l[1] * u1 + l[2] * u2 - (*cd.exact)(x.x, x.y);
                return d * d;
            });
            en += fem::integrate_cell(m, c, fem::rule_degree5(), 1, [&](fem::Point x, const std::array<double, 3>&) {
                double dx = grads[c][0] - (*cd.exact_dx)(x.x, x.y);
                double dy = grads[c][1] - (*cd.exact_dy)(x.x, x.y);
                return dx * dx + dy * dy;
            });
        }
        RateRow row{level, sc.mesh.side / level, std::sqrt(l2), std::sqrt(en), std::nullopt, std::nullopt};
        if (!rows.empty()) {
            const auto& prev = rows.back();
            double lh = std::log(prev.h / row.h);
            if (prev.l2_error > 0.0 && row.l2_error > 0.0) row.l2_rate = std::log(prev.l2_error / row.l2_error) / lh;
            if (prev.energy_error > 0.0 && row.energy_error > 0.0)
                row.energy_rate = std::log(prev.energy_error / row.energy_error) / lh;
        }
        rows.push_back(row);
    }
    return rows;
}

SolaReport sola_study(const Scenario& sc, double q, const std::vector<double>& m_list) {
    if (m_list.empty()) throw ConfigurationError("sola study needs at least one truncation level");
    auto base = solve_level(sc, sc.mesh.levels.back());
    NormEstimator est(sc, base);
    if (!est.g_zero()) throw ConfigurationError(fmt::format("{}: sola study requires g = 0", sc.name));
    auto geom = base.mesh.geometry(sc.poincare);
    SolaReport rep;
    rep.bound = bounds::w1q_bound(geom, base.coeff.bounds(), est.fvec(2.0), est.f(1.0), est.h(1.0), q, geom.mixed());
    auto solve_m = [&](double m) {
        auto data = base.data;
        data.f = fem::sola_truncate(base.data.f, m);
        auto s = fem::assemble(base.mesh, base.coeff, data);
        return fem::solve(s, sc.tol);
    };
    for (double m : m_list) {
        auto um = solve_m(m);
        SolaRow row{m, fem::grad_norm(um, base.mesh, q), rep.bound.bound_value, std::nullopt};
        auto u2m = solve_m(2.0 * m);
        std::vector<double> d(um.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = u2m[i] - um[i];
        row.cauchy = fem::grad_norm(fem::DiscreteField(std::move(d)), base.mesh, q);
        rep.rows.push_back(row);
    }
    return rep;
}

LevelDecay level_decay_study(const fem::DiscreteField& u, const fem::Mesh& mesh, int count) {
    if (count < 4) throw ConfigurationError("level decay needs at least 4 levels");
    double sup = fem::sup_norm(u);
    LevelDecay out;
    for (int i = 1; i < count; ++i) {
        double k = sup * i / count;
        out.k.push_back(k);
        out.measure.push_back(fem::level_measure(u, mesh, k));
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i + 1 < out.measure.size(); ++i)
        if (out.measure[i] > 0.0 && out.measure[i + 1] > 0.0) {
            xs.push_back(std::log(out.measure[i]));
            ys.push_back(std::log(out.measure[i + 1]));
        }
    if (xs.size() < 2)
        throw InsufficientDataError(fmt::format("level decay fit needs 3 nonempty levels, found {}", xs.size() + 1));
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= xs.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (!(sxx > 0.0)) throw InsufficientDataError("level measures do not vary");
    out.beta = sxy / sxx;
    return out;
}

namespace {

template <class E>
[[noreturn]] void rethrow_as(const E& e, const std::string& prefix) {
    if constexpr (std::is_same_v<E, SolverError>) throw SolverError(prefix + e.what(), e.residual_history);
    else throw E(prefix + e.what());
}

// Runs fn and prefixes any library error with the check id.
template <class Fn>
void with_check_id(const std::string& scenario, const std::string& id, Fn fn) {
    const std::string p = fmt::format("{} / {}: ", scenario, id);
    try {
        fn();
    } catch (const ParseError& e) { rethrow_as(e, p);
    } catch (const DomainError& e) { rethrow_as(e, p);
    } catch (const ConfigurationError& e) { rethrow_as(e, p);
    } catch (const PreconditionError& e) { rethrow_as(e, p);
    } catch (const WrongRegimeError& e) { rethrow_as(e, p);
    } catch (const IterationDivergenceError& e) { rethrow_as(e, p);
    } catch (const AssemblyError& e) { rethrow_as(e, p);
    } catch (const SolverError& e) { rethrow_as(e, p);
    } catch (const SamplingError& e) { rethrow_as(e, p);
    } catch (const ResourceGuardError& e) { rethrow_as(e, p);
    } catch (const InsufficientDataError& e) { rethrow_as(e, p);
    }
}

green::KernelKind kernel_kind(const Scenario& sc, const fem::Mesh& mesh) {
    const auto& k = sc.checks.kernel_kind;
    if (k == "green-mixed") return green::KernelKind::green_mixed;
    if (k == "green-dirichlet") return green::KernelKind::green_dirichlet;
    if (k == "neumann") return green::KernelKind::neumann;
    if (!mesh.has_dirichlet()) return green::KernelKind::neumann;
    if (mesh.boundary_measure(fem::BoundaryTag::neumann) > 0.0) return green::KernelKind::green_mixed;
    return green::KernelKind::green_dirichlet;
}

void require_g_zero(const Scenario& sc, const NormEstimator& est, const char* what) {
    if (!est.g_zero()) throw ConfigurationError(fmt::format("{}: {} check requires g = 0", sc.name, what));
}

} // namespace

MarginReport run_scenario(const Scenario& sc, int threads) {
    auto t0 = std::chrono::steady_clock::now();
    MarginReport rep;
    rep.scenario = sc.name;
    const int finest = sc.mesh.levels.back();
    rep.level = finest;
    std::map<int, Solved> cache;
    auto level = [&](int m) -> const Solved& {
        auto it = cache.find(m);
        if (it == cache.end()) it = cache.emplace(m, solve_level(sc, m, threads)).first;
        return it->second;
    };
    const auto& k = sc.checks;

    for (const auto& id : k.run) {
        with_check_id(sc.name, id, [&] {
            if (id == "h1") {
                const auto& s = level(finest);
                NormEstimator est(sc, s);
                auto geom = s.mesh.geometry(sc.poincare);
                DataNorms norms;
                double t = k.t, sx = k.s;
                if (geom.n > 2) throw ConfigurationError("meshes are two-dimensional");
                norms.set(Quantity::fvec, 2.0, est.fvec(2.0)).set(Quantity::f, t, est.f(t));
                norms.set(Quantity::h, sx, est.h(sx));
                if (geom.mixed()) norms.set(Quantity::grad_g_ext, 2.0, est.grad_g_ext());
                auto br = geom.mixed() ? bounds::h1_mixed_bound(geom, s.coeff.bounds(), norms)
                                       : bounds::h1_neumann_bound(geom, s.coeff.bounds(), norms);
                auto rec = make_record("h1", CheckKind::certified, fem::grad_norm(s.field, s.mesh, 2.0),
                                       br.bound_value, 1.0 - 1e-9);
                rec.bound_report = br;
                rep.checks.push_back(std::move(rec));
            } else if (id == "w1q") {
                const auto& s = level(finest);
                NormEstimator est(sc, s);
                require_g_zero(sc, est, "w1q");
                auto geom = s.mesh.geometry(sc.poincare);
                for (double q : k.q) {
                    auto br = bounds::w1q_bound(geom, s.coeff.bounds(), est.fvec(2.0), est.f(1.0), est.h(1.0), q,
                                                geom.mixed());
                    auto rec = make_record(fmt::format("w1q[q={}]", q), CheckKind::certified,
                                           fem::grad_norm(s.field, s.mesh, q), br.bound_value);
                    rec.bound_report = br;
                    rep.checks.push_back(std::move(rec));
                }
            } else if (id == "kernel_w1q") {
                auto mesh = sc.build_mesh(finest);
                auto coeff = sc.build_coefficient(mesh);
                auto kind = kernel_kind(sc, mesh);
                auto col = green::kernel_column(mesh, coeff, k.source, k.rho, kind, 1e-12);
                auto kmesh = green::kernel_mesh(mesh, kind);
                auto geom = kmesh.geometry(sc.poincare);
                auto br = bounds::dirac_w1q_bound(geom, coeff.bounds(), k.kernel_q, kind != green::KernelKind::neumann);
                auto rec = make_record(fmt::format("kernel_w1q[q={}]", k.kernel_q), CheckKind::certified,
                                       fem::grad_norm(col.field, kmesh, k.kernel_q), br.bound_value);
                rec.detail = fmt::format("kind={} rho={}", green::kind_name(kind), col.rho);
                rec.bound_report = br;
                rep.checks.push_back(std::move(rec));
            } else if (id == "linf" || id == "sup_reference") {
                if (sc.mesh.levels.size() < 2)
                    throw ConfigurationError("extrapolated sup needs at least two mesh levels");
                const auto& coarse = level(sc.mesh.levels[sc.mesh.levels.size() - 2]);
                const auto& fine = level(finest);
                auto ex = extrapolated_sup(coarse, fine);
                std::string detail = fmt::format("sup coarse={:.10g} fine={:.10g} extrapolated={:.10g}", ex.coarse,
                                                 ex.fine, ex.value);
                if (id == "linf") {
                    NormEstimator est(sc, fine);
                    auto geom = fine.mesh.geometry(sc.poincare);
                    int n = geom.n;
                    double p = k.p;
                    DataNorms norms;
                    norms.set(Quantity::g, infinity, est.g_inf());
                    norms.set(Quantity::fvec, p, est.fvec(p));
                    double fe = bounds::linf_f_exponent(n, p), he = bounds::linf_h_exponent(n, p);
                    if (fe >= 1.0) norms.set(Quantity::f, fe, est.f(fe));
                    if (he >= 1.0) norms.set(Quantity::h, he, est.h(he));
                    auto br = bounds::linf_global_bound(p, geom, fine.coeff.bounds(), norms);
                    auto rec = make_record(fmt::format("linf[p={}]", p), CheckKind::asymptotic, ex.value, br.bound_value);
                    rec.detail = detail;
                    rec.bound_report = br;
                    rep.checks.push_back(std::move(rec));
                } else {
                    if (!k.reference) throw ConfigurationError("sup_reference needs 'reference'");
                    auto rec = make_record("sup_reference", CheckKind::reference, std::abs(ex.value - *k.reference),
                                           k.reference_tol);
                    rec.detail = fmt::format("{} reference={:.10g}", detail, *k.reference);
                    rep.checks.push_back(std::move(rec));
                }
            } else if (id == "level_decay") {
                const auto& s = level(finest);
                auto ld = level_decay_study(s.field, s.mesh, k.level_count);
                auto rec = make_record("level_decay", CheckKind::asymptotic, 1.0, ld.beta);
                rec.detail = fmt::format("fitted beta={:.6f} over {} levels", ld.beta, ld.k.size());
                rep.checks.push_back(std::move(rec));
            } else if (id == "caccioppoli") {
                if (k.balls.empty()) throw ConfigurationError("caccioppoli needs 'balls'");
                const auto& s = level(finest);
                for (std::size_t i = 0; i < k.balls.size(); ++i) {
                    const auto& b = k.balls[i];
                    if (s.mesh.boundary_distance(b.x) <= b.R)
                        throw DomainError(fmt::format("ball {} is not interior", i));
                    auto terms = fem::caccioppoli_ratio(s.field, s.mesh, s.coeff, b.x, b.r, b.R);
                    auto rec = make_record(fmt::format("caccioppoli[{}]", i), CheckKind::asymptotic, terms.lhs,
                                           terms.rhs, 1.0 / k.caccioppoli_slack);
                    rec.detail = fmt::format("lhs/rhs={:.6g} prefactor={:.6g}", terms.lhs / terms.rhs, terms.prefactor);
                    rep.checks.push_back(std::move(rec));
                }
            } else if (id == "sola") {
                auto sr = sola_study(sc, k.sola_q, k.sola_m);
                double worst = 0.0;
                for (std::size_t i = 0; i < sr.rows.size(); ++i) {
                    const auto& row = sr.rows[i];
                    auto rec = make_record(fmt::format("sola[m={}]", row.m), CheckKind::certified, row.grad_q, row.bound);
                    rec.detail = fmt::format("cauchy={:.6e}", *row.cauchy);
                    if (i == 0) rec.bound_report = sr.bound;
                    rep.checks.push_back(std::move(rec));
                    if (i > 0) worst = std::max(worst, *row.cauchy / *sr.rows[i - 1].cauchy);
                }
                if (sr.rows.size() > 1) {
                    auto rec = make_record("sola_cauchy", CheckKind::asymptotic, worst, 1.0, std::nextafter(1.0, 2.0));
                    rec.detail = "largest ratio of consecutive Cauchy differences";
                    rep.checks.push_back(std::move(rec));
                }
            } else if (id == "convergence") {
                auto rows = convergence_study(sc, sc.mesh.levels);
                if (rows.size() < 2) throw ConfigurationError("convergence needs at least two mesh levels");
                const auto& last = rows.back();
                auto add = [&](const char* name, std::optional<double> rate, std::optional<double> expect, double err) {
                    double r = rate.value_or(0.0);
                    CheckRecord rec = expect ? make_record(name, CheckKind::asymptotic, std::abs(r - *expect), k.rate_tol)
                                             : make_record(name, CheckKind::report, r, 0.0);
                    rec.detail = fmt::format("rate={:.4f} error={:.6e}", r, err);
                    rep.checks.push_back(std::move(rec));
                };
                add("convergence_l2", last.l2_rate, k.expect_l2, last.l2_error);
                add("convergence_energy", last.energy_rate, k.expect_energy, last.energy_error);
            } else if (id == "kernel_decay") {
                auto mesh = sc.build_mesh(finest);
                auto coeff = sc.build_coefficient(mesh);
                auto kind = kernel_kind(sc, mesh);
                auto col = green::kernel_column(mesh, coeff, k.source, k.rho, kind, 1e-12);
                auto kmesh = green::kernel_mesh(mesh, kind);
                auto geom = kmesh.geometry(sc.poincare);
                bool mixed = kind != green::KernelKind::neumann;
                auto samples = decay_samples(kmesh, col.source, col.rho);
                auto kb = bounds::green_sup_bound(geom, coeff.bounds(), k.kernel_q, mixed);
                auto dr = green::decay_check(col, kmesh, kb, samples);
                auto rec = make_record("kernel_decay", CheckKind::asymptotic, dr.max_ratio, 1.0);
                rec.detail = fmt::format("{} samples, max value/bound={:.6e}", dr.samples.size(), dr.max_ratio);
                rec.bound_report = kb.report;
                rep.checks.push_back(std::move(rec));
                if (coeff.bounds().dini_integral) {
                    auto gb = bounds::dini_grad_bound(geom, coeff.bounds(), k.kernel_q, mixed);
                    auto gr = green::gradient_decay_check(col, kmesh, gb, samples);
                    auto grec = make_record("kernel_grad_decay", CheckKind::asymptotic, gr.max_ratio, 1.0);
                    grec.detail = fmt::format("{} samples, max value/bound={:.6e}", gr.samples.size(), gr.max_ratio);
                    grec.bound_report = gb.report;
                    rep.checks.push_back(std::move(grec));
                }
            }
        });
    }
    rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<fem::Point> decay_samples(const fem::Mesh& mesh, fem::Point src, double rho) {
    double dmin = 4.0 * std::max(rho, mesh.h_max());
    std::vector<fem::Point> all;
    for (const auto& v : mesh.vertices())
        if (fem::distance(v, src) >= dmin * (1.0 + 1e-12)) all.push_back(v);
    std::size_t stride = std::max<std::size_t>(1, all.size() / 200);
    std::vector<fem::Point> out;
    for (std::size_t i = 0; i < all.size(); i += stride) out.push_back(all[i]);
    return out;
}

SuiteReport run_suite(const std::string& dir, int threads) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ConfigurationError(fmt::format("'{}' is not a directory", dir));
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".ini") files.push_back(e.path().string());
    if (files.empty()) throw ConfigurationError(fmt::format("no scenario files (*.ini) in '{}'", dir));
    std::sort(files.begin(), files.end());
    std::vector<Scenario> scenarios;
    for (const auto& f : files) scenarios.push_back(Scenario::load(f));
    std::sort(scenarios.begin(), scenarios.end(), [](const Scenario& a, const Scenario& b) { return a.name < b.name; });
    for (std::size_t i = 1; i < scenarios.size(); ++i)
        if (scenarios[i].name == scenarios[i - 1].name)
            throw ConfigurationError(fmt::format("duplicate scenario name '{}'", scenarios[i].name));

    SuiteReport suite;
    suite.scenarios.resize(scenarios.size());
    std::vector<std::exception_ptr> errors(scenarios.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) {
            try {
                suite.scenarios[i] = run_scenario(scenarios[i], 1);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    int nt = std::max(1, std::min<int>(threads, static_cast<int>(scenarios.size())));
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return suite;
}

} // namespace ecert::harness
