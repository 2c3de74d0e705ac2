#include "ecert/cli.hpp"

#include "ecert/bounds.hpp"
#include "ecert/constants.hpp"
#include "ecert/errors.hpp"
#include "ecert/fem/measure.hpp"
#include "ecert/green.hpp"
#include "ecert/harness/runner.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ecert::cli {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigurationError(fmt::format("cannot write '{}'", path.string()));
    os << text;
    if (!os) throw ConfigurationError(fmt::format("failed writing '{}'", path.string()));
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// ---- constants

int cmd_constants(int n, std::optional<double> q, std::optional<double> lambda, std::ostream& out) {
    Dimension dim(n);
    auto row = [&](const std::string& name, double v) { out << fmt::format("{:<18} {:.15g}\n", name, v); };
    out << fmt::format("{:<18} {}\n", "n", dim.value());
    row("omega_n", constants::unit_ball_volume(n));
    row("sigma_n-1", constants::unit_sphere_area(n));
    row("S_1", constants::sobolev_limit_S1(n));
    row("K_1", constants::trace_limit_K1(n));
    if (q) {
        if (!(*q < n)) throw DomainError(fmt::format("S_q and K_q require q < n (q={}, n={})", *q, n));
        row(fmt::format("S_q (q={})", *q), constants::sobolev_best(n, *q));
        row(fmt::format("K_q (q={})", *q), constants::trace_best(n, *q));
        auto e = sobolev_exponents(n, *q);
        row("q*", e.q_star);
        row("q_*", e.q_lower);
    }
    if (lambda) row(fmt::format("HLS (lambda={})", *lambda), constants::hls_sharp(n, *lambda));
    return 0;
}

// ---- bound

class Params {
public:
    explicit Params(json j) : j_(std::move(j)) {
        if (!j_.is_object()) throw ConfigurationError("parameter file must hold a JSON object");
    }

    void require(const std::vector<std::string>& names) const {
        std::vector<std::string> missing;
        for (const auto& n : names)
            if (!j_.contains(n)) missing.push_back(n);
        if (!missing.empty()) {
            std::string list;
            for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
            throw ConfigurationError("missing parameters: " + list);
        }
    }

    double num(const std::string& k) const {
        const auto& v = j_.at(k);
        if (!v.is_number()) throw ConfigurationError(fmt::format("parameter '{}' must be a number", k));
        return v.get<double>();
    }
    std::optional<double> opt(const std::string& k) const {
        if (!j_.contains(k) || j_.at(k).is_null()) return std::nullopt;
        return num(k);
    }
    double num_or(const std::string& k, double d) const { return opt(k).value_or(d); }
    bool flag(const std::string& k, bool d) const {
        if (!j_.contains(k)) return d;
        if (!j_.at(k).is_boolean()) throw ConfigurationError(fmt::format("parameter '{}' must be true or false", k));
        return j_.at(k).get<bool>();
    }
    void set(const std::string& k, double v) { j_[k] = v; }
    const json& raw() const { return j_; }

private:
    json j_;
};

const std::vector<std::string> geometry_keys = {"n", "volume", "diameter", "gammaD", "gamma", "a_lower", "a_upper"};

DomainGeometry geometry(const Params& p) {
    DomainGeometry g;
    g.n = Dimension(static_cast<int>(p.num("n")));
    g.volume = p.num("volume");
    g.diameter = p.num("diameter");
    g.gammaD_measure = p.num("gammaD");
    g.gamma_measure = p.num("gamma");
    g.poincare = p.opt("poincare");
    g.convex = p.flag("convex", false);
    g.validate();
    return g;
}

CoefficientBounds coefficient(const Params& p) {
    CoefficientBounds c{p.num("a_lower"), p.num("a_upper"), p.opt("dini")};
    c.validate();
    return c;
}

Quantity quantity_from(const std::string& s) {
    if (s == "f") return Quantity::f;
    if (s == "fvec") return Quantity::fvec;
    if (s == "h") return Quantity::h;
    if (s == "g") return Quantity::g;
    if (s == "grad_g_ext") return Quantity::grad_g_ext;
    throw ConfigurationError(fmt::format("unknown norm quantity '{}'", s));
}

DataNorms norms(const Params& p) {
    DataNorms d;
    if (!p.raw().contains("norms")) return d;
    const auto& n = p.raw().at("norms");
    if (!n.is_object()) throw ConfigurationError("'norms' must be an object");
    for (const auto& [k, v] : n.items()) {
        if (!v.is_object() || !v.contains("exponent") || !v.contains("value"))
            throw ConfigurationError(fmt::format("norm '{}' needs 'exponent' and 'value'", k));
        double e = v.at("exponent").is_string() && v.at("exponent").get<std::string>() == "inf"
                       ? infinity
                       : v.at("exponent").get<double>();
        d.set(quantity_from(k), e, v.at("value").get<double>());
    }
    return d;
}

std::vector<std::string> join(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

BoundReport evaluate_bound(const std::string& id, const Params& p) {
    if (id == "dircota" || id == "neumcota") {
        p.require(geometry_keys);
        auto g = geometry(p);
        return id == "dircota" ? bounds::h1_mixed_bound(g, coefficient(p), norms(p))
                               : bounds::h1_neumann_bound(g, coefficient(p), norms(p));
    }
    if (id == "cota1qv") {
        p.require(join(geometry_keys, {"q", "F_2", "f_1", "h_1"}));
        auto g = geometry(p);
        return bounds::w1q_bound(g, coefficient(p), p.num("F_2"), p.num("f_1"), p.num("h_1"), p.num("q"),
                                 p.flag("mixed", g.mixed()));
    }
    if (id == "cotad") {
        p.require(join(geometry_keys, {"q"}));
        auto g = geometry(p);
        return bounds::dirac_w1q_bound(g, coefficient(p), p.num("q"), p.flag("mixed", g.mixed()));
    }
    if (id == "supess") {
        p.require(join(geometry_keys, {"p"}));
        return bounds::linf_global_bound(p.num("p"), geometry(p), coefficient(p), norms(p));
    }
    if (id == "supesscor") {
        p.require(join(geometry_keys, {"p"}));
        return bounds::linf_boundary_bound(p.num("p"), geometry(p), coefficient(p), norms(p), p.opt("alpha"));
    }
    if (id == "gmax" || id == "g2") {
        p.require(join(geometry_keys, {"q"}));
        auto g = geometry(p);
        bool mixed = p.flag("mixed", g.mixed());
        auto kb = id == "gmax" ? bounds::green_sup_bound(g, coefficient(p), p.num("q"), mixed)
                               : bounds::dini_grad_bound(g, coefficient(p), p.num("q"), mixed);
        return kb.report;
    }
    if (id == "cota0") {
        p.require({"n", "a_lower", "a_upper", "R", "k0", "energy"});
        return bounds::degiorgi_local_bound(p.num("R"), p.num("k0"), p.num("energy"), coefficient(p),
                                            static_cast<int>(p.num("n")), p.flag("neumann", false));
    }
    if (id == "nupf") {
        p.require(join(geometry_keys, {"p", "t", "f_norm"}));
        auto g = geometry(p);
        return bounds::w1p_dini_bound(g.n, p.num("p"), p.num("t"), g, coefficient(p), p.num("f_norm"));
    }
    if (id == "ppv") {
        p.require(join(geometry_keys, {"p", "F_p", "f_p", "h_p"}));
        return bounds::w1p_measurable_bound(p.num("p"), geometry(p), coefficient(p), p.num("F_p"), p.num("f_p"),
                                            p.num("h_p"));
    }
    throw ConfigurationError(fmt::format(
        "unknown formula '{}' (known: dircota neumcota cota1qv cotad supess supesscor gmax g2 cota0 nupf ppv)", id));
}

Params read_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError(fmt::format("cannot read parameter file '{}'", path));
    try {
        return Params(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("{}: {}", path, e.what()));
    }
}

// ---- solve / green

int cmd_solve(const std::string& scenario_path, const std::string& out_dir, int threads, std::ostream& out) {
    auto sc = harness::Scenario::load(scenario_path);
    auto fine = harness::solve_level(sc, sc.mesh.levels.back(), threads);
    std::string csv = "x,y,u\n";
    for (int v = 0; v < fine.mesh.vertex_count(); ++v) {
        auto p = fine.mesh.vertices()[v];
        csv += fmt::format("{:.17g},{:.17g},{:.17g}\n", p.x, p.y, fine.field[v]);
    }
    ojson j;
    j["scenario"] = sc.name;
    j["level"] = fine.level;
    j["vertices"] = fine.mesh.vertex_count();
    j["cells"] = fine.mesh.cell_count();
    j["h_max"] = fine.mesh.h_max();
    j["l2"] = fem::lq_norm(fine.field, fine.mesh, 2.0);
    j["h1_seminorm"] = fem::grad_norm(fine.field, fine.mesh, 2.0);
    j["sup"] = fem::sup_norm(fine.field);
    if (sc.mesh.levels.size() >= 2) {
        auto coarse = harness::solve_level(sc, sc.mesh.levels[sc.mesh.levels.size() - 2], threads);
        auto ex = harness::extrapolated_sup(coarse, fine);
        j["sup_coarse"] = ex.coarse;
        j["sup_extrapolated"] = ex.value;
    }
    std::filesystem::path dir(out_dir);
    write_file(dir / "field.csv", csv);
    write_file(dir / "norms.json", dump(j));
    out << dump(j);
    return 0;
}

green::KernelKind parse_kind(const std::string& s, const fem::Mesh& mesh) {
    if (s == "green-mixed") return green::KernelKind::green_mixed;
    if (s == "green-dirichlet") return green::KernelKind::green_dirichlet;
    if (s == "neumann") return green::KernelKind::neumann;
    if (!s.empty()) throw ConfigurationError(fmt::format("unknown kernel kind '{}'", s));
    if (!mesh.has_dirichlet()) return green::KernelKind::neumann;
    return mesh.boundary_measure(fem::BoundaryTag::neumann) > 0.0 ? green::KernelKind::green_mixed
                                                                   : green::KernelKind::green_dirichlet;
}

int cmd_green(const std::string& scenario_path, fem::Point x, double rho, double q, const std::string& kind_s,
              const std::string& out_dir, std::ostream& out) {
    auto sc = harness::Scenario::load(scenario_path);
    auto mesh = sc.build_mesh(sc.mesh.levels.back());
    auto coeff = sc.build_coefficient(mesh);
    auto kind = parse_kind(kind_s, mesh);
    auto col = green::kernel_column(mesh, coeff, x, rho, kind, 1e-12);
    auto kmesh = green::kernel_mesh(mesh, kind);
    auto geom = kmesh.geometry(sc.poincare);
    bool mixed = kind != green::KernelKind::neumann;
    auto kb = bounds::green_sup_bound(geom, coeff.bounds(), q, mixed);
    auto rep = green::decay_check(col, kmesh, kb, harness::decay_samples(kmesh, col.source, col.rho));
    ojson j;
    j["scenario"] = sc.name;
    j["kind"] = green::kind_name(kind);
    j["source"] = {col.source.x, col.source.y};
    j["rho"] = col.rho;
    j["q"] = q;
    j["formula_id"] = rep.formula_id;
    j["samples"] = rep.samples.size();
    j["max_ratio"] = rep.max_ratio;
    j["pass"] = rep.pass;
    j["bound_report"] = to_json(kb.report);
    std::filesystem::path dir(out_dir);
    write_file(dir / "kernel.csv", rep.to_csv());
    write_file(dir / "decay.json", dump(j));
    out << fmt::format("{} {} samples, max value/bound {:.6e}: {}\n", rep.formula_id, rep.samples.size(),
                       rep.max_ratio, rep.pass ? "pass" : "FAIL");
    return rep.pass ? 0 : 1;
}

int cmd_verify(const std::string& dir, const std::string& out_path, int threads, bool timings, std::ostream& out) {
    auto suite = harness::run_suite(dir, threads);
    if (!out_path.empty()) write_file(out_path, dump(to_json(suite, timings)));
    out << to_text(suite, timings);
    return suite.pass() ? 0 : 1;
}

} // namespace

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("ELLIPTIC_CERTS_THREADS")) {
        try {
            std::size_t used = 0;
            int v = std::stoi(env, &used);
            if (used == std::string(env).size() && v > 0) return v;
        } catch (const std::exception&) {
        }
        throw ConfigurationError(fmt::format("ELLIPTIC_CERTS_THREADS must be a positive integer, got '{}'", env));
    }
    return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<char*> argv;
    std::vector<std::string> copy = args;
    for (auto& a : copy) argv.push_back(a.data());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certified constants and a priori bounds for mixed elliptic problems"};
    app.name("elliptic-certs");
    app.require_subcommand(1);

    int n = 2;
    std::optional<double> q, lambda;
    auto* c_const = app.add_subcommand("constants", "Print Sobolev, trace and HLS constants");
    c_const->add_option("--n", n, "dimension")->required();
    c_const->add_option("--q", q, "Sobolev exponent");
    c_const->add_option("--lambda", lambda, "HLS kernel exponent");

    std::string formula, params_path, out_path;
    std::optional<double> a_lower, a_upper, bq, bp;
    auto* c_bound = app.add_subcommand("bound", "Evaluate one bound from a JSON parameter file");
    c_bound->add_option("formula", formula, "formula id")->required();
    c_bound->add_option("params", params_path, "parameter file (JSON)")->required();
    c_bound->add_option("--out", out_path, "write the report here instead of stdout");
    c_bound->add_option("--a-lower", a_lower, "override a_lower");
    c_bound->add_option("--a-upper", a_upper, "override a_upper");
    c_bound->add_option("--q", bq, "override q");
    c_bound->add_option("--p", bp, "override p");

    std::string scenario, out_dir;
    int threads = 0;
    auto* c_solve = app.add_subcommand("solve", "Solve a scenario on its finest mesh");
    c_solve->add_option("scenario", scenario, "scenario file")->required();
    c_solve->add_option("--out", out_dir, "output directory")->required();
    c_solve->add_option("--threads", threads, "worker threads");

    double gx = 0.0, gy = 0.0, rho = 0.0, gq = 1.2;
    std::string kind;
    auto* c_green = app.add_subcommand("green", "Kernel column and decay report");
    c_green->add_option("scenario", scenario, "scenario file")->required();
    c_green->add_option("--x", gx, "source x")->required();
    c_green->add_option("--y", gy, "source y")->required();
    c_green->add_option("--rho", rho, "mollifier radius, 0 for a nodal delta");
    c_green->add_option("--q", gq, "exponent of the decay bound");
    c_green->add_option("--kind", kind, "green-mixed | green-dirichlet | neumann");
    c_green->add_option("--out", out_dir, "output directory")->required();

    std::string dir;
    bool timings = false;
    auto* c_verify = app.add_subcommand("verify", "Run every scenario of a directory");
    c_verify->add_option("dir", dir, "scenario directory")->required();
    c_verify->add_option("--out", out_path, "write the JSON report here");
    c_verify->add_option("--threads", threads, "worker threads");
    c_verify->add_flag("--timings", timings, "include runtimes (not reproducible)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_const->parsed()) return cmd_constants(n, q, lambda, out);
        if (c_bound->parsed()) {
            auto p = read_params(params_path);
            if (a_lower) p.set("a_lower", *a_lower);
            if (a_upper) p.set("a_upper", *a_upper);
            if (bq) p.set("q", *bq);
            if (bp) p.set("p", *bp);
            auto text = dump(to_json(evaluate_bound(formula, p)));
            if (out_path.empty()) out << text;
            else write_file(out_path, text);
            return 0;
        }
        if (c_solve->parsed()) return cmd_solve(scenario, out_dir, resolve_threads(threads), out);
        if (c_green->parsed()) return cmd_green(scenario, {gx, gy}, rho, gq, kind, out_dir, out);
        if (c_verify->parsed()) return cmd_verify(dir, out_path, resolve_threads(threads), timings, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace ecert::cli
