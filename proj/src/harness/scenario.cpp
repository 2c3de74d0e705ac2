#include "ecert/harness/scenario.hpp"

#include "ecert/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace ecert::harness {

namespace {

const std::set<std::string> known_checks = {"h1",          "w1q",         "kernel_w1q", "linf",
                                            "sup_reference", "level_decay", "caccioppoli", "sola",
                                            "convergence", "kernel_decay"};

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        auto t = trim(cur);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

class Cursor {
public:
    Cursor(std::string source, int line, std::string section)
        : source_(std::move(source)), line_(line), section_(std::move(section)) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(fmt::format("{}:{} [{}]: {}", source_, line_, section_, msg));
    }

    double number(const std::string& s) const {
        double v = 0.0;
        auto t = trim(s);
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) fail(fmt::format("expected a number, got '{}'", s));
        if (!std::isfinite(v)) fail(fmt::format("non-finite number '{}'", s));
        return v;
    }

    int integer(const std::string& s) const {
        double v = number(s);
        if (v != std::floor(v) || std::abs(v) > 1e9) fail(fmt::format("expected an integer, got '{}'", s));
        return static_cast<int>(v);
    }

    std::vector<double> numbers(const std::string& s, char sep = ',') const {
        std::vector<double> out;
        for (const auto& part : split(s, sep)) out.push_back(number(part));
        if (out.empty()) fail("expected a list of numbers");
        return out;
    }

    fem::Point point(const std::string& s) const {
        auto v = numbers(s);
        if (v.size() != 2) fail(fmt::format("expected a point 'x, y', got '{}'", s));
        return {v[0], v[1]};
    }

    std::string expression(const std::string& s) const {
        try {
            (void)Expression::parse(s, {"x", "y"});
        } catch (const ParseError& e) {
            fail(e.what());
        }
        return s;
    }

    fem::BoundaryTag tag(const std::string& s) const {
        auto t = trim(s);
        if (t == "dirichlet" || t == "D") return fem::BoundaryTag::dirichlet;
        if (t == "neumann" || t == "N") return fem::BoundaryTag::neumann;
        fail(fmt::format("unknown boundary tag '{}'", s));
    }

    std::vector<fem::TagSegment> segments(const std::string& s) const {
        auto parts = split(s, ',');
        if (parts.size() == 1 && split(parts[0], ' ').size() == 1) return {{0.0, 1.0, tag(parts[0])}};
        std::vector<fem::TagSegment> out;
        for (const auto& part : parts) {
            auto w = split(part, ' ');
            if (w.size() != 3) fail(fmt::format("expected 'tag from to', got '{}'", part));
            out.push_back({number(w[1]), number(w[2]), tag(w[0])});
        }
        return out;
    }

private:
    std::string source_;
    int line_;
    std::string section_;
};

} // namespace

Scenario Scenario::parse(const std::string& text, const std::string& source_name) {
    Scenario sc;
    sc.source = source_name;
    std::set<std::string> seen;
    std::set<std::string> sections_seen;
    std::string section;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    bool have_levels = false;
    while (std::getline(is, raw)) {
        ++lineno;
        auto cut = raw.find('#');
        std::string line = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
        if (line.empty()) continue;
        Cursor at(source_name, lineno, section.empty() ? "top" : section);
        if (line.front() == '[') {
            if (line.back() != ']') at.fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            static const std::set<std::string> allowed = {"mesh", "boundary", "coefficient", "data", "checks", "solver"};
            if (!allowed.count(section)) Cursor(source_name, lineno, section).fail("unknown section");
            if (!sections_seen.insert(section).second) Cursor(source_name, lineno, section).fail("duplicate section");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) at.fail(fmt::format("expected 'key = value', got '{}'", line));
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) at.fail("empty key");
        if (value.empty()) at.fail(fmt::format("empty value for '{}'", key));
        if (!seen.insert(section + "." + key).second) at.fail(fmt::format("duplicate key '{}'", key));

        if (section.empty()) {
            if (key == "name") sc.name = value;
            else at.fail(fmt::format("unknown key '{}'", key));
        } else if (section == "mesh") {
            if (key == "type") {
                if (value != "square" && value != "disk" && value != "file") at.fail(fmt::format("unknown mesh type '{}'", value));
                sc.mesh.type = value;
            } else if (key == "levels") {
                for (double v : at.numbers(value)) {
                    int m = at.integer(fmt::format("{}", v));
                    if (m < 1) at.fail("mesh levels must be positive");
                    sc.mesh.levels.push_back(m);
                }
                if (!std::is_sorted(sc.mesh.levels.begin(), sc.mesh.levels.end()))
                    at.fail("mesh levels must be increasing");
                have_levels = true;
            } else if (key == "path") {
                sc.mesh.path = value;
            } else if (key == "side") {
                sc.mesh.side = at.number(value);
                if (!(sc.mesh.side > 0.0)) at.fail("side must be positive");
            } else if (key == "poincare") {
                sc.poincare = at.number(value);
            } else {
                at.fail(fmt::format("unknown key '{}'", key));
            }
        } else if (section == "boundary") {
            static const std::vector<std::string> names = {"bottom", "right", "top", "left"};
            auto it = std::find(names.begin(), names.end(), key);
            if (key == "all") {
                auto segs = at.segments(value);
                for (auto& side : sc.sides) side = segs;
            } else if (it != names.end()) {
                sc.sides[it - names.begin()] = at.segments(value);
            } else {
                at.fail(fmt::format("unknown key '{}'", key));
            }
            sc.sides_set = true;
        } else if (section == "coefficient") {
            auto& c = sc.coefficient;
            if (key == "type") {
                if (value != "constant" && value != "checkerboard" && value != "radial-dini")
                    at.fail(fmt::format("unknown coefficient type '{}'", value));
                c.type = value;
            } else if (key == "value") c.value = at.number(value);
            else if (key == "contrast") c.contrast = at.number(value);
            else if (key == "blocks") c.blocks = at.integer(value);
            else if (key == "L") c.L = at.number(value);
            else if (key == "gamma") c.gamma = at.number(value);
            else if (key == "center") c.center = at.point(value);
            else if (key == "dini") c.dini = at.number(value);
            else at.fail(fmt::format("unknown key '{}'", key));
        } else if (section == "data") {
            auto& d = sc.data;
            std::string e = at.expression(value);
            if (key == "f") d.f = e;
            else if (key == "fvec_x") d.fvec_x = e;
            else if (key == "fvec_y") d.fvec_y = e;
            else if (key == "h") d.h = e;
            else if (key == "g") d.g = e;
            else if (key == "exact") d.exact = e;
            else if (key == "exact_dx") d.exact_dx = e;
            else if (key == "exact_dy") d.exact_dy = e;
            else at.fail(fmt::format("unknown key '{}'", key));
        } else if (section == "checks") {
            auto& k = sc.checks;
            if (key == "run") {
                k.run = split(value, ',');
                for (const auto& id : k.run)
                    if (!known_checks.count(id)) at.fail(fmt::format("unknown check '{}'", id));
            } else if (key == "t") k.t = at.number(value);
            else if (key == "s") k.s = at.number(value);
            else if (key == "q") k.q = at.numbers(value);
            else if (key == "p") k.p = at.number(value);
            else if (key == "reference") k.reference = at.number(value);
            else if (key == "reference_tol") k.reference_tol = at.number(value);
            else if (key == "level_count") k.level_count = at.integer(value);
            else if (key == "balls") {
                for (const auto& b : split(value, ';')) {
                    auto v = at.numbers(b);
                    if (v.size() != 4) at.fail(fmt::format("ball needs 'x, y, r, R', got '{}'", b));
                    k.balls.push_back({{v[0], v[1]}, v[2], v[3]});
                }
            } else if (key == "caccioppoli_slack") k.caccioppoli_slack = at.number(value);
            else if (key == "sola_m") k.sola_m = at.numbers(value);
            else if (key == "sola_q") k.sola_q = at.number(value);
            else if (key == "source") k.source = at.point(value);
            else if (key == "rho") k.rho = at.number(value);
            else if (key == "kernel_q") k.kernel_q = at.number(value);
            else if (key == "kernel_kind") {
                if (value != "green-mixed" && value != "green-dirichlet" && value != "neumann")
                    at.fail(fmt::format("unknown kernel kind '{}'", value));
                k.kernel_kind = value;
            } else if (key == "expect_l2") k.expect_l2 = at.number(value);
            else if (key == "expect_energy") k.expect_energy = at.number(value);
            else if (key == "rate_tol") k.rate_tol = at.number(value);
            else at.fail(fmt::format("unknown key '{}'", key));
        } else if (section == "solver") {
            if (key == "tol") sc.tol = at.number(value);
            else at.fail(fmt::format("unknown key '{}'", key));
        }
    }

    Cursor end(source_name, lineno, "top");
    if (sc.name.empty()) end.fail("missing 'name'");
    if (sc.mesh.type == "file") {
        if (sc.mesh.path.empty()) end.fail("mesh type 'file' needs 'path'");
        if (sc.sides_set) end.fail("file meshes carry their own boundary tags");
        if (!have_levels) sc.mesh.levels = {1};
    } else if (!have_levels) {
        Cursor(source_name, lineno, "mesh").fail("missing 'levels'");
    }
    if (sc.mesh.type == "disk" && sc.sides_set) {
        for (const auto& side : sc.sides)
            if (side.size() != 1 || side[0].tag != sc.sides[0][0].tag)
                Cursor(source_name, lineno, "boundary").fail("disk meshes take a single 'all' tag");
    }
    if (!sc.sides_set)
        for (auto& side : sc.sides) side = {{0.0, 1.0, fem::BoundaryTag::dirichlet}};
    if (sc.mesh.type == "square") {
        fem::SquareTags tags{sc.sides};
        try {
            tags.validate();
        } catch (const ConfigurationError& e) {
            Cursor(source_name, lineno, "boundary").fail(e.what());
        }
    }
    const auto& c = sc.coefficient;
    Cursor cc(source_name, lineno, "coefficient");
    if (!(c.value > 0.0)) cc.fail("coefficient value must be positive");
    if (c.type == "checkerboard" && (!(c.contrast >= 1.0) || c.blocks < 1))
        cc.fail("checkerboard needs contrast >= 1 and blocks >= 1");
    if (c.type == "radial-dini" && (!(c.L >= 0.0) || !(c.gamma > 0.0) || c.gamma > 1.0))
        cc.fail("radial-dini needs L >= 0 and 0 < gamma <= 1");
    if (sc.checks.run.empty()) Cursor(source_name, lineno, "checks").fail("missing 'run'");
    if (!(sc.tol > 0.0)) Cursor(source_name, lineno, "solver").fail("tol must be positive");
    return sc;
}

Scenario Scenario::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError(fmt::format("cannot read scenario file '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

bool Scenario::has_check(const std::string& id) const {
    return std::find(checks.run.begin(), checks.run.end(), id) != checks.run.end();
}

fem::Mesh Scenario::build_mesh(int level) const {
    if (mesh.type == "square") {
        auto unit = fem::build_structured_square(level, fem::SquareTags{sides});
        if (mesh.side == 1.0) return unit;
        auto vs = unit.vertices();
        for (auto& v : vs) v = {v.x * mesh.side, v.y * mesh.side};
        return fem::Mesh(std::move(vs), unit.cells(), unit.boundary_edges());
    }
    if (mesh.type == "disk") return fem::build_disk(level, sides[0][0].tag);
    std::filesystem::path p(mesh.path);
    if (p.is_relative()) p = std::filesystem::path(source).parent_path() / p;
    return fem::read_mesh_file(p.string());
}

fem::Coefficient Scenario::build_coefficient(const fem::Mesh& m) const {
    const auto& c = coefficient;
    std::vector<double> values(m.cell_count(), c.value);
    CoefficientBounds b{c.value, c.value, c.dini};
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const auto& v : m.vertices()) {
        x0 = std::min(x0, v.x);
        y0 = std::min(y0, v.y);
        x1 = std::max(x1, v.x);
        y1 = std::max(y1, v.y);
    }
    if (c.type == "checkerboard") {
        b.a_upper = c.value * c.contrast;
        for (int k = 0; k < m.cell_count(); ++k) {
            auto p = m.centroid(k);
            int i = std::min(c.blocks - 1, static_cast<int>((p.x - x0) / (x1 - x0) * c.blocks));
            int j = std::min(c.blocks - 1, static_cast<int>((p.y - y0) / (y1 - y0) * c.blocks));
            values[k] = (i + j) % 2 == 0 ? c.value : c.value * c.contrast;
        }
    } else if (c.type == "radial-dini") {
        double reach = std::max({fem::distance(c.center, {x0, y0}), fem::distance(c.center, {x1, y0}),
                                 fem::distance(c.center, {x0, y1}), fem::distance(c.center, {x1, y1})});
        b.a_upper = c.value + c.L * std::pow(reach, c.gamma);
        if (!b.dini_integral) b.dini_integral = c.L / c.gamma;
        for (int k = 0; k < m.cell_count(); ++k)
            values[k] = c.value + c.L * std::pow(fem::distance(m.centroid(k), c.center), c.gamma);
    }
    return fem::Coefficient(std::move(values), b);
}

CompiledData::CompiledData(const DataSpec& spec) {
    auto compile = [](const std::optional<std::string>& s) -> std::optional<Expression> {
        if (!s) return std::nullopt;
        return Expression::parse(*s, {"x", "y"});
    };
    f = compile(spec.f);
    fvec_x = compile(spec.fvec_x);
    fvec_y = compile(spec.fvec_y);
    h = compile(spec.h);
    g = compile(spec.g);
    exact = compile(spec.exact);
    exact_dx = compile(spec.exact_dx);
    exact_dy = compile(spec.exact_dy);
}

fem::ProblemData Scenario::build_data(const fem::Mesh& m) const {
    CompiledData cd(data);
    auto d = fem::ProblemData::zero(m);
    for (int c = 0; c < m.cell_count(); ++c) {
        auto p = m.centroid(c);
        if (cd.f) d.f[c] = (*cd.f)(p.x, p.y);
        if (cd.fvec_x) d.fvec[c][0] = (*cd.fvec_x)(p.x, p.y);
        if (cd.fvec_y) d.fvec[c][1] = (*cd.fvec_y)(p.x, p.y);
    }
    const auto& vs = m.vertices();
    if (cd.h) {
        for (std::size_t e = 0; e < m.boundary_edges().size(); ++e) {
            const auto& be = m.boundary_edges()[e];
            if (be.tag != fem::BoundaryTag::neumann) continue;
            fem::Point mid{(vs[be.v[0]].x + vs[be.v[1]].x) / 2, (vs[be.v[0]].y + vs[be.v[1]].y) / 2};
            d.h[e] = (*cd.h)(mid.x, mid.y);
        }
    }
    if (cd.g)
        for (int v = 0; v < m.vertex_count(); ++v)
            if (m.is_dirichlet_vertex(v)) d.g[v] = (*cd.g)(vs[v].x, vs[v].y);
    d.validate(m);
    return d;
}

} // namespace ecert::harness
