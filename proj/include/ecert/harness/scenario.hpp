#pragma once

#include "ecert/expr.hpp"
#include "ecert/fem/assembly.hpp"
#include "ecert/fem/mesh.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ecert::harness {

struct MeshSpec {
    std::string type = "square";  // square | disk | file
    std::vector<int> levels;      // subdivisions per side (square) or radius (disk), coarse to fine
    double side = 1.0;            // square side length
    std::string path;             // type = file
};

struct CoefficientSpec {
    std::string type = "constant";  // constant | checkerboard | radial-dini
    double value = 1.0;
    double contrast = 1.0;
    int blocks = 2;
    double L = 0.0;
    double gamma = 1.0;
    fem::Point center{0.5, 0.5};
    std::optional<double> dini;  // declared Dini integral C_a
};

// Closed-form data over x, y. Absent entries are zero.
struct DataSpec {
    std::optional<std::string> f, fvec_x, fvec_y, h, g;
    std::optional<std::string> exact, exact_dx, exact_dy;
};

struct Ball {
    fem::Point x;
    double r;
    double R;
};

struct CheckSpec {
    std::vector<std::string> run;
    double t = 2.0;  // exponents of f and h in the H^1 estimate (n = 2)
    double s = 2.0;
    std::vector<double> q{1.2};
    double p = 4.0;
    std::optional<double> reference;
    double reference_tol = 1e-4;
    int level_count = 12;
    std::vector<Ball> balls;
    double caccioppoli_slack = 1.1;
    std::vector<double> sola_m{4, 16, 64};
    double sola_q = 1.3;
    fem::Point source{0.5, 0.5};
    double rho = 0.0;
    double kernel_q = 1.2;
    std::string kernel_kind;  // green-mixed | green-dirichlet | neumann, default from tags
    std::optional<double> expect_l2;
    std::optional<double> expect_energy;
    double rate_tol = 0.2;
};

struct Scenario {
    std::string name;
    std::string source;  // file the scenario came from
    MeshSpec mesh;
    // bottom, right, top, left for squares; element 0 for "all"
    std::array<std::vector<fem::TagSegment>, 4> sides;
    bool sides_set = false;
    CoefficientSpec coefficient;
    DataSpec data;
    CheckSpec checks;
    std::optional<double> poincare;
    double tol = 1e-10;

    static Scenario parse(const std::string& text, const std::string& source_name);
    static Scenario load(const std::string& path);

    fem::Mesh build_mesh(int level) const;
    fem::Coefficient build_coefficient(const fem::Mesh& mesh) const;
    fem::ProblemData build_data(const fem::Mesh& mesh) const;
    bool has_check(const std::string& id) const;
};

// Data expressions compiled over (x, y); nullopt entries are zero.
struct CompiledData {
    std::optional<Expression> f, fvec_x, fvec_y, h, g, exact, exact_dx, exact_dy;

    explicit CompiledData(const DataSpec& spec);
};

} // namespace ecert::harness
