#pragma once

#include "ecert/bound_report.hpp"
#include "ecert/fem/assembly.hpp"
#include "ecert/fem/mesh.hpp"
#include "ecert/harness/report.hpp"
#include "ecert/harness/scenario.hpp"
#include "ecert/problem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ecert::harness {

struct Solved {
    int level;
    fem::Mesh mesh;
    fem::Coefficient coeff;
    fem::ProblemData data;
    fem::DiscreteField field;
};

Solved solve_level(const Scenario& sc, int level, int threads = 1);

// Norms of the scenario data on a mesh: the larger of the discrete value
// (the data the solver actually sees) and a degree-5 quadrature of the
// closed form, inflated by 1.01.
class NormEstimator {
public:
    NormEstimator(const Scenario& sc, const Solved& s);

    double f(double p) const;
    double fvec(double p) const;
    double h(double p) const;
    double g_inf() const;
    double grad_g_ext() const;
    bool g_zero() const;

    static constexpr double inflation = 1.01;

private:
    const Solved& s_;
    CompiledData cd_;
};

struct Extrapolated {
    double coarse;
    double fine;
    double value;
};

// Richardson extrapolation of sup|u_h| over the last two levels (rate 2).
Extrapolated extrapolated_sup(const Solved& coarse, const Solved& fine);

struct RateRow {
    int level;
    double h;
    double l2_error;
    double energy_error;
    std::optional<double> l2_rate;
    std::optional<double> energy_rate;
};

std::vector<RateRow> convergence_study(const Scenario& sc, const std::vector<int>& levels);

struct SolaRow {
    double m;
    double grad_q;
    double bound;
    std::optional<double> cauchy;  // ||grad(u_2m - u_m)||_q
};

struct SolaReport {
    std::vector<SolaRow> rows;
    BoundReport bound;
};

SolaReport sola_study(const Scenario& sc, double q, const std::vector<double>& m_list);

struct LevelDecay {
    std::vector<double> k;
    std::vector<double> measure;
    double beta = 0.0;
};

// |A(k)| at k_i = i sup|u| / count, i = 1 .. count - 1, and the slope of
// log|A(k_{i+1})| against log|A(k_i)| over nonempty consecutive levels.
LevelDecay level_decay_study(const fem::DiscreteField& u, const fem::Mesh& mesh, int count);

// Vertices at distance >= 4 max(rho, h) from the source, thinned to about
// 200 points.
std::vector<fem::Point> decay_samples(const fem::Mesh& mesh, fem::Point src, double rho);

MarginReport run_scenario(const Scenario& sc, int threads = 1);

// All *.ini files of a directory, run concurrently, ordered by scenario name.
SuiteReport run_suite(const std::string& dir, int threads = 1);

} // namespace ecert::harness
