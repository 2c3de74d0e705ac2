#pragma once

#include "ecert/fem/assembly.hpp"
#include "ecert/fem/mesh.hpp"
#include "ecert/fem/solver.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ecert::fem {

using Vec2 = std::array<double, 2>;

std::vector<Vec2> cell_gradients(const DiscreteField& u, const Mesh& mesh);

// q may be infinity for the sup of |grad u|.
double grad_norm(const DiscreteField& u, const Mesh& mesh, double q);
// Exact for q = 2; otherwise a degree-2 rule on 4^levels subtriangles per cell.
double lq_norm(const DiscreteField& u, const Mesh& mesh, double q, int levels = 2);
double sup_norm(const DiscreteField& u);

// P1 interpolant at p, nullopt outside the mesh.
std::optional<double> evaluate(const DiscreteField& u, const Mesh& mesh, Point p);

// Quadrature point with weight relative to the (sub)triangle area.
struct QuadPoint {
    double l1, l2, l3, w;
};
// Symmetric 7-point rule, exact for degree 5.
const std::vector<QuadPoint>& rule_degree5();
// Three edge-midpoint rule, exact for degree 2.
const std::vector<QuadPoint>& rule_degree2();

// Integral over one cell of fn(point, barycentrics) using a rule on
// 4^levels congruent subtriangles.
double integrate_cell(const Mesh& mesh, int cell, const std::vector<QuadPoint>& rule, int levels,
                      const std::function<double(Point, const std::array<double, 3>&)>& fn);

// Area of {|u| > k}, exact for P1 fields.
double level_measure(const DiscreteField& u, const Mesh& mesh, double k);

std::vector<double> sola_truncate(std::span<const double> f, double m);

// Cell values of the normalised indicator of the disk B_rho(x); overlap
// areas are computed exactly.
std::vector<double> mollified_dirac(const Mesh& mesh, Point x, double rho);
// Exact area of triangle (a, b, c) inside the disk of radius rho at center.
double circle_triangle_area(Point center, double rho, Point a, Point b, Point c);

struct CaccioppoliTerms {
    double lhs;
    double rhs;
    double prefactor;  // 4 a^#/a_#
};

CaccioppoliTerms caccioppoli_ratio(const DiscreteField& u, const Mesh& mesh,
                                   const Coefficient& coeff, Point x, double r, double R);

// ||grad g~_h||_2 of the discrete a-harmonic extension of vertex data g
// (zero conormal derivative on Neumann edges).
double dirichlet_extension_energy(const Mesh& mesh, const Coefficient& coeff,
                                  const std::vector<double>& g, double tol = 1e-12);

} // namespace ecert::fem
