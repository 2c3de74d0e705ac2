#pragma once

#include "ecert/bound_report.hpp"
#include "ecert/problem.hpp"

#include <cmath>
#include <optional>

namespace ecert {

// Pointwise kernel bound r -> constant * r^exponent.
struct KernelBound {
    double constant = 0.0;
    double exponent = 0.0;
    BoundReport report;

    double operator()(double r) const { return constant * std::pow(r, exponent); }
};

namespace bounds {

// C_n(A, B) for the H^1 estimates. t and s are the exponents of f and h.
double cn_pair(int n, double t, double s, double volume, double A, double B);

BoundReport h1_mixed_bound(const DomainGeometry& geom, const CoefficientBounds& coeff,
                           const DataNorms& norms);
BoundReport h1_neumann_bound(const DomainGeometry& geom, const CoefficientBounds& coeff,
                             const DataNorms& norms);

double w1q_c1(const DomainGeometry& geom, double q);
// The n = 2 branch carries a volume factor, hence the geometry argument.
double w1q_c2(const DomainGeometry& geom, double q, double A);
double ell(double q);

BoundReport w1q_bound(const DomainGeometry& geom, const CoefficientBounds& coeff, double fvec_l2,
                      double f_l1, double h_l1, double q, bool mixed);
BoundReport dirac_w1q_bound(const DomainGeometry& geom, const CoefficientBounds& coeff, double q,
                            bool mixed);

// Norm exponents expected by linf_global_bound / linf_boundary_bound.
double linf_f_exponent(int n, double p);
double linf_h_exponent(int n, double p);

BoundReport linf_global_bound(double p, const DomainGeometry& geom,
                              const CoefficientBounds& coeff, const DataNorms& norms);
BoundReport linf_boundary_bound(double p, const DomainGeometry& geom,
                                const CoefficientBounds& coeff, const DataNorms& norms,
                                std::optional<double> alpha = std::nullopt);

BoundReport degiorgi_local_bound(double R, double k0, double energy,
                                 const CoefficientBounds& coeff, int n, bool neumann);

double stampacchia_level(double k0, double C, double alpha, double beta, double volume);

KernelBound green_sup_bound(const DomainGeometry& geom, const CoefficientBounds& coeff, double q,
                            bool mixed);
KernelBound dini_grad_bound(const DomainGeometry& geom, const CoefficientBounds& coeff, double q,
                            bool mixed);

// Regime (mixed or Neumann) follows geom.gammaD_measure.
BoundReport w1p_dini_bound(int n, double p, double t, const DomainGeometry& geom,
                           const CoefficientBounds& coeff, double f_norm_t);
BoundReport w1p_measurable_bound(double p, const DomainGeometry& geom,
                                 const CoefficientBounds& coeff, double fvec_p, double f_p,
                                 double h_p);

} // namespace bounds
} // namespace ecert
