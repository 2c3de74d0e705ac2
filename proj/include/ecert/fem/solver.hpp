#pragma once

#include "ecert/fem/assembly.hpp"

#include <vector>

namespace ecert::fem {

struct SolverOptions {
    double tol = 1e-10;
    int max_iterations = 0;  // 0 means 20 * unknowns
};

struct SolveResult {
    DiscreteField field;
    int iterations = 0;
    double relative_residual = 0.0;
    std::vector<double> residual_history;
};

// Jacobi-preconditioned conjugate gradients. With a mean constraint the
// iterates are kept in the zero-sum subspace and the result is shifted to
// zero weighted mean.
SolveResult solve_detailed(const LinearSystem& system, const SolverOptions& options = {});
DiscreteField solve(const LinearSystem& system, double tol = 1e-10);

// Energy a(u, u) with the full stiffness, and the load functional at u.
double energy(const LinearSystem& system, const DiscreteField& u);
double load_functional(const LinearSystem& system, const DiscreteField& u);

} // namespace ecert::fem
