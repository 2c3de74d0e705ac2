#include "ecert/fem/solver.hpp"

#include "ecert/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace ecert::fem {
namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void remove_mean(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    s /= static_cast<double>(v.size());
    for (double& x : v) x -= s;
}

} // namespace

SolveResult solve_detailed(const LinearSystem& system, const SolverOptions& options) {
    if (!(options.tol > 0.0)) throw ConfigurationError("solver tolerance must be positive");
    const CsrMatrix& A = system.matrix;
    const int n = A.n;
    const bool constrained = system.constraint != Constraint::none;
    int max_it = options.max_iterations > 0 ? options.max_iterations : 20 * n;

    SolveResult res;
    std::vector<double> x(n, 0.0);
    std::vector<double> r = system.rhs;
    if (constrained) remove_mean(r);
    double bnorm = std::sqrt(dot(r, r));
    if (bnorm == 0.0) {
        if (!constrained)
            for (int i = 0; i < n; ++i)
                if (system.fixed[i]) x[i] = system.fixed_values[i];
        res.field = DiscreteField(std::move(x));
        return res;
    }
    std::vector<double> dinv = A.diagonal();
    for (double& d : dinv) {
        if (!(d > 0.0)) throw SolverError("stiffness has a nonpositive diagonal entry", {});
        d = 1.0 / d;
    }
    std::vector<double> z(n), p(n), Ap(n);
    for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    if (constrained) remove_mean(z);
    p = z;
    double rz = dot(r, z);
    double rel = 1.0;
    int it = 0;
    while (true) {
        rel = std::sqrt(dot(r, r)) / bnorm;
        res.residual_history.push_back(rel);
        if (rel <= options.tol) break;
        if (it >= max_it)
            throw SolverError(fmt::format("conjugate gradients did not reach {} in {} iterations (residual {})",
                                          options.tol, max_it, rel),
                              res.residual_history);
        A.multiply(p, Ap);
        double pAp = dot(p, Ap);
        if (!(pAp > 0.0))
            throw SolverError(fmt::format("conjugate gradients broke down at iteration {}", it),
                              res.residual_history);
        double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        if (constrained) {
            remove_mean(r);
            remove_mean(x);
        }
        for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
        if (constrained) remove_mean(z);
        double rz_new = dot(r, z);
        double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        ++it;
    }

    // true residual of the final iterate
    std::vector<double> Ax(n);
    A.multiply(x, Ax);
    std::vector<double> tr(n);
    for (int i = 0; i < n; ++i) tr[i] = system.rhs[i] - Ax[i];
    if (constrained) remove_mean(tr);
    res.relative_residual = std::sqrt(dot(tr, tr)) / bnorm;

    if (constrained) {
        double wu = 0.0, ws = 0.0;
        for (int i = 0; i < n; ++i) {
            wu += system.weights[i] * x[i];
            ws += system.weights[i];
        }
        for (double& v : x) v -= wu / ws;
    } else {
        for (int i = 0; i < n; ++i)
            if (system.fixed[i]) x[i] = system.fixed_values[i];
    }
    res.iterations = it;
    res.field = DiscreteField(std::move(x));
    return res;
}

DiscreteField solve(const LinearSystem& system, double tol) {
    return solve_detailed(system, SolverOptions{tol, 0}).field;
}

double energy(const LinearSystem& system, const DiscreteField& u) {
    std::vector<double> Au(u.size());
    system.stiffness.multiply(u.values, Au);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * Au[i];
    return s;
}

double load_functional(const LinearSystem& system, const DiscreteField& u) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += system.load[i] * u[i];
    return s;
}

} // namespace ecert::fem
