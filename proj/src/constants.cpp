#include "ecert/constants.hpp"

#include "ecert/errors.hpp"
#include "ecert/problem.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace ecert {

Dimension::Dimension(int n) : n_(n) {
    if (n < 2) throw DomainError(fmt::format("dimension requires n >= 2, got {}", n));
}

SobolevExponentPair sobolev_exponents(int n, double q) {
    if (n < 2) throw DomainError(fmt::format("dimension requires n >= 2, got {}", n));
    if (!(q >= 1.0) || !(q < n - endpoint_guard))
        throw DomainError(fmt::format("exponent pair requires 1 <= q < n (q={}, n={})", q, n));
    return {q, q * n / (n - q), q * (n - 1) / (n - q)};
}

namespace constants {
namespace {

constexpr double pi = std::numbers::pi;

// Exact-ish products for integers and half-integers up to this size.
constexpr int fast_path_limit = 60;

void check_open_range(int n, double q, const char* what) {
    if (n < 2) throw DomainError(fmt::format("{} requires n >= 2, got {}", what, n));
    if (!(q > 1.0 + endpoint_guard) || !(q < n - endpoint_guard))
        throw DomainError(fmt::format("{} requires 1 < q < n (q={}, n={})", what, q, n));
}

} // namespace

double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(fmt::format("gamma requires x > 0, got {}", x));
    double twice = 2.0 * x;
    if (twice == std::floor(twice) && x <= fast_path_limit) {
        long k = static_cast<long>(twice);
        if (k % 2 == 0) {
            // Gamma(m) = (m-1)!
            double r = 1.0;
            for (long j = 2; j < k / 2; ++j) r *= static_cast<double>(j);
            return r;
        }
        // Gamma(m + 1/2) = sqrt(pi) * prod_{j<m} (j + 1/2)
        double r = std::sqrt(pi);
        for (long j = 0; j < k / 2; ++j) r *= static_cast<double>(j) + 0.5;
        return r;
    }
    return std::tgamma(x);
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(fmt::format("log-gamma requires x > 0, got {}", x));
    if (x <= fast_path_limit) return std::log(gamma_fn(x));
    return std::lgamma(x);
}

double unit_ball_volume(int n) {
    if (n < 1) throw DomainError(fmt::format("unit ball volume requires n >= 1, got {}", n));
    return std::pow(pi, n / 2.0) / gamma_fn(n / 2.0 + 1.0);
}

double unit_sphere_area(int n) {
    return n * unit_ball_volume(n);
}

double sobolev_best(int n, double q) {
    check_open_range(n, q, "Sobolev constant");
    double bracket = log_gamma(1.0 + n / 2.0) + log_gamma(n) - log_gamma(n / q) -
                     log_gamma(1.0 + n - n / q);
    double log_s = -0.5 * std::log(pi) - std::log(static_cast<double>(n)) / q +
                   (1.0 - 1.0 / q) * std::log((q - 1.0) / (n - q)) + bracket / n;
    return std::exp(log_s);
}

double sobolev_limit_S1(int n) {
    if (n < 2) throw DomainError(fmt::format("S_1 requires n >= 2, got {}", n));
    return std::pow(pi, -0.5) / n * std::exp(log_gamma(1.0 + n / 2.0) / n);
}

double trace_best(int n, double q) {
    check_open_range(n, q, "trace constant");
    double num = log_gamma(q * (n - 1) / (2.0 * (q - 1.0)));
    double den = log_gamma((n - 1) / (2.0 * (q - 1.0)));
    double log_k = 0.5 * (1.0 - q) * std::log(pi) +
                   (q - 1.0) * std::log((q - 1.0) / (n - q)) +
                   (q - 1.0) / (n - 1) * (num - den);
    return std::exp(log_k);
}

double trace_limit_K1(int n) {
    if (n < 2) throw DomainError(fmt::format("K_1 requires n >= 2, got {}", n));
    return 1.0;
}

double crude_sobolev(int n) {
    if (n < 2) throw DomainError(fmt::format("crude constant requires n >= 2, got {}", n));
    return 1.0 / std::sqrt(static_cast<double>(n));
}

double hls_sharp(int n, double lambda) {
    if (n < 2) throw DomainError(fmt::format("HLS constant requires n >= 2, got {}", n));
    if (!(lambda > 0.0) || !(lambda < n - endpoint_guard))
        throw DomainError(fmt::format("HLS constant requires 0 < lambda < n (lambda={}, n={})",
                                      lambda, n));
    double log_c = 0.5 * lambda * std::log(pi) + log_gamma((n - lambda) / 2.0) -
                   log_gamma(n - lambda / 2.0) +
                   (1.0 - lambda / n) * (log_gamma(n) - log_gamma(n / 2.0));
    return std::exp(log_c);
}

double hls_general(int n, double lambda, double p, double t) {
    if (n < 2) throw DomainError(fmt::format("HLS constant requires n >= 2, got {}", n));
    if (!(lambda > 0.0) || !(lambda < n - endpoint_guard))
        throw DomainError(fmt::format("HLS constant requires 0 < lambda < n (lambda={}, n={})",
                                      lambda, n));
    if (!(p > 1.0) || !(t > 1.0))
        throw DomainError(fmt::format("HLS constant requires p > 1 and t > 1 (p={}, t={})", p, t));
    if (std::abs(1.0 / p + lambda / n + 1.0 / t - 2.0) > 1e-12)
        throw DomainError("HLS constant requires 1/p + lambda/n + 1/t = 2");
    double l = lambda / n;
    double sphere = unit_sphere_area(n) / n;
    return n / ((n - lambda) * p * t) * std::pow(sphere, l) *
           (std::pow(l / (1.0 - 1.0 / p), l) + std::pow(l / (1.0 - 1.0 / t), l));
}

double poincare_default(const DomainGeometry& geom, std::optional<double> user_override) {
    if (user_override) {
        if (!(*user_override > 0.0))
            throw ConfigurationError("Poincare constant must be positive");
        return *user_override;
    }
    if (!geom.convex)
        throw ConfigurationError(
            "Poincare constant has no default for a non-convex domain; supply C_* explicitly");
    return geom.diameter / pi;
}

} // namespace constants
} // namespace ecert
