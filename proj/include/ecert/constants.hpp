#pragma once

#include <optional>

namespace ecert {

struct DomainGeometry;

// Spatial dimension, n >= 2.
class Dimension {
public:
    explicit Dimension(int n);
    int value() const { return n_; }
    operator int() const { return n_; }

private:
    int n_;
};

// q together with its critical Sobolev exponent q* = qn/(n-q) and the
// critical trace exponent q_* = q(n-1)/(n-q).
struct SobolevExponentPair {
    double q;
    double q_star;
    double q_lower;
};

SobolevExponentPair sobolev_exponents(int n, double q);

// Distance to the singular endpoints below which formulas are rejected.
inline constexpr double endpoint_guard = 1e-9;

namespace constants {

double gamma_fn(double x);
double log_gamma(double x);

double unit_ball_volume(int n);
double unit_sphere_area(int n);

// Talenti constant S_q, 1 < q < n.
double sobolev_best(int n, double q);
// Limit constant S_1.
double sobolev_limit_S1(int n);
// Trace constant K_q, 1 < q < n, evaluated verbatim.
double trace_best(int n, double q);
// Limit of K_q as q -> 1+; equals 1 for every n.
double trace_limit_K1(int n);
double crude_sobolev(int n);

// Sharp diagonal Hardy-Littlewood-Sobolev constant C(n, lambda).
double hls_sharp(int n, double lambda);
// Off-diagonal constant (Lieb-Loss form), not sharp.
double hls_general(int n, double lambda, double p, double t);

// delta/pi for convex geometry; the override wins whenever given.
double poincare_default(const DomainGeometry& geom,
                        std::optional<double> user_override = std::nullopt);

} // namespace constants
} // namespace ecert
