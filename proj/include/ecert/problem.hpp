#pragma once

#include "ecert/constants.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace ecert {

// Measurable descriptors of the domain. poincare is optional because only
// convex domains have a default.
struct DomainGeometry {
    Dimension n{2};
    double volume = 0.0;
    double diameter = 0.0;
    double gammaD_measure = 0.0;
    double gamma_measure = 0.0;
    std::optional<double> poincare;
    bool convex = false;

    void validate() const;
    bool mixed() const { return gammaD_measure > 0.0; }
};

struct CoefficientBounds {
    double a_lower = 1.0;
    double a_upper = 1.0;
    std::optional<double> dini_integral;

    void validate() const;
};

enum class Quantity { f, fvec, h, g, grad_g_ext };

const char* quantity_name(Quantity q);

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct NormEntry {
    Quantity quantity;
    double exponent;
    double value;
};

// Named data norms. A quantity that is absent contributes zero.
class DataNorms {
public:
    DataNorms& set(Quantity q, double exponent, double value);
    std::optional<NormEntry> get(Quantity q) const;
    // Value of the norm; 0 when absent. Throws PreconditionError when the
    // stored exponent differs from the one the formula needs.
    double value(Quantity q, double required_exponent) const;
    // Value whatever the exponent; 0 when absent.
    double value_any(Quantity q) const;
    const std::vector<NormEntry>& entries() const { return entries_; }

private:
    std::vector<NormEntry> entries_;
};

} // namespace ecert
