#include "ecert/problem.hpp"

#include "ecert/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ecert {

void DomainGeometry::validate() const {
    if (!(volume > 0.0)) throw ConfigurationError("geometry requires volume > 0");
    if (!(diameter > 0.0)) throw ConfigurationError("geometry requires diameter > 0");
    if (!(gammaD_measure >= 0.0) || !(gamma_measure >= 0.0))
        throw ConfigurationError("geometry requires nonnegative boundary measures");
    if (!(gammaD_measure + gamma_measure > 0.0))
        throw ConfigurationError("geometry requires |Gamma_D| + |Gamma| > 0");
    if (poincare && !(*poincare > 0.0))
        throw ConfigurationError("geometry requires a positive Poincare constant");
}

void CoefficientBounds::validate() const {
    if (!(a_lower > 0.0) || !(a_lower <= a_upper) || !std::isfinite(a_upper))
        throw ConfigurationError(
            fmt::format("coefficient bounds require 0 < a_lower <= a_upper (got {}, {})", a_lower,
                        a_upper));
    if (dini_integral && !(*dini_integral > 0.0))
        throw ConfigurationError("Dini integral C_a must be positive when present");
}

const char* quantity_name(Quantity q) {
    switch (q) {
    case Quantity::f: return "f";
    case Quantity::fvec: return "fvec";
    case Quantity::h: return "h";
    case Quantity::g: return "g";
    case Quantity::grad_g_ext: return "grad_g_ext";
    }
    return "?";
}

DataNorms& DataNorms::set(Quantity q, double exponent, double value) {
    if (!(exponent >= 1.0))
        throw ConfigurationError(
            fmt::format("norm of {} requires exponent >= 1, got {}", quantity_name(q), exponent));
    if (!(value >= 0.0) || !std::isfinite(value))
        throw ConfigurationError(
            fmt::format("norm of {} must be finite and nonnegative, got {}", quantity_name(q), value));
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [q](const NormEntry& e) { return e.quantity == q; });
    if (it != entries_.end())
        *it = {q, exponent, value};
    else
        entries_.push_back({q, exponent, value});
    return *this;
}

std::optional<NormEntry> DataNorms::get(Quantity q) const {
    for (const auto& e : entries_)
        if (e.quantity == q) return e;
    return std::nullopt;
}

double DataNorms::value(Quantity q, double required_exponent) const {
    auto e = get(q);
    if (!e) return 0.0;
    bool same = std::isinf(required_exponent)
                    ? std::isinf(e->exponent)
                    : std::abs(e->exponent - required_exponent) <= 1e-9 * required_exponent;
    if (!same)
        throw PreconditionError(fmt::format("norm of {} supplied with exponent {}, formula needs {}",
                                            quantity_name(q), e->exponent, required_exponent));
    return e->value;
}

double DataNorms::value_any(Quantity q) const {
    auto e = get(q);
    return e ? e->value : 0.0;
}

} // namespace ecert
