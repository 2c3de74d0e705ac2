#include "ecert/bound_report.hpp"

#include "ecert/errors.hpp"
#include "ecert/expr.hpp"

#include <fmt/format.h>

#include <cmath>

namespace ecert {

BoundReport& BoundReport::trace(std::string symbol, double value) {
    for (auto& e : constant_trace) {
        if (e.symbol == symbol) {
            e.value = value;
            return *this;
        }
    }
    constant_trace.push_back({std::move(symbol), value});
    return *this;
}

double BoundReport::traced(const std::string& symbol) const {
    for (const auto& e : constant_trace)
        if (e.symbol == symbol) return e.value;
    throw ConfigurationError(fmt::format("report {} has no trace symbol '{}'", formula_id, symbol));
}

void BoundReport::validate() const {
    if (!(bound_value >= 0.0) || !std::isfinite(bound_value))
        throw DomainError(fmt::format("{}: bound evaluated to {}", formula_id, bound_value));
    for (const auto& e : constant_trace)
        if (!std::isfinite(e.value))
            throw DomainError(fmt::format("{}: trace symbol {} is not finite", formula_id, e.symbol));
}

nlohmann::ordered_json to_json(const BoundReport& r) {
    nlohmann::ordered_json j;
    j["formula_id"] = r.formula_id;
    j["bound"] = r.bound_value;
    auto trace = nlohmann::ordered_json::array();
    for (const auto& e : r.constant_trace) {
        nlohmann::ordered_json t;
        t["symbol"] = e.symbol;
        t["value"] = e.value;
        trace.push_back(t);
    }
    j["trace"] = trace;
    j["certified"] = r.certified;
    j["expression"] = r.expression;
    j["preconditions"] = r.preconditions_checked;
    j["notes"] = r.notes;
    return j;
}

double recombine(const BoundReport& r) {
    std::vector<std::pair<std::string, double>> bindings;
    for (const auto& e : r.constant_trace) bindings.emplace_back(e.symbol, e.value);
    return evaluate(r.expression, bindings);
}

} // namespace ecert
