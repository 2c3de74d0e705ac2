#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace ecert {

struct TraceEntry {
    std::string symbol;
    double value;
};

// A bound value together with every constant that went into it.
// expression recombines the trace symbols into bound_value.
struct BoundReport {
    std::string formula_id;
    double bound_value = 0.0;
    std::vector<TraceEntry> constant_trace;
    std::string expression;
    std::vector<std::string> preconditions_checked;
    std::vector<std::string> notes;
    bool certified = true;

    BoundReport& trace(std::string symbol, double value);
    double traced(const std::string& symbol) const;
    void validate() const;
};

nlohmann::ordered_json to_json(const BoundReport& r);

// Re-evaluates report.expression from report.constant_trace.
double recombine(const BoundReport& r);

} // namespace ecert
