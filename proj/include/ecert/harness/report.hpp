#pragma once

#include "ecert/bound_report.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ecert::harness {

// certified: must hold exactly; asymptotic: holds after extrapolation or on
// the finest level; reference: comparison with a known value; report: no
// pass/fail.
enum class CheckKind { certified, asymptotic, reference, report };

const char* kind_name(CheckKind k);

struct CheckRecord {
    std::string id;
    CheckKind kind = CheckKind::certified;
    double value = 0.0;
    double bound = 0.0;
    double ratio = 0.0;      // bound / value
    double threshold = 1.0;  // pass iff ratio >= threshold
    bool pass = true;
    std::string detail;
    std::optional<BoundReport> bound_report;
};

// Fills ratio and pass from value, bound and threshold.
CheckRecord make_record(std::string id, CheckKind kind, double value, double bound, double threshold = 1.0);

struct MarginReport {
    std::string scenario;
    int level = 0;
    std::vector<CheckRecord> checks;
    double runtime_s = 0.0;

    // true when every check other than report-only ones passes
    bool pass() const;
    bool certified_pass() const;
};

nlohmann::ordered_json to_json(const MarginReport& r, bool timings = false);
std::string to_text(const MarginReport& r, bool timings = false);

struct SuiteReport {
    std::vector<MarginReport> scenarios;  // sorted by name

    bool pass() const;
};

nlohmann::ordered_json to_json(const SuiteReport& r, bool timings = false);
std::string to_text(const SuiteReport& r, bool timings = false);

} // namespace ecert::harness
