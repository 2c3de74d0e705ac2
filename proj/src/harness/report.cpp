#include "ecert/harness/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ecert::harness {

const char* kind_name(CheckKind k) {
    switch (k) {
    case CheckKind::certified: return "certified";
    case CheckKind::asymptotic: return "asymptotic";
    case CheckKind::reference: return "reference";
    case CheckKind::report: return "report";
    }
    return "?";
}

CheckRecord make_record(std::string id, CheckKind kind, double value, double bound, double threshold) {
    CheckRecord r;
    r.id = std::move(id);
    r.kind = kind;
    r.value = value;
    r.bound = bound;
    r.threshold = threshold;
    if (value == 0.0) r.ratio = bound >= 0.0 ? INFINITY : -INFINITY;
    else r.ratio = bound / value;
    r.pass = kind == CheckKind::report || r.ratio >= threshold;
    return r;
}

bool MarginReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

bool MarginReport::certified_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckRecord& c) { return c.kind != CheckKind::certified || c.pass; });
}

bool SuiteReport::pass() const {
    return std::all_of(scenarios.begin(), scenarios.end(), [](const MarginReport& m) { return m.pass(); });
}

namespace {

nlohmann::ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

std::string fmt_num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.6e}", v);
}

} // namespace

nlohmann::ordered_json to_json(const MarginReport& r, bool timings) {
    nlohmann::ordered_json j;
    j["scenario"] = r.scenario;
    j["level"] = r.level;
    j["pass"] = r.pass();
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json cj;
        cj["id"] = c.id;
        cj["kind"] = kind_name(c.kind);
        cj["value"] = number(c.value);
        cj["bound"] = number(c.bound);
        cj["ratio"] = number(c.ratio);
        cj["threshold"] = number(c.threshold);
        cj["pass"] = c.pass;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        if (c.bound_report) cj["bound_report"] = to_json(*c.bound_report);
        checks.push_back(std::move(cj));
    }
    if (timings) j["runtime_s"] = r.runtime_s;
    return j;
}

std::string to_text(const MarginReport& r, bool timings) {
    std::size_t w = 5;
    for (const auto& c : r.checks) w = std::max(w, c.id.size());
    std::string out = fmt::format("scenario {} (level {}){}\n", r.scenario, r.level,
                                  timings ? fmt::format(" {:.2f}s", r.runtime_s) : "");
    out += fmt::format("  {:<{}}  {:<10}  {:>13}  {:>13}  {:>13}  {}\n", "check", w, "kind", "value", "bound",
                       "ratio", "result");
    for (const auto& c : r.checks)
        out += fmt::format("  {:<{}}  {:<10}  {:>13}  {:>13}  {:>13}  {}\n", c.id, w, kind_name(c.kind),
                           fmt_num(c.value), fmt_num(c.bound), fmt_num(c.ratio),
                           c.kind == CheckKind::report ? "info" : (c.pass ? "pass" : "FAIL"));
    return out;
}

nlohmann::ordered_json to_json(const SuiteReport& r, bool timings) {
    nlohmann::ordered_json j;
    j["pass"] = r.pass();
    auto& arr = j["scenarios"] = nlohmann::ordered_json::array();
    for (const auto& m : r.scenarios) arr.push_back(to_json(m, timings));
    return j;
}

std::string to_text(const SuiteReport& r, bool timings) {
    std::string out;
    for (const auto& m : r.scenarios) out += to_text(m, timings) + "\n";
    out += r.pass() ? "suite: pass\n" : "suite: FAIL\n";
    return out;
}

} // namespace ecert::harness
