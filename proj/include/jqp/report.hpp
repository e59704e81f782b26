#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "jqp/scenario.hpp"

namespace jqp {

struct CheckRecord {
    std::string name;
    std::string verdict;             // "pass" | "fail" | "error" | "skipped"
    std::string method;              // how the verdict was reached, when sampled/exact
    double max_deviation = 0.0;
    std::vector<std::string> notes;  // witnesses and determinations, human-readable
    double elapsed_ms = 0.0;
};

struct Report {
    std::string tool;
    std::string version;
    std::string scenario;
    std::string input_digest;  // FNV-1a 64 of the canonical scenario text
    std::uint64_t seed = 0;
    int samples = 0;
    bool overall_pass = true;  // fail iff any requested check fails or errors
    std::vector<CheckRecord> checks;
};

// Executes the scenario's requested checks in dependency order
// (compatibility, condition_i, markov_property, kernels, chapman_kolmogorov,
// distribution_transfer, stationarity, reversibility, generator).  A failing
// upstream process check marks dependents "skipped"; a failing independent
// check does not abort the rest.  Reversibility is a determination (the
// verdict reports whether kernels are reversible without failing the check);
// it only fails on an internal inconsistency.  Resolution errors propagate
// to the caller (input error).
Report run_checks(const Scenario& s);

nlohmann::json report_to_json(const Report& r);

// format is "text" or "json"; anything else raises ValidationError.
std::string emit_report(const Report& r, const std::string& format);

} // namespace jqp
