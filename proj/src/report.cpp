#include "jqp/report.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <iomanip>
#include <optional>
#include <sstream>

#include "jqp/condexp.hpp"
#include "jqp/dynamics.hpp"
#include "jqp/errors.hpp"
#include "jqp/markov.hpp"
#include "jqp/version.hpp"

namespace jqp {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << v;
    return os.str();
}

std::string pair_str(int i, int j) {
    std::ostringstream os;
    os << "(" << i << ", " << j << ")";
    return os.str();
}

} // namespace

Report run_checks(const Scenario& s) {
    Report r;
    r.tool = kToolName;
    r.version = kToolVersion;
    r.scenario = s.name;
    r.input_digest = scenario_digest(s);
    r.seed = s.seed;
    r.samples = s.samples;

    const ResolvedScenario rs = resolve(s);
    const Tolerances& tol = s.tolerances;

    std::optional<KernelFamily> kernels;
    std::string kernels_error;
    bool process_check_failed = false;  // condition_i or markov_property failed
    std::optional<StationarityReport> stationarity;

    // Obtains the kernel family for a dependent check, or records why not.
    // Returns nullptr after setting the record's verdict on skip/error.
    auto kernel_guard = [&](CheckRecord& rec) -> const KernelFamily* {
        if (process_check_failed) {
            rec.verdict = "skipped";
            rec.notes.push_back("skipped: an upstream process check failed");
            return nullptr;
        }
        if (!kernels && kernels_error.empty()) {
            try {
                kernels = extract_kernels(*rs.process, s.samples, s.seed, tol);
            } catch (const Error& e) {
                kernels_error = e.what();
            }
        }
        if (!kernels) {
            rec.verdict = "error";
            rec.notes.push_back("kernel extraction failed: " + kernels_error);
            return nullptr;
        }
        return &*kernels;
    };

    auto requested = [&](const std::string& name) {
        return std::find(s.checks.begin(), s.checks.end(), name) != s.checks.end();
    };

    for (const std::string& name : known_checks()) {
        if (!requested(name)) continue;
        CheckRecord rec;
        rec.name = name;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            if (name == "compatibility") {
                bool any_fail = false;
                std::string method;
                for (const auto& [an, bn] : s.compatibility_pairs) {
                    const CompatibilityReport rep =
                        is_compatible_pair(*rs.state, rs.algebras.at(an), rs.algebras.at(bn),
                                           s.samples, s.seed, tol);
                    rec.max_deviation = std::max(rec.max_deviation, rep.max_deviation);
                    std::ostringstream os;
                    os << an << " -> " << bn << ": " << to_string(rep.verdict) << " ("
                       << to_string(rep.method) << ", " << rep.events_checked
                       << " events, max deviation " << fmt(rep.max_deviation) << ")";
                    rec.notes.push_back(os.str());
                    if (rep.verdict == CompatVerdict::fails) {
                        any_fail = true;
                        if (rep.witness) {
                            std::ostringstream w;
                            w << "  witness event: mu({E,X,E}) = " << fmt(rep.witness->lhs)
                              << " vs mu(E o X) = " << fmt(rep.witness->rhs);
                            rec.notes.push_back(w.str());
                        }
                    }
                    if (method.empty()) {
                        method = to_string(rep.method);
                    } else if (method != to_string(rep.method)) {
                        method = "mixed";
                    }
                }
                rec.method = method;
                rec.verdict = any_fail ? "fail" : "pass";
            } else if (name == "condition_i") {
                const ConditionIReport rep = check_condition_i(*rs.process, s.samples, s.seed, tol);
                rec.max_deviation = rep.max_deviation;
                rec.method = to_string(rep.method);
                for (const PairCompatibility& pc : rep.pairs) {
                    std::ostringstream os;
                    os << "times " << pair_str(pc.s_index, pc.s_prime_index) << ": "
                       << to_string(pc.report.verdict) << " (" << to_string(pc.report.method)
                       << ", max deviation " << fmt(pc.report.max_deviation) << ")";
                    rec.notes.push_back(os.str());
                }
                if (rep.failed()) {
                    rec.verdict = "fail";
                    process_check_failed = true;
                    std::ostringstream os;
                    os << "witness pair " << pair_str(rep.witness_pair.first, rep.witness_pair.second);
                    if (rep.witness) {
                        os << ": mu({E,X,E}) = " << fmt(rep.witness->lhs) << " vs mu(E o X) = "
                           << fmt(rep.witness->rhs);
                    }
                    rec.notes.push_back(os.str());
                } else {
                    rec.verdict = "pass";
                }
            } else if (name == "markov_property") {
                const MarkovPropertyReport rep =
                    check_markov_property(*rs.process, s.samples, s.seed, tol);
                rec.max_deviation = rep.max_deviation;
                rec.verdict = rep.pass ? "pass" : "fail";
                if (!rep.pass) {
                    process_check_failed = true;
                    std::ostringstream os;
                    os << "witness pair " << pair_str(rep.worst_pair.first, rep.worst_pair.second)
                       << ": conditioning on the history deviates from conditioning on the "
                          "present by "
                       << fmt(rep.max_deviation);
                    rec.notes.push_back(os.str());
                }
            } else if (name == "kernels") {
                const KernelFamily* k = kernel_guard(rec);
                if (k != nullptr) {
                    rec.verdict = "pass";
                    std::ostringstream os;
                    os << "extracted " << k->kernels.size() << " kernels over " << k->times.size()
                       << " time points (unitality exact, positivity sampled)";
                    rec.notes.push_back(os.str());
                }
            } else if (name == "chapman_kolmogorov") {
                const KernelFamily* k = kernel_guard(rec);
                if (k != nullptr) {
                    const ChapmanKolmogorovReport rep = check_chapman_kolmogorov(*k, tol);
                    rec.max_deviation = rep.max_deviation;
                    rec.verdict = rep.pass ? "pass" : "fail";
                    if (k->times.size() < 3) {
                        rec.notes.push_back("fewer than three time points: nothing to compose");
                    } else {
                        std::ostringstream os;
                        os << "worst triple (" << rep.worst_triple[0] << ", " << rep.worst_triple[1]
                           << ", " << rep.worst_triple[2] << "): deviation "
                           << fmt(rep.max_deviation);
                        rec.notes.push_back(os.str());
                    }
                }
            } else if (name == "distribution_transfer") {
                const KernelFamily* k = kernel_guard(rec);
                if (k != nullptr) {
                    const DistributionTransferReport rep =
                        check_distribution_transfer(*rs.process, *k, tol);
                    rec.max_deviation = rep.max_deviation;
                    rec.verdict = rep.pass ? "pass" : "fail";
                    std::ostringstream os;
                    os << "worst pair " << pair_str(rep.worst_pair.first, rep.worst_pair.second)
                       << ": deviation " << fmt(rep.max_deviation);
                    rec.notes.push_back(os.str());
                }
            } else if (name == "stationarity") {
                const KernelFamily* k = kernel_guard(rec);
                if (k != nullptr) {
                    if (!stationarity) stationarity = check_stationarity(*rs.process, *k, tol);
                    rec.max_deviation = stationarity->max_deviation;
                    rec.verdict = stationarity->pass ? "pass" : "fail";
                    for (const GapGroup& g : stationarity->groups) {
                        std::ostringstream os;
                        os << "gap " << g.gap << ": " << g.pairs.size()
                           << " kernel(s), max deviation " << fmt(g.max_deviation);
                        rec.notes.push_back(os.str());
                    }
                }
            } else if (name == "reversibility") {
                const KernelFamily* k = kernel_guard(rec);
                if (k != nullptr) {
                    const ReversibilityReport rep = check_reversibility(*k, s.samples, s.seed, tol);
                    rec.notes.push_back(rep.all_reversible
                                            ? "all kernels reversible"
                                            : "reversibility denied for at least one kernel");
                    for (const KernelReversibility& kr : rep.kernels) {
                        std::ostringstream os;
                        os << "kernel " << pair_str(kr.pair.first, kr.pair.second) << ": ";
                        if (kr.reversible) {
                            os << "reversible, "
                               << (kr.multiplicative ? "multiplicative" : "NOT multiplicative")
                               << " (inverse worst min eigenvalue "
                               << fmt(kr.inverse_worst_min_eigenvalue) << ")";
                        } else {
                            os << "denied: " << kr.reason;
                            if (!kr.reason.empty() && kr.reason.find("positivity") != std::string::npos) {
                                os << " (inverse worst min eigenvalue "
                                   << fmt(kr.inverse_worst_min_eigenvalue) << ")";
                            }
                        }
                        rec.notes.push_back(os.str());
                    }
                    // A determination, not an assertion: the check fails only
                    // on the internal inconsistency reversible-but-not-
                    // multiplicative.
                    rec.verdict = rep.consistent ? "pass" : "fail";
                    if (!rep.consistent) {
                        rec.notes.push_back(
                            "inconsistency: a reversible kernel is not multiplicative");
                    }
                }
            } else if (name == "generator") {
                const KernelFamily* k = kernel_guard(rec);
                if (k != nullptr) {
                    if (!stationarity) stationarity = check_stationarity(*rs.process, *k, tol);
                    if (!stationarity->pass) {
                        rec.verdict = "fail";
                        rec.notes.push_back(
                            "the process is not stationary: no one-parameter kernel family, "
                            "no generator");
                    } else {
                        // family[0] is the identity at gap 0; family[1] is the
                        // smallest positive gap.
                        const double delta = stationarity->family.at(1).first;
                        const LinearMap& v = stationarity->family.at(1).second;
                        const GeneratorMap gen = generator_from_kernel(v, delta, false, tol);
                        rec.method = gen.first_order ? "first_order" : "principal_log";
                        const double round_trip =
                            (exponentiate(gen, delta).matrix() - v.matrix()).norm();
                        rec.max_deviation = round_trip;
                        const ClassificationResult cls = classify(gen, s.samples, s.seed, tol);
                        std::ostringstream os;
                        os << "delta = " << delta << ", exponential round-trip residual "
                           << fmt(round_trip);
                        rec.notes.push_back(os.str());
                        rec.notes.push_back("classification: " + to_string(cls.value));
                        if (cls.value == Classification::derivation) {
                            rec.notes.push_back("max basis-pair defect " +
                                                fmt(cls.max_basis_defect));
                        } else {
                            std::ostringstream d;
                            d << "not a derivation: basis pair "
                              << pair_str(cls.worst_basis_pair.first, cls.worst_basis_pair.second)
                              << " has defect " << fmt(cls.max_basis_defect);
                            rec.notes.push_back(d.str());
                            std::ostringstream w;
                            w << "worst sampled min eigenvalue of D(Y,Y): "
                              << fmt(cls.worst_min_eigenvalue) << " over " << cls.samples
                              << " samples (seed " << cls.seed << ")";
                            rec.notes.push_back(w.str());
                        }
                        rec.verdict = cls.value == Classification::neither ? "fail" : "pass";
                    }
                }
            }
        } catch (const Error& e) {
            rec.verdict = "error";
            rec.notes.push_back(e.what());
        }
        const auto t1 = std::chrono::steady_clock::now();
        rec.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (rec.verdict != "pass" && rec.verdict != "skipped") r.overall_pass = false;
        r.checks.push_back(std::move(rec));
    }
    return r;
}

nlohmann::json report_to_json(const Report& r) {
    nlohmann::json j;
    j["report_schema"] = kReportSchema;
    j["tool"] = r.tool;
    j["version"] = r.version;
    j["scenario"] = r.scenario;
    j["input_digest"] = r.input_digest;
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    j["overall"] = r.overall_pass ? "pass" : "fail";
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckRecord& c : r.checks) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["verdict"] = c.verdict;
        jc["method"] = c.method;
        jc["max_deviation"] = c.max_deviation;
        jc["notes"] = c.notes;
        jc["elapsed_ms"] = c.elapsed_ms;
        checks.push_back(std::move(jc));
    }
    j["checks"] = std::move(checks);
    return j;
}

std::string emit_report(const Report& r, const std::string& format) {
    if (format == "json") return report_to_json(r).dump(2) + "\n";
    if (format != "text") {
        throw ValidationError("unknown report format '" + format + "' (expected text or json)");
    }
    std::ostringstream os;
    os << r.tool << " " << r.version << " — scenario "
       << (r.scenario.empty() ? std::string("(unnamed)") : "'" + r.scenario + "'")
       << " (digest " << r.input_digest << ")\n";
    os << "seed " << r.seed << ", samples " << r.samples << "\n\n";
    for (const CheckRecord& c : r.checks) {
        std::string tag = c.verdict;
        std::transform(tag.begin(), tag.end(), tag.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
        os << "[" << tag << "] " << c.name;
        if (!c.method.empty()) os << " (" << c.method << ")";
        os << " — max deviation " << fmt(c.max_deviation) << " [" << std::fixed
           << std::setprecision(1) << c.elapsed_ms << " ms]\n";
        os.unsetf(std::ios_base::floatfield);
        for (const std::string& n : c.notes) os << "    " << n << "\n";
    }
    os << "\noverall: " << (r.overall_pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace jqp
