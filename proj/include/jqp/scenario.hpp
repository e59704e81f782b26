#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "jqp/element.hpp"
#include "jqp/markov.hpp"
#include "jqp/tolerances.hpp"

namespace jqp {

// --- Scenario file model -------------------------------------------------
//
// Schema (version 1), JSON:
//   {
//     "schema": 1,
//     "name": "...",                     // optional
//     "description": "...",              // optional
//     "ambient_dim": n,                  // dimension of the state's space
//     "algebras": { "<name>": {"basis": [matrix...]} |
//                   "<name>": {"generators": [matrix...]} },
//     "state": { "density": matrix },
//     "observables": { "<name>": {"source": "<algebra>",
//                                  "target": "<algebra>",
//                                  "images": [matrix...]} },     // optional
//     "process": { "times": [t0, t1, ...],
//                  "observables": ["<name>", ...] },             // optional
//     "compatibility_pairs": [["<algebra>", "<algebra>"], ...],  // optional
//     "checks": ["condition_i", ...],
//     "tolerances": {"eq":..,"psd":..,"rank":..,"group":..,"solve":..}, // opt.
//     "seed": 42,                        // optional
//     "samples": 25                      // optional
//   }
// A matrix is a row-major nested array; every entry is either a plain number
// (real) or an [re, im] pair.  Canonical emission always writes [re, im]
// pairs and sorts object keys, so emit(parse(emit(s))) is byte-identical.
// The state's density is ambient_dim x ambient_dim; each algebra lives in the
// ambient space its matrices are written in (a source algebra of an
// observable may be smaller), and observable images live in the target
// algebra's space.

struct AlgebraSpec {
    enum class Kind { basis, generators };
    Kind kind = Kind::basis;
    std::vector<Element> elements;
};

struct ObservableSpec {
    std::string source;
    std::string target;
    std::vector<Element> images;  // one per source basis element, in order
};

struct ProcessSpec {
    std::vector<double> times;
    std::vector<std::string> observables;  // one name per time point
};

struct Scenario {
    int schema = 1;
    std::string name;
    std::string description;
    int ambient_dim = 0;
    std::map<std::string, AlgebraSpec> algebras;
    Element state_density;
    std::map<std::string, ObservableSpec> observables;
    std::optional<ProcessSpec> process;
    std::vector<std::pair<std::string, std::string>> compatibility_pairs;
    std::vector<std::string> checks;
    Tolerances tolerances;
    // Whether the file carried an explicit "tolerances" object (the CLI's
    // environment-variable default override applies only when it did not).
    bool tolerances_specified = false;
    std::uint64_t seed = 42;
    int samples = 25;
};

// The recognized check names, in dependency (execution) order.
const std::vector<std::string>& known_checks();

// File / JSON -> Scenario with field-path diagnostics (ValidationError).
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_json(const nlohmann::json& j, const std::string& origin);

// Scenario -> canonical JSON (sorted keys, [re, im] entries) and text.
nlohmann::json scenario_to_json(const Scenario& s);
std::string emit_scenario(const Scenario& s);

// FNV-1a 64-bit digest of the canonical text, as 16 hex digits.
std::string scenario_digest(const Scenario& s);

// --- Resolution: specs -> verified objects --------------------------------

struct ResolvedScenario {
    std::map<std::string, JordanAlgebra> algebras;
    std::optional<State> state;
    std::map<std::string, Observable> observables;
    std::optional<MarkovProcess> process;
};

// Builds validated algebras, the state, observables, and (when present) the
// process.  Throws ValidationError (or the underlying construction error)
// with the offending name on any violation.
ResolvedScenario resolve(const Scenario& s);

// --- Demo gallery ----------------------------------------------------------

std::vector<std::string> demo_names();

// Built-in scenario by name; unknown names raise ValidationError listing the
// available demos.
Scenario demo(const std::string& name);

} // namespace jqp
