#include "jqp/scenario.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>

#include "jqp/errors.hpp"
#include "jqp/version.hpp"

namespace jqp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& path,
                       const std::string& message) {
    std::ostringstream os;
    os << origin << ": " << (path.empty() ? std::string("(top level)") : path) << ": "
       << message;
    throw ValidationError(os.str());
}

double number_at(const json& j, const std::string& origin, const std::string& path) {
    if (!j.is_number()) fail(origin, path, "expected a number");
    return j.get<double>();
}

Complex entry_from_json(const json& j, const std::string& origin,
                        const std::string& path) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return Complex(j[0].get<double>(), j[1].get<double>());
    }
    fail(origin, path, "expected a real number or an [re, im] pair");
}

// expected_dim > 0 enforces the matrix size; expected_dim <= 0 infers it.
Element matrix_from_json(const json& j, int expected_dim, const std::string& origin,
                         const std::string& path) {
    if (!j.is_array() || j.empty()) fail(origin, path, "expected a non-empty array of rows");
    const int n = static_cast<int>(j.size());
    if (expected_dim > 0 && n != expected_dim) {
        std::ostringstream os;
        os << "expected " << expected_dim << " rows, found " << n;
        fail(origin, path, os.str());
    }
    Element m(n, n);
    for (int r = 0; r < n; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        std::ostringstream rp;
        rp << path << "[" << r << "]";
        if (!row.is_array() || static_cast<int>(row.size()) != n) {
            fail(origin, rp.str(), "expected a row of the same length as the matrix");
        }
        for (int c = 0; c < n; ++c) {
            std::ostringstream ep;
            ep << rp.str() << "[" << c << "]";
            m(r, c) = entry_from_json(row[static_cast<std::size_t>(c)], origin, ep.str());
        }
    }
    const double scale = std::max(1.0, frobenius_norm(m));
    if ((m - m.adjoint()).norm() > 1e-12 * scale) {
        fail(origin, path, "matrix is not Hermitian");
    }
    return m;
}

json json_from_matrix(const Element& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) {
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// All matrices in the list must share one size: expected_dim when positive,
// otherwise the size of the first entry.
std::vector<Element> matrix_list_from_json(const json& j, int expected_dim,
                                           const std::string& origin,
                                           const std::string& path) {
    if (!j.is_array() || j.empty()) {
        fail(origin, path, "expected a non-empty array of matrices");
    }
    std::vector<Element> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::ostringstream ep;
        ep << path << "[" << i << "]";
        out.push_back(matrix_from_json(j[i], expected_dim, origin, ep.str()));
        if (expected_dim <= 0) expected_dim = static_cast<int>(out.front().rows());
    }
    return out;
}

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& origin, const std::string& path) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) fail(origin, path, "unknown field '" + key + "'");
    }
}

} // namespace

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names = {
        "compatibility",   "condition_i",           "markov_property",
        "kernels",         "chapman_kolmogorov",    "distribution_transfer",
        "stationarity",    "reversibility",         "generator",
    };
    return names;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("cannot parse " + path + ": " + e.what());
    }
    return parse_scenario_json(j, path);
}

Scenario parse_scenario_json(const nlohmann::json& j, const std::string& origin) {
    if (!j.is_object()) fail(origin, "", "expected a JSON object");
    require_keys(j,
                 {"schema", "name", "description", "ambient_dim", "algebras", "state",
                  "observables", "process", "compatibility_pairs", "checks",
                  "tolerances", "seed", "samples"},
                 origin, "");

    Scenario s;
    if (!j.contains("schema") || !j["schema"].is_number_integer()) {
        fail(origin, "schema", "required integer field");
    }
    s.schema = j["schema"].get<int>();
    if (s.schema != kScenarioSchema) {
        std::ostringstream os;
        os << "unsupported schema version " << s.schema << " (expected "
           << kScenarioSchema << ")";
        fail(origin, "schema", os.str());
    }
    if (j.contains("name")) {
        if (!j["name"].is_string()) fail(origin, "name", "expected a string");
        s.name = j["name"].get<std::string>();
    }
    if (j.contains("description")) {
        if (!j["description"].is_string()) fail(origin, "description", "expected a string");
        s.description = j["description"].get<std::string>();
    }
    if (!j.contains("ambient_dim") || !j["ambient_dim"].is_number_integer()) {
        fail(origin, "ambient_dim", "required integer field");
    }
    s.ambient_dim = j["ambient_dim"].get<int>();
    if (s.ambient_dim < 1) fail(origin, "ambient_dim", "must be positive");

    if (!j.contains("algebras") || !j["algebras"].is_object() || j["algebras"].empty()) {
        fail(origin, "algebras", "required non-empty object");
    }
    for (const auto& [name, spec] : j["algebras"].items()) {
        const std::string path = "algebras." + name;
        if (!spec.is_object()) fail(origin, path, "expected an object");
        require_keys(spec, {"basis", "generators"}, origin, path);
        AlgebraSpec as;
        if (spec.contains("basis") == spec.contains("generators")) {
            fail(origin, path, "expected exactly one of 'basis' or 'generators'");
        }
        if (spec.contains("basis")) {
            as.kind = AlgebraSpec::Kind::basis;
            as.elements = matrix_list_from_json(spec["basis"], 0, origin, path + ".basis");
        } else {
            as.kind = AlgebraSpec::Kind::generators;
            as.elements =
                matrix_list_from_json(spec["generators"], 0, origin, path + ".generators");
        }
        s.algebras.emplace(name, std::move(as));
    }

    if (!j.contains("state") || !j["state"].is_object()) {
        fail(origin, "state", "required object field");
    }
    require_keys(j["state"], {"density"}, origin, "state");
    if (!j["state"].contains("density")) fail(origin, "state.density", "required field");
    s.state_density =
        matrix_from_json(j["state"]["density"], s.ambient_dim, origin, "state.density");

    if (j.contains("observables")) {
        if (!j["observables"].is_object()) fail(origin, "observables", "expected an object");
        for (const auto& [name, spec] : j["observables"].items()) {
            const std::string path = "observables." + name;
            if (!spec.is_object()) fail(origin, path, "expected an object");
            require_keys(spec, {"source", "target", "images"}, origin, path);
            ObservableSpec os;
            for (const char* field : {"source", "target"}) {
                if (!spec.contains(field) || !spec[field].is_string()) {
                    fail(origin, path + "." + field, "required string field");
                }
            }
            os.source = spec["source"].get<std::string>();
            os.target = spec["target"].get<std::string>();
            for (const char* field : {"source", "target"}) {
                const std::string ref = spec[field].get<std::string>();
                if (s.algebras.find(ref) == s.algebras.end()) {
                    fail(origin, path + "." + field, "unresolved algebra reference '" + ref + "'");
                }
            }
            if (!spec.contains("images")) fail(origin, path + ".images", "required field");
            // Images live in the target algebra's ambient space.
            const int target_dim =
                static_cast<int>(s.algebras.at(os.target).elements.front().rows());
            os.images =
                matrix_list_from_json(spec["images"], target_dim, origin, path + ".images");
            s.observables.emplace(name, std::move(os));
        }
    }

    if (j.contains("process")) {
        const json& p = j["process"];
        if (!p.is_object()) fail(origin, "process", "expected an object");
        require_keys(p, {"times", "observables"}, origin, "process");
        ProcessSpec ps;
        if (!p.contains("times") || !p["times"].is_array() || p["times"].size() < 2) {
            fail(origin, "process.times", "required array of at least two time points");
        }
        for (std::size_t i = 0; i < p["times"].size(); ++i) {
            std::ostringstream ep;
            ep << "process.times[" << i << "]";
            ps.times.push_back(number_at(p["times"][i], origin, ep.str()));
            if (i > 0 && !(ps.times[i] > ps.times[i - 1])) {
                fail(origin, ep.str(), "time points must be strictly increasing");
            }
        }
        if (!p.contains("observables") || !p["observables"].is_array()) {
            fail(origin, "process.observables", "required array of observable names");
        }
        if (p["observables"].size() != p["times"].size()) {
            fail(origin, "process.observables",
                 "need exactly one observable name per time point");
        }
        for (std::size_t i = 0; i < p["observables"].size(); ++i) {
            std::ostringstream ep;
            ep << "process.observables[" << i << "]";
            const json& entry = p["observables"][i];
            if (!entry.is_string()) fail(origin, ep.str(), "expected a string");
            const std::string ref = entry.get<std::string>();
            if (s.observables.find(ref) == s.observables.end()) {
                fail(origin, ep.str(), "unresolved observable reference '" + ref + "'");
            }
            ps.observables.push_back(ref);
        }
        s.process = std::move(ps);
    }

    if (j.contains("compatibility_pairs")) {
        const json& cp = j["compatibility_pairs"];
        if (!cp.is_array()) fail(origin, "compatibility_pairs", "expected an array");
        for (std::size_t i = 0; i < cp.size(); ++i) {
            std::ostringstream ep;
            ep << "compatibility_pairs[" << i << "]";
            const json& entry = cp[i];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
                !entry[1].is_string()) {
                fail(origin, ep.str(), "expected a pair of algebra names");
            }
            for (int side = 0; side < 2; ++side) {
                const std::string ref = entry[static_cast<std::size_t>(side)].get<std::string>();
                if (s.algebras.find(ref) == s.algebras.end()) {
                    fail(origin, ep.str(), "unresolved algebra reference '" + ref + "'");
                }
            }
            s.compatibility_pairs.emplace_back(entry[0].get<std::string>(),
                                               entry[1].get<std::string>());
        }
    }

    if (!j.contains("checks") || !j["checks"].is_array()) {
        fail(origin, "checks", "required array of check names");
    }
    for (std::size_t i = 0; i < j["checks"].size(); ++i) {
        std::ostringstream ep;
        ep << "checks[" << i << "]";
        const json& entry = j["checks"][i];
        if (!entry.is_string()) fail(origin, ep.str(), "expected a string");
        const std::string name = entry.get<std::string>();
        bool known = false;
        for (const std::string& k : known_checks()) {
            if (k == name) {
                known = true;
                break;
            }
        }
        if (!known) {
            std::ostringstream os;
            os << "unknown check '" << name << "'; known checks:";
            for (const std::string& k : known_checks()) os << " " << k;
            fail(origin, ep.str(), os.str());
        }
        for (const std::string& seen : s.checks) {
            if (seen == name) fail(origin, ep.str(), "duplicate check '" + name + "'");
        }
        s.checks.push_back(name);
    }

    if (j.contains("tolerances")) {
        s.tolerances_specified = true;
        const json& t = j["tolerances"];
        if (!t.is_object()) fail(origin, "tolerances", "expected an object");
        require_keys(t, {"eq", "psd", "rank", "group", "solve"}, origin, "tolerances");
        auto read = [&](const char* key, double& slot) {
            if (!t.contains(key)) return;
            const double v = number_at(t[key], origin, std::string("tolerances.") + key);
            if (!(v > 0.0)) {
                fail(origin, std::string("tolerances.") + key, "must be positive");
            }
            slot = v;
        };
        read("eq", s.tolerances.eq);
        read("psd", s.tolerances.psd);
        read("rank", s.tolerances.rank);
        read("group", s.tolerances.group);
        read("solve", s.tolerances.solve);
    }

    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) fail(origin, "seed", "expected an integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("samples")) {
        if (!j["samples"].is_number_integer() || j["samples"].get<int>() < 1) {
            fail(origin, "samples", "expected a positive integer");
        }
        s.samples = j["samples"].get<int>();
    }

    // Cross-field requirements for the requested checks.
    const bool needs_process = [&] {
        for (const std::string& c : s.checks) {
            if (c != "compatibility") return true;
        }
        return false;
    }();
    if (needs_process && !s.process.has_value()) {
        fail(origin, "checks", "the requested checks need a 'process'");
    }
    for (const std::string& c : s.checks) {
        if (c == "compatibility" && s.compatibility_pairs.empty()) {
            fail(origin, "checks",
                 "the 'compatibility' check needs non-empty 'compatibility_pairs'");
        }
    }
    return s;
}

nlohmann::json scenario_to_json(const Scenario& s) {
    json j;
    j["schema"] = s.schema;
    if (!s.name.empty()) j["name"] = s.name;
    if (!s.description.empty()) j["description"] = s.description;
    j["ambient_dim"] = s.ambient_dim;
    j["algebras"] = json::object();
    for (const auto& [name, spec] : s.algebras) {
        json list = json::array();
        for (const Element& e : spec.elements) list.push_back(json_from_matrix(e));
        j["algebras"][name] = json::object();
        j["algebras"][name][spec.kind == AlgebraSpec::Kind::basis ? "basis" : "generators"] =
            std::move(list);
    }
    j["state"] = json::object();
    j["state"]["density"] = json_from_matrix(s.state_density);
    if (!s.observables.empty()) {
        j["observables"] = json::object();
        for (const auto& [name, spec] : s.observables) {
            json o;
            o["source"] = spec.source;
            o["target"] = spec.target;
            json list = json::array();
            for (const Element& e : spec.images) list.push_back(json_from_matrix(e));
            o["images"] = std::move(list);
            j["observables"][name] = std::move(o);
        }
    }
    if (s.process) {
        json p;
        p["times"] = s.process->times;
        p["observables"] = s.process->observables;
        j["process"] = std::move(p);
    }
    if (!s.compatibility_pairs.empty()) {
        json cp = json::array();
        for (const auto& [a, b] : s.compatibility_pairs) {
            cp.push_back(json::array({a, b}));
        }
        j["compatibility_pairs"] = std::move(cp);
    }
    j["checks"] = s.checks;
    j["tolerances"] = {{"eq", s.tolerances.eq},
                       {"psd", s.tolerances.psd},
                       {"rank", s.tolerances.rank},
                       {"group", s.tolerances.group},
                       {"solve", s.tolerances.solve}};
    j["seed"] = s.seed;
    j["samples"] = s.samples;
    return j;
}

std::string emit_scenario(const Scenario& s) {
    return scenario_to_json(s).dump(2) + "\n";
}

std::string scenario_digest(const Scenario& s) {
    const std::string text = emit_scenario(s);
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : text) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

ResolvedScenario resolve(const Scenario& s) {
    ResolvedScenario out;
    const Tolerances& tol = s.tolerances;
    for (const auto& [name, spec] : s.algebras) {
        // Each algebra lives in the ambient space its matrices are written in
        // (observables may map between spaces of different dimension).
        const int ambient = static_cast<int>(spec.elements.front().rows());
        try {
            if (spec.kind == AlgebraSpec::Kind::basis) {
                out.algebras.emplace(name, make_algebra(ambient, spec.elements, tol));
            } else {
                out.algebras.emplace(name, generate_subalgebra(ambient, spec.elements, tol));
            }
        } catch (const Error& e) {
            throw ValidationError("algebra '" + name + "': " + e.what());
        }
    }
    try {
        out.state.emplace(s.state_density, tol);
    } catch (const Error& e) {
        throw ValidationError(std::string("state: ") + e.what());
    }
    for (const auto& [name, spec] : s.observables) {
        const JordanAlgebra& source = out.algebras.at(spec.source);
        const JordanAlgebra& target = out.algebras.at(spec.target);
        if (static_cast<int>(spec.images.size()) != source.dim()) {
            std::ostringstream os;
            os << "observable '" << name << "': expected " << source.dim()
               << " images (one per source basis element), found " << spec.images.size();
            throw ValidationError(os.str());
        }
        try {
            out.observables.emplace(name, make_observable(source, target, spec.images, tol));
        } catch (const Error& e) {
            throw ValidationError("observable '" + name + "': " + e.what());
        }
    }
    if (s.process) {
        try {
            std::vector<Observable> obs;
            obs.reserve(s.process->observables.size());
            for (const std::string& ref : s.process->observables) {
                obs.push_back(out.observables.at(ref));
            }
            out.process.emplace(TimeGrid(s.process->times), std::move(obs), *out.state, tol);
        } catch (const Error& e) {
            throw ValidationError(std::string("process: ") + e.what());
        }
    }
    return out;
}

} // namespace jqp
