#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "jqp/dynamics.hpp"
#include "jqp/errors.hpp"
#include "jqp/markov.hpp"
#include "jqp/report.hpp"
#include "jqp/scenario.hpp"
#include "jqp/version.hpp"

namespace {

struct CommonOptions {
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::string format = "text";
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_format = true) {
    cmd->add_option("--tol", opts.tol,
                    "override the equality and solve tolerances with one value")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.seed, "seed for all sampled checks (default 42)");
    cmd->add_option("--samples", opts.samples, "sampling budget per sampled check")
        ->check(CLI::PositiveNumber);
    if (with_format) {
        cmd->add_option("--format", opts.format, "report format")
            ->check(CLI::IsMember({"text", "json"}));
    }
}

// Tolerance precedence: --tol > scenario file > JQP_TOLERANCE > defaults.
void apply_overrides(jqp::Scenario& s, const CommonOptions& opts) {
    if (!s.tolerances_specified) {
        if (const char* env = std::getenv("JQP_TOLERANCE")) {
            char* end = nullptr;
            const double v = std::strtod(env, &end);
            if (end == env || *end != '\0' || !(v > 0.0)) {
                throw jqp::ValidationError(
                    "JQP_TOLERANCE must be a positive number, got '" + std::string(env) + "'");
            }
            s.tolerances.eq = v;
            s.tolerances.solve = v;
        }
    }
    if (opts.tol) {
        s.tolerances.eq = *opts.tol;
        s.tolerances.solve = *opts.tol;
    }
    if (opts.seed) s.seed = *opts.seed;
    if (opts.samples) s.samples = *opts.samples;
}

int run_and_report(jqp::Scenario s, const CommonOptions& opts) {
    apply_overrides(s, opts);
    const jqp::Report report = jqp::run_checks(s);
    std::cout << jqp::emit_report(report, opts.format);
    return report.overall_pass ? 0 : 1;
}

int do_kernels(const std::string& file, const std::string& out_path,
               const CommonOptions& opts) {
    jqp::Scenario s = jqp::parse_scenario(file);
    apply_overrides(s, opts);
    const jqp::ResolvedScenario rs = jqp::resolve(s);
    if (!rs.process) {
        throw jqp::ValidationError("scenario has no process: nothing to extract kernels from");
    }
    const jqp::KernelFamily fam =
        jqp::extract_kernels(*rs.process, s.samples, s.seed, s.tolerances);
    nlohmann::json j;
    j["kernel_schema"] = 1;
    j["tool"] = jqp::kToolName;
    j["version"] = jqp::kToolVersion;
    j["scenario"] = s.name;
    j["input_digest"] = jqp::scenario_digest(s);
    j["times"] = fam.times;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& [pair, v] : fam.kernels) {
        nlohmann::json jk;
        jk["i"] = pair.first;
        jk["j"] = pair.second;
        jk["t_i"] = fam.times.at(static_cast<std::size_t>(pair.first));
        jk["t_j"] = fam.times.at(static_cast<std::size_t>(pair.second));
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < v.matrix().rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < v.matrix().cols(); ++c) row.push_back(v.matrix()(r, c));
            rows.push_back(std::move(row));
        }
        jk["matrix"] = std::move(rows);
        list.push_back(std::move(jk));
    }
    j["kernels"] = std::move(list);
    std::ofstream out(out_path);
    if (!out) throw jqp::ValidationError("cannot open output file: " + out_path);
    out << j.dump(2) << "\n";
    std::cout << "wrote " << fam.kernels.size() << " kernels to " << out_path << "\n";
    return 0;
}

int do_generator(const std::string& file, const std::optional<double>& delta,
                 bool allow_first_order, const CommonOptions& opts) {
    jqp::Scenario s = jqp::parse_scenario(file);
    apply_overrides(s, opts);
    const jqp::ResolvedScenario rs = jqp::resolve(s);
    if (!rs.process) {
        throw jqp::ValidationError("scenario has no process: nothing to extract a generator from");
    }
    const jqp::KernelFamily fam =
        jqp::extract_kernels(*rs.process, s.samples, s.seed, s.tolerances);
    const jqp::StationarityReport stat =
        jqp::check_stationarity(*rs.process, fam, s.tolerances);
    if (!stat.pass) {
        std::cerr << "error: the process is not stationary (max kernel deviation "
                  << stat.max_deviation << "); no one-parameter family, no generator\n";
        return 1;
    }
    // family[0] is the identity at gap 0; pick the requested gap or the
    // smallest positive one.
    const jqp::LinearMap* v = nullptr;
    double gap = 0.0;
    if (delta) {
        for (std::size_t i = 1; i < stat.family.size(); ++i) {
            const double g = stat.family[i].first;
            if (std::abs(g - *delta) <= s.tolerances.group * std::max(1.0, std::abs(g))) {
                v = &stat.family[i].second;
                gap = g;
                break;
            }
        }
        if (v == nullptr) {
            std::ostringstream os;
            os << "no kernel at gap " << *delta << "; available gaps:";
            for (std::size_t i = 1; i < stat.family.size(); ++i) {
                os << " " << stat.family[i].first;
            }
            throw jqp::ValidationError(os.str());
        }
    } else {
        v = &stat.family.at(1).second;
        gap = stat.family.at(1).first;
    }

    const jqp::GeneratorMap gen =
        jqp::generator_from_kernel(*v, gap, allow_first_order, s.tolerances);
    const jqp::ClassificationResult cls =
        jqp::classify(gen, s.samples, s.seed, s.tolerances);
    const double round_trip =
        (jqp::exponentiate(gen, gap).matrix() - v->matrix()).norm();

    if (opts.format == "json") {
        nlohmann::json j;
        j["generator_schema"] = 1;
        j["tool"] = jqp::kToolName;
        j["version"] = jqp::kToolVersion;
        j["scenario"] = s.name;
        j["input_digest"] = jqp::scenario_digest(s);
        j["delta"] = gap;
        j["first_order"] = gen.first_order;
        j["round_trip_residual"] = round_trip;
        j["classification"] = jqp::to_string(cls.value);
        j["max_basis_defect"] = cls.max_basis_defect;
        if (cls.value != jqp::Classification::derivation) {
            j["worst_basis_pair"] = {cls.worst_basis_pair.first, cls.worst_basis_pair.second};
            j["worst_min_eigenvalue"] = cls.worst_min_eigenvalue;
            j["samples"] = cls.samples;
            j["seed"] = cls.seed;
        }
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < gen.matrix.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < gen.matrix.cols(); ++c) row.push_back(gen.matrix(r, c));
            rows.push_back(std::move(row));
        }
        j["matrix"] = std::move(rows);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "generator at gap " << gap
                  << (gen.first_order ? " (first-order finite difference)"
                                      : " (principal logarithm)")
                  << "\n";
        std::cout << "exponential round-trip residual " << round_trip << "\n";
        std::cout << "classification: " << jqp::to_string(cls.value) << "\n";
        if (cls.value != jqp::Classification::derivation) {
            std::cout << "max basis-pair defect " << cls.max_basis_defect << " at pair ("
                      << cls.worst_basis_pair.first << ", " << cls.worst_basis_pair.second
                      << ")\n";
            std::cout << "worst sampled min eigenvalue of D(Y,Y): " << cls.worst_min_eigenvalue
                      << " (" << cls.samples << " samples, seed " << cls.seed << ")\n";
        }
        std::cout << "matrix (action on basis coordinates):\n" << gen.matrix << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-dimensional Jordan-algebraic quantum probability toolkit"};
    app.set_version_flag("--version", std::string(jqp::kToolName) + " " + jqp::kToolVersion);
    app.require_subcommand(1);

    std::string check_file;
    CommonOptions check_opts;
    CLI::App* check = app.add_subcommand("check", "run the checks requested by a scenario file");
    check->add_option("file", check_file, "scenario JSON file")->required();
    add_common(check, check_opts);

    CLI::App* demo_cmd = app.add_subcommand("demo", "built-in demo gallery");
    demo_cmd->require_subcommand(1);
    CLI::App* demo_list = demo_cmd->add_subcommand("list", "list the available demos");
    std::string demo_run_name;
    CommonOptions demo_opts;
    CLI::App* demo_run = demo_cmd->add_subcommand("run", "run a demo's checks");
    demo_run->add_option("name", demo_run_name, "demo name")->required();
    add_common(demo_run, demo_opts);
    std::string demo_show_name;
    CLI::App* demo_show =
        demo_cmd->add_subcommand("show", "print a demo's scenario file (canonical JSON)");
    demo_show->add_option("name", demo_show_name, "demo name")->required();

    std::string kernels_file, kernels_out;
    CommonOptions kernels_opts;
    CLI::App* kernels_cmd =
        app.add_subcommand("kernels", "extract the kernel family of a scenario's process");
    kernels_cmd->add_option("file", kernels_file, "scenario JSON file")->required();
    kernels_cmd->add_option("--out", kernels_out, "output JSON file")->required();
    add_common(kernels_cmd, kernels_opts, /*with_format=*/false);

    std::string gen_file;
    std::optional<double> gen_delta;
    bool gen_allow_first_order = false;
    CommonOptions gen_opts;
    CLI::App* gen_cmd = app.add_subcommand(
        "generator", "extract and classify the generator of a stationary process");
    gen_cmd->add_option("file", gen_file, "scenario JSON file")->required();
    gen_cmd->add_option("--delta", gen_delta, "time gap to take the logarithm at")
        ->check(CLI::PositiveNumber);
    gen_cmd->add_flag("--allow-first-order", gen_allow_first_order,
                      "fall back to (V - I)/delta when there is no principal logarithm");
    add_common(gen_cmd, gen_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*check) return run_and_report(jqp::parse_scenario(check_file), check_opts);
        if (*demo_list) {
            for (const std::string& name : jqp::demo_names()) std::cout << name << "\n";
            return 0;
        }
        if (*demo_run) return run_and_report(jqp::demo(demo_run_name), demo_opts);
        if (*demo_show) {
            std::cout << jqp::emit_scenario(jqp::demo(demo_show_name));
            return 0;
        }
        if (*kernels_cmd) return do_kernels(kernels_file, kernels_out, kernels_opts);
        if (*gen_cmd) return do_generator(gen_file, gen_delta, gen_allow_first_order, gen_opts);
    } catch (const jqp::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jqp::DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jqp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
