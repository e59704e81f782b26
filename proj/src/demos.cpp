#include <array>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "jqp/algebra.hpp"
#include "jqp/dynamics.hpp"
#include "jqp/errors.hpp"
#include "jqp/scenario.hpp"
#include "jqp/state.hpp"

namespace jqp {

namespace {

std::vector<Element> diag_basis(int n) {
    std::vector<Element> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Element e = Element::Zero(n, n);
        e(i, i) = 1.0;
        out.push_back(std::move(e));
    }
    return out;
}

int path_bit(int path, int site) {
    // Three-site paths indexed p = 4*x0 + 2*x1 + x2.
    return (path >> (2 - site)) & 1;
}

// Shared layout of the two classical three-point demos on the 8-dimensional
// diagonal path-space algebra: X_s reads out site s.
void classical_layout(Scenario& s, const std::array<double, 8>& path_probs) {
    s.ambient_dim = 8;
    AlgebraSpec site;
    site.kind = AlgebraSpec::Kind::basis;
    site.elements = diag_basis(2);
    s.algebras.emplace("site", std::move(site));
    AlgebraSpec path;
    path.kind = AlgebraSpec::Kind::basis;
    path.elements = diag_basis(8);
    s.algebras.emplace("path", std::move(path));

    Element rho = Element::Zero(8, 8);
    for (int p = 0; p < 8; ++p) rho(p, p) = path_probs[static_cast<std::size_t>(p)];
    s.state_density = std::move(rho);

    ProcessSpec proc;
    for (int t = 0; t < 3; ++t) {
        ObservableSpec os;
        os.source = "site";
        os.target = "path";
        for (int b = 0; b < 2; ++b) {
            Element image = Element::Zero(8, 8);
            for (int p = 0; p < 8; ++p) {
                if (path_bit(p, t) == b) image(p, p) = 1.0;
            }
            os.images.push_back(std::move(image));
        }
        std::ostringstream name;
        name << "X" << t;
        s.observables.emplace(name.str(), std::move(os));
        proc.times.push_back(static_cast<double>(t));
        proc.observables.push_back(name.str());
    }
    s.process = std::move(proc);
}

const std::vector<std::string> kProcessChecks = {
    "condition_i",       "markov_property", "kernels",      "chapman_kolmogorov",
    "distribution_transfer", "stationarity", "reversibility", "generator"};

Scenario classical_chain_demo() {
    Scenario s;
    s.name = "classical-chain";
    s.description =
        "Two-state classical Markov chain, transition matrix [[0.9,0.1],[0.2,0.8]], "
        "uniform initial distribution, three time points on the diagonal path-space "
        "algebra.";
    const double P[2][2] = {{0.9, 0.1}, {0.2, 0.8}};
    std::array<double, 8> probs{};
    for (int p = 0; p < 8; ++p) {
        const int x0 = path_bit(p, 0), x1 = path_bit(p, 1), x2 = path_bit(p, 2);
        probs[static_cast<std::size_t>(p)] = 0.5 * P[x0][x1] * P[x1][x2];
    }
    classical_layout(s, probs);
    s.checks = kProcessChecks;
    return s;
}

Scenario non_markov_demo() {
    Scenario s;
    s.name = "non-markov";
    s.description =
        "Two-step-memory classical process: the third read-out copies the first with "
        "probability 0.9, so conditioning on the present loses information the history "
        "retains.";
    std::array<double, 8> probs{};
    for (int p = 0; p < 8; ++p) {
        const int x0 = path_bit(p, 0), x2 = path_bit(p, 2);
        probs[static_cast<std::size_t>(p)] = 0.25 * (x2 == x0 ? 0.9 : 0.1);
    }
    classical_layout(s, probs);
    s.checks = {"condition_i", "markov_property"};
    return s;
}

Scenario qubit_unitary_demo() {
    Scenario s;
    s.name = "qubit-unitary";
    s.description =
        "Unitary qubit evolution under H = sigma_z/2 at the trace state, uniform grid of "
        "five points with step 0.1: stationary, reversible kernels, generator i[H,.].";
    s.ambient_dim = 2;
    const JordanAlgebra herm2 = full_algebra(2);
    AlgebraSpec m;
    m.kind = AlgebraSpec::Kind::basis;
    m.elements = herm2.basis();
    s.algebras.emplace("M", std::move(m));
    s.state_density = trace_state(2).density();

    Element h = Element::Zero(2, 2);
    h(0, 0) = 0.5;
    h(1, 1) = -0.5;

    ProcessSpec proc;
    const double delta = 0.1;
    for (int t = 0; t < 5; ++t) {
        ObservableSpec os;
        os.source = "M";
        os.target = "M";
        for (const Element& b : herm2.basis()) {
            os.images.push_back(schrodinger_flow(h, delta * t, b));
        }
        std::ostringstream name;
        name << "R" << t;
        s.observables.emplace(name.str(), std::move(os));
        proc.times.push_back(delta * t);
        proc.observables.push_back(name.str());
    }
    s.process = std::move(proc);
    s.checks = kProcessChecks;
    return s;
}

Scenario trace_compat_demo() {
    Scenario s;
    s.name = "trace-compat";
    s.description =
        "At the trace state on 3x3 Hermitian matrices, the diagonal subalgebra and the "
        "full algebra are compatible in both directions: one direction is decided "
        "exactly, the other by sampled events.";
    s.ambient_dim = 3;
    AlgebraSpec diag;
    diag.kind = AlgebraSpec::Kind::basis;
    diag.elements = diag_basis(3);
    s.algebras.emplace("diag", std::move(diag));
    AlgebraSpec full;
    full.kind = AlgebraSpec::Kind::basis;
    full.elements = full_algebra(3).basis();
    s.algebras.emplace("full", std::move(full));
    s.state_density = trace_state(3).density();
    s.compatibility_pairs = {{"diag", "full"}, {"full", "diag"}};
    s.checks = {"compatibility"};
    return s;
}

Scenario depolarizing_demo() {
    Scenario s;
    s.name = "depolarizing-generator";
    s.description =
        "Qubit depolarizing step of size 0.25 dilated to a partial swap with a "
        "maximally mixed environment: stationary but not reversible; the generator "
        "L(X) = trace(X)/2 - X is a dissipation, not a derivation.";
    s.ambient_dim = 4;
    const double delta = 0.25;
    const JordanAlgebra herm2 = full_algebra(2);

    AlgebraSpec m;
    m.kind = AlgebraSpec::Kind::basis;
    m.elements = herm2.basis();
    s.algebras.emplace("M", std::move(m));
    AlgebraSpec amb;
    amb.kind = AlgebraSpec::Kind::basis;
    amb.elements = full_algebra(4).basis();
    s.algebras.emplace("amb", std::move(amb));
    s.state_density = trace_state(4).density();

    Element swap = Element::Zero(4, 4);
    swap(0, 0) = 1.0;
    swap(1, 2) = 1.0;
    swap(2, 1) = 1.0;
    swap(3, 3) = 1.0;
    const double c = std::exp(-delta / 2.0);  // cos(theta): cos^2 = e^{-delta}
    const double sn = std::sqrt(1.0 - c * c);
    const Element u = c * Element::Identity(4, 4) + Complex(0.0, 1.0) * sn * swap;
    const Element eye2 = Element::Identity(2, 2);

    ObservableSpec r0;
    r0.source = "M";
    r0.target = "amb";
    ObservableSpec r1;
    r1.source = "M";
    r1.target = "amb";
    for (const Element& b : herm2.basis()) {
        const Element embedded = Eigen::kroneckerProduct(b, eye2).eval();
        r0.images.push_back(embedded);
        const Element moved = u * embedded * u.adjoint();
        r1.images.push_back(((moved + moved.adjoint()) / 2.0).eval());
    }
    s.observables.emplace("R0", std::move(r0));
    s.observables.emplace("R1", std::move(r1));
    ProcessSpec proc;
    proc.times = {0.0, delta};
    proc.observables = {"R0", "R1"};
    s.process = std::move(proc);
    s.checks = kProcessChecks;
    return s;
}

} // namespace

std::vector<std::string> demo_names() {
    return {"classical-chain", "qubit-unitary", "trace-compat", "non-markov",
            "depolarizing-generator"};
}

Scenario demo(const std::string& name) {
    if (name == "classical-chain") return classical_chain_demo();
    if (name == "qubit-unitary") return qubit_unitary_demo();
    if (name == "trace-compat") return trace_compat_demo();
    if (name == "non-markov") return non_markov_demo();
    if (name == "depolarizing-generator") return depolarizing_demo();
    std::ostringstream os;
    os << "unknown demo '" << name << "'; available demos:";
    for (const std::string& d : demo_names()) os << " " << d;
    throw ValidationError(os.str());
}

} // namespace jqp
