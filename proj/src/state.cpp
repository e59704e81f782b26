#include "jqp/state.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "jqp/errors.hpp"

namespace jqp {

Functional::Functional(Element density, const Tolerances& tol) : rho_(std::move(density)) {
    validate_hermitian(rho_, tol.eq, "functional density");
}

double Functional::evaluate(const Element& x) const {
    if (x.rows() != rho_.rows() || x.cols() != rho_.cols()) {
        throw DimensionMismatch("evaluate: element dimension does not match the density");
    }
    return (rho_ * x).trace().real();
}

Complex Functional::pairing(const Element& m) const {
    if (m.rows() != rho_.rows() || m.cols() != rho_.cols()) {
        throw DimensionMismatch("pairing: element dimension does not match the density");
    }
    return (rho_ * m).trace();
}

State::State(Element density, const Tolerances& tol) : Functional(std::move(density), tol) {
    const double lo = min_eigenvalue(rho_);
    if (lo < -tol.psd) {
        std::ostringstream os;
        os << "state density is not positive (min eigenvalue " << lo << ")";
        throw ValidationError(os.str());
    }
    const double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) > tol.eq) {
        std::ostringstream os;
        os << "state density does not have unit trace (trace " << tr << ")";
        throw ValidationError(os.str());
    }
}

State trace_state(int n) {
    if (n < 1) throw ValidationError("trace_state: dimension must be positive");
    return State(identity(n) / static_cast<double>(n));
}

State random_faithful_state(int n, Rng& rng) {
    if (n < 1) throw ValidationError("random_faithful_state: dimension must be positive");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Element g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    }
    Element rho = g * g.adjoint();
    rho /= rho.trace().real();
    const double delta = 1e-3;
    rho = (rho + delta * identity(n)) / (1.0 + delta * static_cast<double>(n));
    return State(0.5 * (rho + Element(rho.adjoint())));
}

State random_faithful_state(int n, std::uint64_t seed) {
    Rng rng(seed);
    return random_faithful_state(n, rng);
}

RealMatrix gram_matrix(const Functional& mu, const JordanAlgebra& a) {
    const int d = a.dim();
    RealMatrix g(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            const double v = mu.evaluate(jordan_product(a.basis(i), a.basis(j)));
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

bool is_faithful_on(const State& mu, const JordanAlgebra& a, const Tolerances& tol) {
    if (mu.dim() != a.ambient_dim()) {
        throw DimensionMismatch("is_faithful_on: state and algebra dimensions differ");
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram_matrix(mu, a), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > tol.psd;
}

Element support(const State& mu, const Tolerances& tol) {
    const SpectralDecomposition sd = spectral_decompose(mu.density(), tol.group);
    Element d = zero(mu.dim());
    for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
        if (sd.eigenvalues[i] > tol.psd) d += sd.projections[i];
    }
    return d;
}

double conditional_probability(const State& mu, const Element& f, const Element& e,
                               const Tolerances& tol) {
    const double pe = mu.evaluate(e);
    if (pe <= tol.eq) {
        std::ostringstream os;
        os << "conditional_probability: conditioning event has probability " << pe;
        throw ConditioningOnNull(os.str());
    }
    return mu.evaluate(triple_product(e, f, e)) / pe;
}

double atom_conditional_probability(const Element& f, const Element& e,
                                    const Tolerances& tol) {
    require_same_dim(f, e);
    if (!is_idempotent(e, tol.eq) || std::abs(e.trace().real() - 1.0) > tol.eq) {
        throw ValidationError("atom_conditional_probability: conditioning event is not an "
                              "atom (rank-1 projection)");
    }
    return (e * f).trace().real();
}

} // namespace jqp
