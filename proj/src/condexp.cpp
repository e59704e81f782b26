#include "jqp/condexp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "jqp/errors.hpp"

namespace jqp {

namespace {

// Above this many minimal idempotents the exhaustive 2^k event enumeration
// used for residual evaluation is replaced by singletons and pair sums
// (which already decide compatibility; see the cut-sum argument below).
constexpr int kMaxExhaustiveIdempotents = 12;

struct EventDeviation {
    double lhs = 0.0;  // mu({E,X,E})
    double rhs = 0.0;  // mu(E o X)
    double deviation() const { return lhs - rhs; }
};

EventDeviation event_deviation(const State& mu, const Element& e, const Element& x) {
    EventDeviation d;
    d.lhs = mu.evaluate(triple_product(e, x, e));
    d.rhs = mu.evaluate(jordan_product(e, x));
    return d;
}

// Spectral projections of z plus their pair sums; all are events of any
// Jordan-closed unital algebra containing z.  Skips the trivial events 0 and
// the full identity (their deviation vanishes identically).
void append_events_from(const Element& z, double group_tol, std::vector<Element>& out) {
    const SpectralDecomposition sd = spectral_decompose(z, group_tol);
    const int k = static_cast<int>(sd.projections.size());
    if (k <= 1) return;
    for (int i = 0; i < k; ++i) out.push_back(sd.projections[static_cast<std::size_t>(i)]);
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            if (k == 2) continue;  // the pair sum would be the identity
            out.push_back(sd.projections[static_cast<std::size_t>(i)] +
                          sd.projections[static_cast<std::size_t>(j)]);
        }
    }
}

std::vector<Element> sampled_events(const JordanAlgebra& a0, int samples, std::uint64_t seed,
                                    const Tolerances& tol) {
    std::vector<Element> events;
    for (const Element& b : a0.basis()) append_events_from(b, tol.group, events);
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        append_events_from(random_element(a0, rng), tol.group, events);
    }
    return events;
}

std::vector<Element> exhaustive_events(const std::vector<Element>& idem) {
    const int k = static_cast<int>(idem.size());
    const int n = static_cast<int>(idem.front().rows());
    std::vector<Element> events;
    events.reserve((static_cast<std::size_t>(1) << k) - 1);
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        Element e = zero(n);
        for (int i = 0; i < k; ++i) {
            if (mask & (1u << i)) e += idem[static_cast<std::size_t>(i)];
        }
        events.push_back(std::move(e));
    }
    return events;
}

// Singletons and pair sums of an orthogonal partition of the identity.
std::vector<Element> singleton_and_pair_events(const std::vector<Element>& idem) {
    const int k = static_cast<int>(idem.size());
    std::vector<Element> events;
    for (int i = 0; i < k; ++i) events.push_back(idem[static_cast<std::size_t>(i)]);
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            if (k == 2) continue;  // the pair sum would be the identity
            events.push_back(idem[static_cast<std::size_t>(i)] + idem[static_cast<std::size_t>(j)]);
        }
    }
    return events;
}

// Test events for residual evaluation: exhaustive minimal-idempotent sums in
// the associative case (up to 2^kMaxExhaustiveIdempotents), sampled spectral
// projections otherwise.
std::vector<Element> residual_test_events(const JordanAlgebra& a0, int samples,
                                          std::uint64_t seed, const Tolerances& tol) {
    if (a0.is_associative(tol)) {
        const std::vector<Element> idem = minimal_idempotents(a0, tol);
        if (static_cast<int>(idem.size()) <= kMaxExhaustiveIdempotents) {
            return exhaustive_events(idem);
        }
        return singleton_and_pair_events(idem);
    }
    return sampled_events(a0, samples, seed, tol);
}

RealVector pseudo_solve(const RealMatrix& g, const RealVector& v, double cutoff) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(g);
    if (es.info() != Eigen::Success) throw SolveError("Gram eigendecomposition failed");
    const RealVector lambda = es.eigenvalues();
    const RealMatrix u = es.eigenvectors();
    RealVector c = RealVector::Zero(v.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        if (lambda(k) > cutoff) c += (u.col(k).dot(v) / lambda(k)) * u.col(k);
    }
    return c;
}

struct ClampResult {
    Element value;
    bool clamped = false;
};

// Spectral truncation onto [0,1] with the mu-null assertions of the
// truncation lemma: mu(Z_-) and mu((Z-1)_+) must both be negligible.
ClampResult clamp_unit_interval(const Element& z, const State& mu, const Tolerances& tol) {
    const SpectralDecomposition sd = spectral_decompose(z, tol.group);
    double mass_low = 0.0;
    double mass_high = 0.0;
    Element y = zero(static_cast<int>(z.rows()));
    for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
        const double lam = sd.eigenvalues[i];
        if (lam < 0.0) mass_low += -lam * mu.evaluate(sd.projections[i]);
        if (lam > 1.0) mass_high += (lam - 1.0) * mu.evaluate(sd.projections[i]);
        y += std::clamp(lam, 0.0, 1.0) * sd.projections[i];
    }
    if (mass_low > tol.solve) {
        std::ostringstream os;
        os << "interval truncation: negative part is not mu-null (mu(Z_-) = " << mass_low << ")";
        throw SolveError(os.str());
    }
    if (mass_high > tol.solve) {
        std::ostringstream os;
        os << "interval truncation: excess above 1 is not mu-null (mass " << mass_high << ")";
        throw SolveError(os.str());
    }
    ClampResult out;
    out.clamped = (z - y).norm() > tol.rank;
    out.value = std::move(y);
    return out;
}

struct RnSolution {
    Element value;      // clamped onto [0,1]
    bool clamped = false;
};

// Gram-system solve plus interval truncation; shared by radon_nikodym and
// conditional_expectation.
RnSolution rn_solve(const Functional& nu, const State& mu, const JordanAlgebra& a,
                    const Tolerances& tol) {
    const int d = a.dim();
    const RealMatrix g = gram_matrix(mu, a);
    RealVector v(d);
    for (int i = 0; i < d; ++i) v(i) = nu.evaluate(a.basis(i));
    const RealVector c = pseudo_solve(g, v, tol.rank);
    const Element z = a.from_coords(c);

    auto linear_residual = [&](const Element& y) {
        double res = 0.0;
        for (int i = 0; i < d; ++i) {
            res = std::max(res, std::abs(v(i) - mu.evaluate(jordan_product(y, a.basis(i)))));
        }
        return res;
    };
    const double res_raw = linear_residual(z);
    if (res_raw > tol.solve) {
        std::ostringstream os;
        os << "radon_nikodym: no representing element in the algebra (linear residual "
           << res_raw << " > " << tol.solve << ")";
        throw SolveError(os.str());
    }

    ClampResult cl = clamp_unit_interval(z, mu, tol);
    Element y = a.project(cl.value);  // scrub eigensolver noise back onto the span
    const double res_clamped = linear_residual(y);
    if (res_clamped > tol.solve) {
        std::ostringstream os;
        os << "radon_nikodym: representing equations no longer hold after interval "
              "truncation (residual " << res_clamped << ")";
        throw SolveError(os.str());
    }
    return RnSolution{std::move(y), cl.clamped};
}

void spot_check_dominated(const Functional& nu, const State& mu, const JordanAlgebra& a,
                          const Tolerances& tol) {
    for (const Element& b : a.basis()) {
        const SpectralDecomposition sd = spectral_decompose(b, tol.group);
        if (sd.projections.size() <= 1) continue;
        for (const Element& p : sd.projections) {
            const double np = nu.evaluate(p);
            const double mp = mu.evaluate(p);
            if (np < -tol.solve || np > mp + tol.solve) {
                std::ostringstream os;
                os << "radon_nikodym: 0 <= nu <= mu fails on a spectral projection "
                      "(nu(P) = " << np << ", mu(P) = " << mp << ")";
                throw ValidationError(os.str());
            }
        }
    }
}

} // namespace

std::string to_string(CompatVerdict v) {
    switch (v) {
        case CompatVerdict::holds: return "holds";
        case CompatVerdict::fails: return "fails";
        case CompatVerdict::holds_sampled: return "holds_sampled";
    }
    return "unknown";
}

std::string to_string(CompatMethod m) {
    switch (m) {
        case CompatMethod::event_pair: return "event_pair";
        case CompatMethod::associative_exact: return "associative_exact";
        case CompatMethod::sampled: return "sampled";
        case CompatMethod::construct_and_verify: return "construct_and_verify";
    }
    return "unknown";
}

CompatibilityReport is_compatible_event(const State& mu, const Element& e, const Element& x,
                                        const Tolerances& tol) {
    require_same_dim(e, x);
    validate_hermitian(e, tol.eq, "event");
    validate_hermitian(x, tol.eq, "element");
    if (!is_idempotent(e, tol.eq)) {
        throw ValidationError("is_compatible_event: E is not idempotent");
    }
    const EventDeviation d = event_deviation(mu, e, x);
    CompatibilityReport rep;
    rep.method = CompatMethod::event_pair;
    rep.events_checked = 1;
    rep.max_deviation = std::abs(d.deviation());
    if (rep.max_deviation <= tol.eq) {
        rep.verdict = CompatVerdict::holds;
    } else {
        rep.verdict = CompatVerdict::fails;
        rep.witness = CompatWitness{e, d.lhs, d.rhs};
    }
    return rep;
}

CompatibilityReport is_compatible_subalgebra(const State& mu, const JordanAlgebra& a0,
                                             const Element& x, int samples,
                                             std::uint64_t seed, const Tolerances& tol) {
    validate_hermitian(x, tol.eq, "element");
    if (mu.dim() != a0.ambient_dim() || x.rows() != a0.ambient_dim()) {
        throw DimensionMismatch("is_compatible_subalgebra: ambient dimensions differ");
    }

    CompatibilityReport rep;
    const bool associative = a0.is_associative(tol);

    std::vector<Element> events;
    if (associative) {
        // Exact decision: with minimal idempotents P_1..P_k and
        // t_ij = trace(rho P_i X P_j), the deviation of E = sum_{i in S} P_i
        // is -sum_{i in S, j not in S} Re t_ij, so singleton events recover
        // the row sums of Re t and pair sums recover each off-diagonal
        // Re t_ij; their vanishing is equivalent to all 2^k events passing.
        events = singleton_and_pair_events(minimal_idempotents(a0, tol));
        rep.method = CompatMethod::associative_exact;
    } else {
        events = sampled_events(a0, samples, seed, tol);
        rep.method = CompatMethod::sampled;
        rep.samples = samples;
        rep.seed = seed;
    }

    std::optional<CompatWitness> worst;
    for (const Element& e : events) {
        const EventDeviation d = event_deviation(mu, e, x);
        ++rep.events_checked;
        if (std::abs(d.deviation()) > rep.max_deviation) {
            rep.max_deviation = std::abs(d.deviation());
            worst = CompatWitness{e, d.lhs, d.rhs};
        }
    }
    if (rep.max_deviation > tol.eq) {
        rep.verdict = CompatVerdict::fails;
        rep.witness = std::move(worst);
        return rep;
    }
    if (associative) {
        rep.verdict = CompatVerdict::holds;
        return rep;
    }

    rep.verdict = CompatVerdict::holds_sampled;
    if (is_faithful_on(mu, a0, tol)) {
        // Stronger certificate: construct the representing element of
        // Z -> mu(X o Z) on A0 and re-verify the defining equations on the
        // same sampled events.
        const Element sigma = 0.5 * (mu.density() * x + x * mu.density());
        const RealMatrix g = gram_matrix(mu, a0);
        RealVector v(a0.dim());
        for (int i = 0; i < a0.dim(); ++i) {
            v(i) = Functional(sigma).evaluate(a0.basis(i));
        }
        const Element z = a0.from_coords(pseudo_solve(g, v, tol.rank));
        double res = 0.0;
        for (const Element& e : events) {
            const double lhs = mu.evaluate(triple_product(e, x, e));
            const double rhs = mu.evaluate(jordan_product(z, e));
            res = std::max(res, std::abs(lhs - rhs));
        }
        if (res > tol.solve) {
            std::ostringstream os;
            os << "is_compatible_subalgebra: sampled events satisfy the direct criterion "
                  "but the constructed candidate violates the defining equations "
                  "(residual " << res << "); compatibility fails outside the sample";
            throw SolveError(os.str());
        }
        rep.method = CompatMethod::construct_and_verify;
    }
    return rep;
}

CompatibilityReport is_compatible_pair(const State& mu, const JordanAlgebra& a1,
                                       const JordanAlgebra& a2, int samples,
                                       std::uint64_t seed, const Tolerances& tol) {
    if (a1.ambient_dim() != a2.ambient_dim()) {
        throw DimensionMismatch("is_compatible_pair: ambient dimensions differ");
    }
    CompatibilityReport agg;
    agg.verdict = CompatVerdict::holds;
    agg.method = CompatMethod::associative_exact;
    bool any_sampled = false;
    bool all_upgraded = true;
    for (const Element& b : a2.basis()) {
        CompatibilityReport rep = is_compatible_subalgebra(mu, a1, b, samples, seed, tol);
        agg.events_checked += rep.events_checked;
        agg.samples = std::max(agg.samples, rep.samples);
        agg.seed = rep.seed != 0 ? rep.seed : agg.seed;
        if (rep.max_deviation > agg.max_deviation) agg.max_deviation = rep.max_deviation;
        if (rep.verdict == CompatVerdict::fails) {
            agg.verdict = CompatVerdict::fails;
            agg.method = rep.method;
            if (!agg.witness) agg.witness = rep.witness;
        } else if (rep.verdict == CompatVerdict::holds_sampled) {
            any_sampled = true;
            if (rep.method != CompatMethod::construct_and_verify) all_upgraded = false;
        }
    }
    if (agg.verdict == CompatVerdict::fails) return agg;
    if (any_sampled) {
        agg.verdict = CompatVerdict::holds_sampled;
        agg.method = all_upgraded ? CompatMethod::construct_and_verify : CompatMethod::sampled;
    }
    return agg;
}

Element radon_nikodym(const Functional& nu, const State& mu, const JordanAlgebra& a,
                      const Tolerances& tol) {
    if (nu.dim() != mu.dim() || mu.dim() != a.ambient_dim()) {
        throw DimensionMismatch("radon_nikodym: dimensions differ");
    }
    spot_check_dominated(nu, mu, a, tol);
    return rn_solve(nu, mu, a, tol).value;
}

Element sanitize_interval(const Element& z, const State& mu, const JordanAlgebra& a0,
                          const Element& x, int samples, std::uint64_t seed,
                          const Tolerances& tol) {
    validate_hermitian(z, tol.eq, "candidate");
    validate_hermitian(x, tol.eq, "element");
    if (!a0.contains(z, tol)) {
        throw ValidationError("sanitize_interval: candidate does not lie in the algebra");
    }
    const ClampResult cl = clamp_unit_interval(z, mu, tol);
    const Element y = a0.project(cl.value);

    double res = 0.0;
    for (const Element& e : residual_test_events(a0, samples, seed, tol)) {
        const double lhs = mu.evaluate(triple_product(e, x, e));
        const double rhs = mu.evaluate(jordan_product(y, e));
        res = std::max(res, std::abs(lhs - rhs));
    }
    if (res > tol.solve) {
        std::ostringstream os;
        os << "sanitize_interval: defining equations violated after truncation (residual "
           << res << " > " << tol.solve << ")";
        throw SolveError(os.str());
    }
    return y;
}

CondExpResult conditional_expectation(const State& mu, const Element& x,
                                      const JordanAlgebra& a0, int samples,
                                      std::uint64_t seed, const Tolerances& tol) {
    validate_hermitian(x, tol.eq, "element");
    const CompatibilityReport compat = is_compatible_subalgebra(mu, a0, x, samples, seed, tol);
    if (compat.failed()) {
        std::ostringstream os;
        os << "conditional_expectation: A0 ->mu X fails";
        if (compat.witness) {
            os << " (witness event with mu({E,X,E}) = " << compat.witness->lhs
               << ", mu(E o X) = " << compat.witness->rhs << ")";
        }
        throw IncompatibleError(os.str());
    }

    const int n = a0.ambient_dim();
    const double lo = min_eigenvalue(x);
    const double hi = max_eigenvalue(x);

    Element y;
    bool clamped = false;
    if (hi - lo < tol.rank) {
        // X is (numerically) a multiple of the identity: its own expectation.
        y = 0.5 * (hi + lo) * identity(n);
    } else {
        double shift = 0.0;
        double scale = 1.0;
        Element x01 = x;
        if (lo < -tol.psd || hi > 1.0 + tol.psd) {
            // Affine reduction to the unit interval; the conditional
            // expectation is linear and unital, so it commutes with this.
            shift = lo;
            scale = hi - lo;
            x01 = (x - shift * identity(n)) / scale;
        }
        const Element sigma = 0.5 * (mu.density() * x01 + x01 * mu.density());
        const RnSolution sol = rn_solve(Functional(sigma), mu, a0, tol);
        y = scale * sol.value + shift * identity(n);
        clamped = sol.clamped;
    }

    double res = 0.0;
    for (const Element& e : residual_test_events(a0, samples, seed, tol)) {
        const double lhs = mu.evaluate(triple_product(e, x, e));
        const double rhs = mu.evaluate(jordan_product(y, e));
        res = std::max(res, std::abs(lhs - rhs));
    }
    if (res > tol.solve) {
        std::ostringstream os;
        os << "conditional_expectation: defining-equation residual " << res << " exceeds "
           << tol.solve << " (compatibility verdict was "
           << to_string(compat.verdict) << ")";
        throw SolveError(os.str());
    }

    CondExpResult out;
    out.value = std::move(y);
    out.residual = res;
    out.unique = is_faithful_on(mu, a0, tol);
    out.sanitized = clamped;
    return out;
}

std::optional<CondExpResult> ie_conditional_expectation(const Element& x,
                                                        const JordanAlgebra& a0,
                                                        int n_states, std::uint64_t seed,
                                                        const Tolerances& tol) {
    validate_hermitian(x, tol.eq, "element");
    const int n = a0.ambient_dim();
    if (a0.is_associative(tol)) {
        const std::vector<Element> idem = minimal_idempotents(a0, tol);
        const bool all_atoms = std::all_of(idem.begin(), idem.end(), [&](const Element& p) {
            return std::abs(p.trace().real() - 1.0) <= tol.eq;
        });
        if (all_atoms) {
            // IE(X|A0) = sum_n IP(X|E_n) E_n, exact for atomic partitions.
            Element y = zero(n);
            for (const Element& p : idem) y += atom_conditional_probability(x, p, tol) * p;
            return CondExpResult{a0.project(y), 0.0, true, false};
        }
    }

    Rng rng(seed);
    std::vector<CondExpResult> agreed;
    for (int s = 0; s < n_states; ++s) {
        const State mu = random_faithful_state(n, rng);
        const std::uint64_t sub_seed = seed + static_cast<std::uint64_t>(s) + 1;
        const CompatibilityReport rep = is_compatible_subalgebra(mu, a0, x, 25, sub_seed, tol);
        if (rep.failed()) continue;
        agreed.push_back(conditional_expectation(mu, x, a0, 25, sub_seed, tol));
    }
    if (agreed.size() < 2) return std::nullopt;
    for (const CondExpResult& r : agreed) {
        if ((r.value - agreed.front().value).norm() > tol.eq) return std::nullopt;
    }
    CondExpResult out = agreed.front();
    for (const CondExpResult& r : agreed) {
        out.residual = std::max(out.residual, r.residual);
        out.sanitized = out.sanitized || r.sanitized;
    }
    out.unique = true;  // agreement across sampled faithful states
    return out;
}

LinearMap trace_projection(const JordanAlgebra& a, const JordanAlgebra& a0,
                           const Tolerances& tol) {
    if (!contains_algebra(a, a0, tol)) {
        throw ValidationError("trace_projection: A0 is not contained in A");
    }
    const State mu = trace_state(a.ambient_dim());
    RealMatrix m(a.dim(), a.dim());
    for (int j = 0; j < a.dim(); ++j) {
        const CondExpResult r = conditional_expectation(mu, a.basis(j), a0, 10, 42, tol);
        m.col(j) = a.coords(r.value);
    }
    return LinearMap(a, a, std::move(m));
}

} // namespace jqp
