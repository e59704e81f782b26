#pragma once

#include <optional>
#include <string>

#include "jqp/algebra.hpp"
#include "jqp/element.hpp"
#include "jqp/maps.hpp"
#include "jqp/state.hpp"
#include "jqp/tolerances.hpp"

namespace jqp {

enum class CompatVerdict { holds, fails, holds_sampled };
enum class CompatMethod { event_pair, associative_exact, sampled, construct_and_verify };

std::string to_string(CompatVerdict v);
std::string to_string(CompatMethod m);

// A concrete counterexample event with the two sides of the defining
// equation: lhs = mu({E,X,E}), rhs = mu(E o X).
struct CompatWitness {
    Element event;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct CompatibilityReport {
    CompatVerdict verdict = CompatVerdict::fails;
    CompatMethod method = CompatMethod::event_pair;
    std::optional<CompatWitness> witness;  // present whenever verdict is fails
    double max_deviation = 0.0;            // largest |lhs - rhs| over tested events
    int events_checked = 0;
    int samples = 0;                       // sampling budget (sampled methods only)
    std::uint64_t seed = 0;

    bool failed() const { return verdict == CompatVerdict::fails; }
};

struct CondExpResult {
    Element value;          // Y in A0
    double residual = 0.0;  // max defining-equation violation over test events
    bool unique = false;    // mu faithful on A0
    bool sanitized = false; // spectral truncation onto [0,1] was applied
};

// E ->mu X for a single event E: |mu({E,X,E}) - mu(E o X)| <= tol.eq.
// E must be idempotent.
CompatibilityReport is_compatible_event(const State& mu, const Element& e, const Element& x,
                                        const Tolerances& tol = Tolerances::defaults());

// A0 ->mu X over all events of A0.  Associative A0: exact decision through
// the minimal idempotents P_1..P_k — the defining equation is evaluated on
// every singleton P_i and every pair sum P_i + P_j, which decides all 2^k
// events: with t_ij = trace(rho P_i X P_j), the deviation of the event
// E = sum_{i in S} P_i equals -sum_{i in S, j not in S} Re t_ij, so the
// singleton deviations recover the row sums of Re t and the pair deviations
// recover the individual off-diagonal Re t_ij.  Non-associative A0: the
// equation is sampled on spectral projections (and their pair sums) of the
// basis elements and of `samples` seeded random elements; a passing verdict
// is holds_sampled, upgraded to method construct_and_verify when mu is
// faithful on A0 and the representing element was constructed and re-verified
// on the same events.
CompatibilityReport is_compatible_subalgebra(const State& mu, const JordanAlgebra& a0,
                                             const Element& x, int samples = 25,
                                             std::uint64_t seed = 42,
                                             const Tolerances& tol = Tolerances::defaults());

// A1 ->mu A2: conjunction of is_compatible_subalgebra(mu, A1, B) over a basis
// B of A2 (the relation is linear in the middle argument).
CompatibilityReport is_compatible_pair(const State& mu, const JordanAlgebra& a1,
                                       const JordanAlgebra& a2, int samples = 25,
                                       std::uint64_t seed = 42,
                                       const Tolerances& tol = Tolerances::defaults());

// The representing element: Y in A with nu(Z) = mu(Y o Z) for all Z in A and
// 0 <= Y <= 1.  Solves the Gram system G c = v by eigendecomposition-based
// pseudoinverse (cutoff tol.rank), then truncates the spectrum onto [0,1]
// after asserting the truncated mass is mu-null.  Preconditions 0 <= nu <= mu
// are spot-checked on spectral projections of A's basis elements; a residual
// above tol.solve raises SolveError (no representing element).
Element radon_nikodym(const Functional& nu, const State& mu, const JordanAlgebra& a,
                      const Tolerances& tol = Tolerances::defaults());

// Two-sided spectral truncation of a candidate conditional expectation onto
// [0,1]: the negative part of Z is dropped (asserting mu(Z_-) <= tol.solve),
// then the same is applied to 1-Y for 1-X; afterwards the defining equations
// against X are re-checked on test events of A0 within tol.solve.
Element sanitize_interval(const Element& z, const State& mu, const JordanAlgebra& a0,
                          const Element& x, int samples = 25, std::uint64_t seed = 42,
                          const Tolerances& tol = Tolerances::defaults());

// The conditional expectation mu(X|A0): the unique-when-mu-is-faithful
// Y in A0 with mu({E,X,E}) = mu(Y o E) for all events E of A0.  Raises
// IncompatibleError when A0 ->mu X fails (existence is equivalent to
// compatibility) and SolveError when the constructed element leaves a
// defining-equation residual above tol.solve.  Hermitian X outside [0,1] is
// handled by the affine rescaling X -> (X - a)/b, which the conditional
// expectation respects (it is linear and unital).
CondExpResult conditional_expectation(const State& mu, const Element& x,
                                      const JordanAlgebra& a0, int samples = 25,
                                      std::uint64_t seed = 42,
                                      const Tolerances& tol = Tolerances::defaults());

// The state-independent conditional expectation IE(X|A0) when it can be
// certified: exact for associative A0 whose minimal idempotents are atoms
// (IE(X|A0) = sum_n trace(E_n X) E_n); otherwise sampled across n_states
// seeded faithful states, returning the common value when at least two
// compatible states agree within tol.eq, and nullopt otherwise (absence is a
// valid result: the conditional expectation is state-dependent or undecided).
std::optional<CondExpResult> ie_conditional_expectation(
    const Element& x, const JordanAlgebra& a0, int n_states = 8, std::uint64_t seed = 42,
    const Tolerances& tol = Tolerances::defaults());

// The trace-state conditional expectation onto A0, extended linearly to a map
// on A's basis coordinates: pi = pi^2, pi(1) = 1, range = A0, and
// pi(X o Y) = pi(X) o Y for Y in A0 (the module property).
LinearMap trace_projection(const JordanAlgebra& a, const JordanAlgebra& a0,
                           const Tolerances& tol = Tolerances::defaults());

} // namespace jqp
