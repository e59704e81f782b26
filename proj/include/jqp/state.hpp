#pragma once

#include "jqp/algebra.hpp"
#include "jqp/element.hpp"
#include "jqp/tolerances.hpp"

namespace jqp {

// A real linear functional on Hermitian matrices represented by a Hermitian
// density via the trace pairing X -> trace(rho X).  No positivity or
// normalization is demanded; positivity is checked at use sites.
class Functional {
  public:
    explicit Functional(Element density, const Tolerances& tol = Tolerances::defaults());

    int dim() const { return static_cast<int>(rho_.rows()); }
    const Element& density() const { return rho_; }

    // trace(rho X) for Hermitian X; the imaginary part (rounding noise) is
    // discarded.
    double evaluate(const Element& x) const;

    // Full complex trace(rho M) for arbitrary (possibly non-Hermitian) M;
    // used by exact compatibility criteria that form ambient matrix products.
    Complex pairing(const Element& m) const;

  protected:
    Element rho_;
};

// A state: positive density of unit trace (validated at construction).
class State : public Functional {
  public:
    explicit State(Element density, const Tolerances& tol = Tolerances::defaults());
};

// rho = 1/n.
State trace_state(int n);

// rho = GG*/trace(GG*) mixed with delta = 1e-3 of the identity, renormalized;
// faithful on the full algebra by construction and deterministic in (n, seed).
State random_faithful_state(int n, std::uint64_t seed);
State random_faithful_state(int n, Rng& rng);

// Min eigenvalue of the Gram matrix G_ij = mu(B_i o B_j) exceeds tol.psd;
// at finite dimension this is equivalent to faithfulness of mu on A.
bool is_faithful_on(const State& mu, const JordanAlgebra& a,
                    const Tolerances& tol = Tolerances::defaults());

// The Gram matrix itself (symmetric d x d).
RealMatrix gram_matrix(const Functional& mu, const JordanAlgebra& a);

// Smallest event D with mu(D) = 1: the projection onto the range of the
// density (eigenvalues > tol.psd).
Element support(const State& mu, const Tolerances& tol = Tolerances::defaults());

// mu(F|E) = mu({E,F,E}) / mu(E); throws ConditioningOnNull when mu(E) <= tol.eq.
double conditional_probability(const State& mu, const Element& f, const Element& e,
                               const Tolerances& tol = Tolerances::defaults());

// IP(F|E) = trace(EF) for an atom E (rank-1 projection, trace(E) = 1);
// state-independent.  Throws ValidationError when E is not an atom.
double atom_conditional_probability(const Element& f, const Element& e,
                                    const Tolerances& tol = Tolerances::defaults());

} // namespace jqp
