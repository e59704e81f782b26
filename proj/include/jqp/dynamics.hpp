#pragma once

#include <optional>
#include <string>
#include <utility>

#include "jqp/algebra.hpp"
#include "jqp/element.hpp"
#include "jqp/maps.hpp"
#include "jqp/tolerances.hpp"

namespace jqp {

enum class Classification { derivation, dissipation_sampled, neither, unclassified };

std::string to_string(Classification c);

// The generator of a dynamical (semi-)group, stored as its action on the
// basis coordinates of one algebra.  For generators of unital semigroups
// L(1) = 0 within tolerance (the semigroup fixes the identity).
struct GeneratorMap {
    JordanAlgebra algebra;
    RealMatrix matrix;  // dim x dim
    Classification classification = Classification::unclassified;
    bool first_order = false;  // finite-difference fallback was used

    LinearMap as_linear_map() const { return LinearMap(algebra, algebra, matrix); }
    Element apply(const Element& x, const Tolerances& tol = Tolerances::defaults()) const;
};

// L = log(V_delta) / delta via the principal matrix logarithm, expressed on
// the source basis of the kernel (source and target must span the same
// algebra).  An eigenvalue on the closed negative real axis means there is no
// principal logarithm: LogarithmError, unless `allow_first_order` requests
// the finite-difference fallback (V - I)/delta, which is returned with
// first_order = true.  On the logarithm path the round-trip
// ||exp(delta L) - V|| <= tol.solve is asserted, as is L(1) = 0 whenever V is
// unital (SolveError otherwise).
GeneratorMap generator_from_kernel(const LinearMap& v, double delta,
                                   bool allow_first_order = false,
                                   const Tolerances& tol = Tolerances::defaults());

// V_t = exp(t L) as a map on L's algebra.
LinearMap exponentiate(const GeneratorMap& l, double t);

// D(Y,Z) = L(Y o Z) - Y o L(Z) - Z o L(Y); D(Y,Y) = L(Y^2) - 2 Y o L(Y).
// Vanishing identically characterizes derivations; D(Y,Y) >= 0 for all Y
// characterizes dissipations.
Element polarized_defect(const GeneratorMap& l, const Element& y, const Element& z,
                         const Tolerances& tol = Tolerances::defaults());

struct ClassificationResult {
    Classification value = Classification::unclassified;
    // Exact bilinear check: the largest ||D(B_i,B_j)|| over basis pairs and
    // the pair attaining it.  value = derivation iff this is <= tol.eq.
    double max_basis_defect = 0.0;
    std::pair<int, int> worst_basis_pair{-1, -1};
    // Sampled quadratic check (only run when the exact check fails): the
    // smallest eigenvalue of D(Y,Y) over the sampled Y.  value =
    // dissipation_sampled iff this is >= -tol.psd; otherwise neither, with
    // the worst Y as witness.
    double worst_min_eigenvalue = 0.0;
    std::optional<Element> witness;
    int samples = 0;
    std::uint64_t seed = 0;
};

ClassificationResult classify(const GeneratorMap& l, int samples = 25,
                              std::uint64_t seed = 42,
                              const Tolerances& tol = Tolerances::defaults());

// The inner derivation X -> i[H, X] = i(HX - XH) on the given algebra.
// Every basis image must stay in the algebra's span (automatic for the full
// Hermitian algebra); otherwise ValidationError (not commutator-closed).
GeneratorMap commutator_derivation(const JordanAlgebra& m, const Element& h,
                                   const Tolerances& tol = Tolerances::defaults());

// V_t(X) = exp(itH) X exp(-itH) for Hermitian H and X.
Element schrodinger_flow(const Element& h, double t, const Element& x);

} // namespace jqp
