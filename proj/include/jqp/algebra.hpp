#pragma once

#include <vector>

#include "jqp/element.hpp"
#include "jqp/tolerances.hpp"

namespace jqp {

// A Jordan-closed, unital real subspace of Hermitian n-by-n matrices, held by
// an orthonormal basis under the trace inner product.  Construction always
// verifies the invariants (orthonormality, Jordan closure, unitality); use
// make_algebra / generate_subalgebra to build one from raw spanning sets.
class JordanAlgebra {
  public:
    // Validates all invariants; the basis must already be orthonormal.
    JordanAlgebra(int ambient_dim, std::vector<Element> orthonormal_basis,
                  const Tolerances& tol = Tolerances::defaults());

    int ambient_dim() const { return n_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<Element>& basis() const { return basis_; }
    const Element& basis(int i) const { return basis_.at(static_cast<std::size_t>(i)); }

    // Coordinates of x's orthogonal projection onto the span.
    RealVector coords(const Element& x) const;
    Element from_coords(const RealVector& c) const;
    Element project(const Element& x) const;

    // Frobenius distance from x to the span.
    double span_residual(const Element& x) const;
    bool contains(const Element& x, const Tolerances& tol = Tolerances::defaults()) const;

    // All basis elements commute as matrices; for special Jordan algebras this
    // is equivalent to associativity of the Jordan product on the subspace.
    bool is_associative(const Tolerances& tol = Tolerances::defaults()) const;

    // The n^2-by-d matrix whose columns are herm_coords of the basis.
    const RealMatrix& coordinate_frame() const { return frame_; }

  private:
    int n_;
    std::vector<Element> basis_;
    RealMatrix frame_;  // herm_dim(n) x d, orthonormal columns
};

// Orthonormalize a spanning set under the trace inner product (modified
// Gram-Schmidt with re-orthogonalization; vectors whose residual falls below
// tol.rank are dropped).  Already-orthonormal inputs are preserved as given,
// in order.
std::vector<Element> orthonormalize(const std::vector<Element>& spanning,
                                    int ambient_dim,
                                    const Tolerances& tol = Tolerances::defaults());

// Build an algebra from a spanning set.  Throws ValidationError if the span
// is not Jordan-closed or does not contain the ambient identity.
JordanAlgebra make_algebra(int ambient_dim, const std::vector<Element>& spanning_set,
                           const Tolerances& tol = Tolerances::defaults());

// Smallest Jordan-closed unital subspace containing the generators: the
// ambient identity is adjoined, then the span is closed under the Jordan
// product until the dimension stabilizes.
JordanAlgebra generate_subalgebra(int ambient_dim, const std::vector<Element>& generators,
                                  const Tolerances& tol = Tolerances::defaults());

// Convenience builders.
JordanAlgebra full_algebra(int n, const Tolerances& tol = Tolerances::defaults());
JordanAlgebra diagonal_algebra(int n, const Tolerances& tol = Tolerances::defaults());
JordanAlgebra scalar_algebra(int n, const Tolerances& tol = Tolerances::defaults());

// X o X = X within tol.eq and X in span(A) within tol.rank.
bool is_event(const Element& x, const JordanAlgebra& a,
              const Tolerances& tol = Tolerances::defaults());

// Matrix commutator [E,F] = 0 within tol.eq.
bool operator_commute(const Element& e, const Element& f,
                      const Tolerances& tol = Tolerances::defaults());

// Same subspace: mutual containment and equal dimension.
bool same_span(const JordanAlgebra& a, const JordanAlgebra& b,
               const Tolerances& tol = Tolerances::defaults());

// Every element of `inner` lies in the span of `outer`.
bool contains_algebra(const JordanAlgebra& outer, const JordanAlgebra& inner,
                      const Tolerances& tol = Tolerances::defaults());

// For an associative algebra: its minimal idempotents P_1..P_d (joint
// eigenspace projections of the commuting basis family), returned in a
// deterministic order with sum = identity.  Throws ValidationError if the
// algebra is not associative or the decomposition does not span it.
std::vector<Element> minimal_idempotents(const JordanAlgebra& a,
                                         const Tolerances& tol = Tolerances::defaults());

// Random element of the span with standard-Gaussian coordinates.
Element random_element(const JordanAlgebra& a, Rng& rng);

} // namespace jqp
