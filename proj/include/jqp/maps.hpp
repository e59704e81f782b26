#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "jqp/algebra.hpp"
#include "jqp/element.hpp"
#include "jqp/state.hpp"
#include "jqp/tolerances.hpp"

namespace jqp {

// A real-linear map between two algebras, stored as its action on
// orthonormal-basis coordinates (target_dim x source_dim).
class LinearMap {
  public:
    LinearMap(JordanAlgebra source, JordanAlgebra target, RealMatrix matrix);

    const JordanAlgebra& source() const { return source_; }
    const JordanAlgebra& target() const { return target_; }
    const RealMatrix& matrix() const { return matrix_; }

    // Requires x in the source span (within tol.rank); throws ValidationError
    // otherwise.
    Element apply(const Element& x, const Tolerances& tol = Tolerances::defaults()) const;

  private:
    JordanAlgebra source_;
    JordanAlgebra target_;
    RealMatrix matrix_;
};

LinearMap identity_map(const JordanAlgebra& a);

// f after g (g's target must span-match f's source).
LinearMap compose(const LinearMap& f, const LinearMap& g,
                  const Tolerances& tol = Tolerances::defaults());

// A verified unital Jordan homomorphism.  The image algebra (the span of the
// basis images inside the target) is computed at construction.
class Observable {
  public:
    Observable(LinearMap map, bool injective, JordanAlgebra image);

    const LinearMap& map() const { return map_; }
    const JordanAlgebra& source() const { return map_.source(); }
    const JordanAlgebra& target() const { return map_.target(); }
    bool injective() const { return injective_; }
    const JordanAlgebra& image_algebra() const { return image_; }

    Element apply(const Element& x, const Tolerances& tol = Tolerances::defaults()) const {
        return map_.apply(x, tol);
    }

  private:
    LinearMap map_;
    bool injective_;
    JordanAlgebra image_;
};

// Builds and fully verifies an Observable from the images of the source basis
// elements: images must lie in the target span, R(1) = 1 within tol.eq, and
// R(B_i o B_j) = R(B_i) o R(B_j) within tol.eq for all basis pairs (the worst
// violating pair is reported).  Injectivity is decided by the smallest
// singular value of the coordinate matrix (> tol.rank).
Observable make_observable(const JordanAlgebra& source, const JordanAlgebra& target,
                           const std::vector<Element>& images,
                           const Tolerances& tol = Tolerances::defaults());

// Sampled positivity verdict for a linear map.  `holds` carries
// holds-sampled semantics: unitality is exact, positivity was only tested on
// the recorded number of events.
struct PositivityReport {
    bool holds = false;
    bool unital = false;
    double worst_min_eigenvalue = 0.0;           // over all tested inputs
    std::optional<Element> witness;              // positive input mapped below -tol.psd
    int events_checked = 0;
    int samples = 0;
    std::uint64_t seed = 0;
};

PositivityReport is_positive_unital(const LinearMap& v, int samples = 25,
                                    std::uint64_t seed = 42,
                                    const Tolerances& tol = Tolerances::defaults());

// min eigenvalue of V(X^2) - V(X)^2, and whether it clears -tol.psd.
struct SchwarzResult {
    double min_eigenvalue = 0.0;
    bool holds = false;
};

SchwarzResult check_schwarz(const LinearMap& v, const Element& x,
                            const Tolerances& tol = Tolerances::defaults());

// min eigenvalue of sum s_k^2 X_k - (sum s_k X_k)^2 for positive X_k with
// sum X_k <= 1 (preconditions validated), and whether it clears -tol.psd.
struct QuadraticBoundResult {
    double min_eigenvalue = 0.0;
    bool holds = false;
};

QuadraticBoundResult check_lemma21(const std::vector<Element>& xs,
                                   const std::vector<double>& ss,
                                   const Tolerances& tol = Tolerances::defaults());

// V(B_i o B_j) = V(B_i) o V(B_j) within tol.eq for all source basis pairs.
bool is_multiplicative(const LinearMap& v, const Tolerances& tol = Tolerances::defaults());

// The unique W in R's source with R(W) = mu(X | R(source)): the conditional
// expectation onto the image algebra pulled back through the injective
// observable.  0 <= W <= 1 whenever 0 <= X <= 1; linear in X.
Element v_r_mu(const Observable& r, const State& mu, const Element& x, int samples = 25,
               std::uint64_t seed = 42, const Tolerances& tol = Tolerances::defaults());

// The distribution of the observable: the state Z -> mu(R(Z)) on R's source
// algebra, represented by its density.
State pushforward_distribution(const State& mu, const Observable& r,
                               const Tolerances& tol = Tolerances::defaults());

} // namespace jqp
