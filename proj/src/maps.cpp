#include "jqp/maps.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "jqp/condexp.hpp"
#include "jqp/errors.hpp"

namespace jqp {

namespace {

RealVector pinv_solve(const RealMatrix& m, const RealVector& y, double cutoff) {
    Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector sv = svd.singularValues();
    RealVector uty = svd.matrixU().transpose() * y;
    RealVector scaled = RealVector::Zero(sv.size());
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > cutoff) scaled(k) = uty(k) / sv(k);
    }
    return svd.matrixV() * scaled;
}

} // namespace

LinearMap::LinearMap(JordanAlgebra source, JordanAlgebra target, RealMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim()) {
        std::ostringstream os;
        os << "LinearMap: matrix is " << matrix_.rows() << "x" << matrix_.cols()
           << " but target/source dimensions are " << target_.dim() << "/" << source_.dim();
        throw DimensionMismatch(os.str());
    }
}

Element LinearMap::apply(const Element& x, const Tolerances& tol) const {
    if (!source_.contains(x, tol)) {
        throw ValidationError("LinearMap::apply: element does not lie in the source span");
    }
    return target_.from_coords(matrix_ * source_.coords(x));
}

LinearMap identity_map(const JordanAlgebra& a) {
    return LinearMap(a, a, RealMatrix::Identity(a.dim(), a.dim()));
}

LinearMap compose(const LinearMap& f, const LinearMap& g, const Tolerances& tol) {
    if (!same_span(f.source(), g.target(), tol)) {
        throw ValidationError("compose: inner algebras do not span the same subspace");
    }
    // Bases may differ even when the spans agree; convert coordinates
    // explicitly through the ambient isometry.
    const RealMatrix change =
        f.source().coordinate_frame().transpose() * g.target().coordinate_frame();
    return LinearMap(g.source(), f.target(), f.matrix() * change * g.matrix());
}

Observable::Observable(LinearMap map, bool injective, JordanAlgebra image)
    : map_(std::move(map)), injective_(injective), image_(std::move(image)) {}

Observable make_observable(const JordanAlgebra& source, const JordanAlgebra& target,
                           const std::vector<Element>& images, const Tolerances& tol) {
    if (static_cast<int>(images.size()) != source.dim()) {
        throw DimensionMismatch("make_observable: need exactly one image per source basis element");
    }
    RealMatrix m(target.dim(), source.dim());
    for (int j = 0; j < source.dim(); ++j) {
        const Element& img = images[static_cast<std::size_t>(j)];
        validate_hermitian(img, tol.eq, "image");
        if (!target.contains(img, tol)) {
            std::ostringstream os;
            os << "make_observable: image of basis element " << j
               << " does not lie in the target span";
            throw ValidationError(os.str());
        }
        m.col(j) = target.coords(img);
    }
    LinearMap lin(source, target, std::move(m));

    const Element one_image = lin.apply(identity(source.ambient_dim()), tol);
    const double unital_dev = (one_image - identity(target.ambient_dim())).norm();
    if (unital_dev > tol.eq) {
        std::ostringstream os;
        os << "make_observable: map is not unital (||R(1) - 1|| = " << unital_dev << ")";
        throw ValidationError(os.str());
    }

    double worst = 0.0;
    int worst_i = 0;
    int worst_j = 0;
    for (int i = 0; i < source.dim(); ++i) {
        for (int j = i; j < source.dim(); ++j) {
            const Element lhs = lin.apply(jordan_product(source.basis(i), source.basis(j)), tol);
            const Element rhs = jordan_product(images[static_cast<std::size_t>(i)],
                                               images[static_cast<std::size_t>(j)]);
            const double dev = (lhs - rhs).norm();
            if (dev > worst) {
                worst = dev;
                worst_i = i;
                worst_j = j;
            }
        }
    }
    if (worst > tol.eq) {
        std::ostringstream os;
        os << "make_observable: not a Jordan homomorphism (worst pair (" << worst_i << ","
           << worst_j << ") with ||R(B_i o B_j) - R(B_i) o R(B_j)|| = " << worst << ")";
        throw ValidationError(os.str());
    }

    Eigen::JacobiSVD<RealMatrix> svd(lin.matrix());
    const bool injective = svd.singularValues().minCoeff() > tol.rank;

    JordanAlgebra image = make_algebra(target.ambient_dim(), images, tol);
    return Observable(std::move(lin), injective, std::move(image));
}

PositivityReport is_positive_unital(const LinearMap& v, int samples, std::uint64_t seed,
                                    const Tolerances& tol) {
    PositivityReport rep;
    rep.samples = samples;
    rep.seed = seed;

    const Element one_s = identity(v.source().ambient_dim());
    const Element one_t = identity(v.target().ambient_dim());
    rep.unital = (v.apply(one_s, tol) - one_t).norm() <= tol.eq;

    std::vector<Element> inputs;
    for (const Element& b : v.source().basis()) {
        const SpectralDecomposition sd = spectral_decompose(b, tol.group);
        if (sd.projections.size() <= 1) continue;
        for (std::size_t i = 0; i < sd.projections.size(); ++i) {
            inputs.push_back(sd.projections[i]);
            for (std::size_t j = i + 1; j < sd.projections.size(); ++j) {
                inputs.push_back(sd.projections[i] + sd.projections[j]);
            }
        }
    }
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        const Element z = random_element(v.source(), rng);
        const SpectralDecomposition sd = spectral_decompose(z, tol.group);
        for (const Element& p : sd.projections) inputs.push_back(p);
        // A generic positive element as well: the square of a random element.
        inputs.push_back(jordan_product(z, z));
    }

    rep.worst_min_eigenvalue = 0.0;
    bool first = true;
    for (const Element& p : inputs) {
        const double scale = std::max(1.0, operator_norm(p));
        const double me = min_eigenvalue(v.apply(p, tol)) / scale;
        ++rep.events_checked;
        if (first || me < rep.worst_min_eigenvalue) {
            rep.worst_min_eigenvalue = me;
            first = false;
            if (me < -tol.psd) rep.witness = p;
        }
    }
    rep.holds = rep.unital && rep.worst_min_eigenvalue >= -tol.psd;
    if (rep.holds) rep.witness.reset();
    return rep;
}

SchwarzResult check_schwarz(const LinearMap& v, const Element& x, const Tolerances& tol) {
    const Element vx = v.apply(x, tol);
    const Element vxx = v.apply(jordan_product(x, x), tol);
    SchwarzResult out;
    out.min_eigenvalue = min_eigenvalue(vxx - jordan_product(vx, vx));
    out.holds = out.min_eigenvalue >= -tol.psd;
    return out;
}

QuadraticBoundResult check_lemma21(const std::vector<Element>& xs,
                                   const std::vector<double>& ss, const Tolerances& tol) {
    if (xs.empty() || xs.size() != ss.size()) {
        throw DimensionMismatch("check_lemma21: need matching nonempty element/coefficient lists");
    }
    const int n = static_cast<int>(xs.front().rows());
    Element sum = zero(n);
    for (const Element& x : xs) {
        require_same_dim(x, xs.front());
        validate_hermitian(x, tol.eq, "summand");
        if (min_eigenvalue(x) < -tol.psd) {
            throw ValidationError("check_lemma21: summand is not positive");
        }
        sum += x;
    }
    if (min_eigenvalue(identity(n) - sum) < -tol.psd) {
        throw ValidationError("check_lemma21: summands do not satisfy sum X_k <= 1");
    }
    Element weighted = zero(n);
    Element weighted_sq = zero(n);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        weighted += ss[k] * xs[k];
        weighted_sq += ss[k] * ss[k] * xs[k];
    }
    QuadraticBoundResult out;
    out.min_eigenvalue = min_eigenvalue(weighted_sq - jordan_product(weighted, weighted));
    out.holds = out.min_eigenvalue >= -tol.psd;
    return out;
}

bool is_multiplicative(const LinearMap& v, const Tolerances& tol) {
    const JordanAlgebra& src = v.source();
    for (int i = 0; i < src.dim(); ++i) {
        for (int j = i; j < src.dim(); ++j) {
            const Element lhs = v.apply(jordan_product(src.basis(i), src.basis(j)), tol);
            const Element rhs = jordan_product(v.apply(src.basis(i), tol), v.apply(src.basis(j), tol));
            if ((lhs - rhs).norm() > tol.eq) return false;
        }
    }
    return true;
}

Element v_r_mu(const Observable& r, const State& mu, const Element& x, int samples,
               std::uint64_t seed, const Tolerances& tol) {
    if (!r.injective()) {
        throw ValidationError("v_r_mu: observable is not injective");
    }
    if (mu.dim() != r.target().ambient_dim()) {
        throw DimensionMismatch("v_r_mu: state does not live on the target algebra");
    }
    const CondExpResult ce = conditional_expectation(mu, x, r.image_algebra(), samples, seed, tol);

    const RealVector ty = r.target().coords(ce.value);
    const RealVector w = pinv_solve(r.map().matrix(), ty, tol.rank);
    const double residual = (r.map().matrix() * w - ty).norm();
    if (residual > tol.solve * std::max(1.0, ty.norm())) {
        std::ostringstream os;
        os << "v_r_mu: conditional expectation does not pull back through the observable "
              "(residual " << residual << ")";
        throw SolveError(os.str());
    }
    return r.source().from_coords(w);
}

State pushforward_distribution(const State& mu, const Observable& r, const Tolerances& tol) {
    if (mu.dim() != r.target().ambient_dim()) {
        throw DimensionMismatch("pushforward_distribution: state does not live on the target");
    }
    const int n = r.source().ambient_dim();
    Element sigma = zero(n);
    for (int i = 0; i < r.source().dim(); ++i) {
        sigma += mu.evaluate(r.apply(r.source().basis(i), tol)) * r.source().basis(i);
    }
    sigma = 0.5 * (sigma + Element(sigma.adjoint()));
    return State(sigma, tol);
}

} // namespace jqp
