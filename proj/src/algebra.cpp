#include "jqp/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "jqp/errors.hpp"

namespace jqp {

namespace {

double trace_inner(const Element& x, const Element& y) {
    return (x * y).trace().real();
}

} // namespace

std::vector<Element> orthonormalize(const std::vector<Element>& spanning,
                                    int ambient_dim, const Tolerances& tol) {
    std::vector<RealVector> q;  // orthonormal coordinate vectors kept so far
    std::vector<Element> basis;
    for (const Element& raw : spanning) {
        if (raw.rows() != ambient_dim || raw.cols() != ambient_dim) {
            throw DimensionMismatch("orthonormalize: element has wrong ambient dimension");
        }
        RealVector v = herm_coords(0.5 * (raw + Element(raw.adjoint())));
        const double orig = v.norm();
        // Modified Gram-Schmidt with one re-orthogonalization pass; an input
        // that is already orthonormal to the kept set passes through
        // unchanged, which downstream code relies on (basis order and the
        // exact user-supplied matrices are preserved).
        for (int pass = 0; pass < 2; ++pass) {
            for (const RealVector& u : q) v -= u.dot(v) * u;
        }
        if (v.norm() <= tol.rank * std::max(1.0, orig)) continue;  // dependent
        v /= v.norm();
        q.push_back(v);
        basis.push_back(herm_from_coords(v, ambient_dim));
    }
    return basis;
}

JordanAlgebra::JordanAlgebra(int ambient_dim, std::vector<Element> orthonormal_basis,
                             const Tolerances& tol)
    : n_(ambient_dim), basis_(std::move(orthonormal_basis)) {
    if (n_ < 1) throw ValidationError("JordanAlgebra: ambient dimension must be positive");
    if (basis_.empty()) throw ValidationError("JordanAlgebra: empty basis");

    const int d = dim();
    frame_.resize(herm_dim(n_), d);
    for (int i = 0; i < d; ++i) {
        validate_hermitian(basis_[static_cast<std::size_t>(i)], tol.eq, "basis element");
        if (basis_[static_cast<std::size_t>(i)].rows() != n_) {
            throw DimensionMismatch("JordanAlgebra: basis element has wrong ambient dimension");
        }
        frame_.col(i) = herm_coords(basis_[static_cast<std::size_t>(i)]);
    }

    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            const double g = trace_inner(basis_[static_cast<std::size_t>(i)],
                                         basis_[static_cast<std::size_t>(j)]);
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(g - want) > tol.eq) {
                std::ostringstream os;
                os << "JordanAlgebra: basis not orthonormal (trace(B_" << i << " B_" << j
                   << ") = " << g << ")";
                throw ValidationError(os.str());
            }
        }
    }

    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            const Element prod = jordan_product(basis_[static_cast<std::size_t>(i)],
                                                basis_[static_cast<std::size_t>(j)]);
            const double res = span_residual(prod);
            if (res > tol.rank * std::max(1.0, prod.norm())) {
                std::ostringstream os;
                os << "JordanAlgebra: span is not Jordan-closed (residual of B_" << i
                   << " o B_" << j << " is " << res << ")";
                throw ValidationError(os.str());
            }
        }
    }

    const Element one = identity(n_);
    const double res = span_residual(one);
    if (res > tol.rank * std::sqrt(static_cast<double>(n_))) {
        std::ostringstream os;
        os << "JordanAlgebra: ambient identity not in span (residual " << res << ")";
        throw ValidationError(os.str());
    }
}

RealVector JordanAlgebra::coords(const Element& x) const {
    if (x.rows() != n_ || x.cols() != n_) {
        throw DimensionMismatch("coords: element has wrong ambient dimension");
    }
    return frame_.transpose() * herm_coords(x);
}

Element JordanAlgebra::from_coords(const RealVector& c) const {
    if (c.size() != dim()) {
        throw DimensionMismatch("from_coords: coordinate vector has wrong length");
    }
    return herm_from_coords(frame_ * c, n_);
}

Element JordanAlgebra::project(const Element& x) const { return from_coords(coords(x)); }

double JordanAlgebra::span_residual(const Element& x) const {
    const RealVector v = herm_coords(x);
    return (v - frame_ * (frame_.transpose() * v)).norm();
}

bool JordanAlgebra::contains(const Element& x, const Tolerances& tol) const {
    if (x.rows() != n_ || x.cols() != n_) return false;
    return span_residual(x) <= tol.rank * std::max(1.0, x.norm());
}

bool JordanAlgebra::is_associative(const Tolerances& tol) const {
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        for (std::size_t j = i + 1; j < basis_.size(); ++j) {
            if (!commutes(basis_[i], basis_[j], tol.eq)) return false;
        }
    }
    return true;
}

JordanAlgebra make_algebra(int ambient_dim, const std::vector<Element>& spanning_set,
                           const Tolerances& tol) {
    for (const Element& x : spanning_set) validate_hermitian(x, tol.eq, "spanning element");
    std::vector<Element> basis = orthonormalize(spanning_set, ambient_dim, tol);
    return JordanAlgebra(ambient_dim, std::move(basis), tol);
}

JordanAlgebra generate_subalgebra(int ambient_dim, const std::vector<Element>& generators,
                                  const Tolerances& tol) {
    std::vector<Element> seed;
    seed.push_back(identity(ambient_dim));
    for (const Element& g : generators) {
        validate_hermitian(g, tol.eq, "generator");
        seed.push_back(0.5 * (g + Element(g.adjoint())));
    }
    std::vector<Element> basis = orthonormalize(seed, ambient_dim, tol);

    // Close under the Jordan product: adjoin products that leave the span and
    // re-orthonormalize (the existing basis passes through unchanged) until
    // the dimension stabilizes.  Terminates: dimension <= ambient_dim^2 and
    // strictly increases each round.
    while (true) {
        const std::size_t before = basis.size();
        RealMatrix frame(herm_dim(ambient_dim), static_cast<Eigen::Index>(basis.size()));
        for (std::size_t i = 0; i < basis.size(); ++i) {
            frame.col(static_cast<Eigen::Index>(i)) = herm_coords(basis[i]);
        }
        std::vector<Element> extended = basis;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            for (std::size_t j = i; j < basis.size(); ++j) {
                Element prod = jordan_product(basis[i], basis[j]);
                const RealVector v = herm_coords(prod);
                const double residual = (v - frame * (frame.transpose() * v)).norm();
                if (residual > tol.rank * std::max(1.0, prod.norm())) {
                    extended.push_back(std::move(prod));
                }
            }
        }
        basis = orthonormalize(extended, ambient_dim, tol);
        if (basis.size() == before) break;
    }
    return JordanAlgebra(ambient_dim, std::move(basis), tol);
}

JordanAlgebra full_algebra(int n, const Tolerances& tol) {
    std::vector<Element> basis;
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        Element e = zero(n);
        e(i, i) = 1.0;
        basis.push_back(e);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Element sym = zero(n);
            sym(i, j) = s;
            sym(j, i) = s;
            basis.push_back(sym);
            Element asym = zero(n);
            asym(i, j) = Complex(0.0, s);
            asym(j, i) = Complex(0.0, -s);
            basis.push_back(asym);
        }
    }
    return JordanAlgebra(n, std::move(basis), tol);
}

JordanAlgebra diagonal_algebra(int n, const Tolerances& tol) {
    std::vector<Element> basis;
    for (int i = 0; i < n; ++i) {
        Element e = zero(n);
        e(i, i) = 1.0;
        basis.push_back(e);
    }
    return JordanAlgebra(n, std::move(basis), tol);
}

JordanAlgebra scalar_algebra(int n, const Tolerances& tol) {
    std::vector<Element> basis;
    basis.push_back(identity(n) / std::sqrt(static_cast<double>(n)));
    return JordanAlgebra(n, std::move(basis), tol);
}

bool is_event(const Element& x, const JordanAlgebra& a, const Tolerances& tol) {
    if (x.rows() != a.ambient_dim() || x.cols() != a.ambient_dim()) return false;
    return is_idempotent(x, tol.eq) && a.contains(x, tol);
}

bool operator_commute(const Element& e, const Element& f, const Tolerances& tol) {
    return commutes(e, f, tol.eq);
}

bool contains_algebra(const JordanAlgebra& outer, const JordanAlgebra& inner,
                      const Tolerances& tol) {
    if (outer.ambient_dim() != inner.ambient_dim()) return false;
    for (const Element& b : inner.basis()) {
        if (!outer.contains(b, tol)) return false;
    }
    return true;
}

bool same_span(const JordanAlgebra& a, const JordanAlgebra& b, const Tolerances& tol) {
    return a.dim() == b.dim() && contains_algebra(a, b, tol) && contains_algebra(b, a, tol);
}

std::vector<Element> minimal_idempotents(const JordanAlgebra& a, const Tolerances& tol) {
    if (!a.is_associative(tol)) {
        throw ValidationError("minimal_idempotents: algebra is not associative");
    }
    const int n = a.ambient_dim();

    // Simultaneous diagonalization by partition refinement: maintain a
    // unitary U and a partition of its column indices into blocks (the joint
    // eigenspaces found so far); each basis element is block-diagonal in the
    // running frame and refines the blocks through its eigenvalue groups.
    Element u = identity(n);
    std::vector<std::vector<int>> blocks{std::vector<int>()};
    for (int i = 0; i < n; ++i) blocks[0].push_back(i);

    for (const Element& b : a.basis()) {
        const Element m = u.adjoint() * b * u;
        std::vector<std::vector<int>> refined;
        for (const std::vector<int>& blk : blocks) {
            const int k = static_cast<int>(blk.size());
            if (k == 1) {
                refined.push_back(blk);
                continue;
            }
            Element sub(k, k);
            for (int r = 0; r < k; ++r) {
                for (int c = 0; c < k; ++c) sub(r, c) = m(blk[static_cast<std::size_t>(r)], blk[static_cast<std::size_t>(c)]);
            }
            sub = 0.5 * (sub + Element(sub.adjoint()));
            Eigen::SelfAdjointEigenSolver<Element> es(sub);
            if (es.info() != Eigen::Success) {
                throw SolveError("minimal_idempotents: eigendecomposition failed");
            }
            const Eigen::VectorXd lambda = es.eigenvalues();  // ascending
            const Element w = es.eigenvectors();
            // Rotate the block's columns of U into the eigenbasis.
            Element ublk(n, k);
            for (int c = 0; c < k; ++c) ublk.col(c) = u.col(blk[static_cast<std::size_t>(c)]);
            ublk = ublk * w;
            for (int c = 0; c < k; ++c) u.col(blk[static_cast<std::size_t>(c)]) = ublk.col(c);
            // Split by eigenvalue chains.
            int start = 0;
            while (start < k) {
                int end = start + 1;
                while (end < k && lambda(end) - lambda(end - 1) <= tol.group) ++end;
                std::vector<int> part;
                for (int c = start; c < end; ++c) part.push_back(blk[static_cast<std::size_t>(c)]);
                refined.push_back(std::move(part));
                start = end;
            }
        }
        blocks = std::move(refined);
    }

    std::vector<Element> idempotents;
    for (const std::vector<int>& blk : blocks) {
        Element p = Element::Zero(n, n);
        for (int c : blk) p += u.col(c) * u.col(c).adjoint();
        p = 0.5 * (p + Element(p.adjoint()));
        idempotents.push_back(std::move(p));
    }

    if (static_cast<int>(idempotents.size()) != a.dim()) {
        std::ostringstream os;
        os << "minimal_idempotents: found " << idempotents.size()
           << " joint eigenspaces for an algebra of dimension " << a.dim()
           << " (eigenvalue grouping inconsistent with the span)";
        throw ValidationError(os.str());
    }
    for (const Element& p : idempotents) {
        if (!a.contains(p, tol)) {
            throw ValidationError("minimal_idempotents: projection escapes the span");
        }
    }
    return idempotents;
}

Element random_element(const JordanAlgebra& a, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    RealVector c(a.dim());
    for (int i = 0; i < a.dim(); ++i) c(i) = gauss(rng);
    return a.from_coords(c);
}

} // namespace jqp
