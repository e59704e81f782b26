#include "jqp/element.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "jqp/errors.hpp"

namespace jqp {

Element identity(int n) { return Element::Identity(n, n); }

Element zero(int n) { return Element::Zero(n, n); }

double frobenius_norm(const Element& x) { return x.norm(); }

bool approx_equal(const Element& x, const Element& y, double tol) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    return (x - y).norm() <= tol;
}

void validate_hermitian(const Element& x, double tol, const char* what) {
    if (x.rows() != x.cols()) {
        std::ostringstream os;
        os << what << " is not square (" << x.rows() << "x" << x.cols() << ")";
        throw ValidationError(os.str());
    }
    const double dev = (x - x.adjoint()).cwiseAbs().maxCoeff();
    if (!(dev <= tol)) {
        std::ostringstream os;
        os << what << " is not Hermitian (max deviation " << dev << " > " << tol << ")";
        throw ValidationError(os.str());
    }
}

void require_same_dim(const Element& x, const Element& y) {
    if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows()) {
        std::ostringstream os;
        os << "dimension mismatch: " << x.rows() << "x" << x.cols() << " vs "
           << y.rows() << "x" << y.cols();
        throw DimensionMismatch(os.str());
    }
}

Element jordan_product(const Element& x, const Element& y) {
    require_same_dim(x, y);
    return 0.5 * (x * y + y * x);
}

Element triple_product(const Element& x, const Element& y, const Element& z) {
    require_same_dim(x, y);
    require_same_dim(y, z);
    const Element via_jordan = jordan_product(jordan_product(x, y), z) +
                               jordan_product(jordan_product(y, z), x) -
                               jordan_product(jordan_product(x, z), y);
    const Element via_matrix = 0.5 * (x * y * z + z * y * x);
    // The two formulas agree identically for matrix representations; a gap
    // larger than rounding noise means corrupted (e.g. non-Hermitian) input.
    const double scale = 1.0 + x.norm() * y.norm() * z.norm();
    if ((via_jordan - via_matrix).norm() > 1e-10 * scale) {
        throw SolveError("triple product cross-check failed: Jordan-composition and "
                         "(XYZ+ZYX)/2 forms disagree; inputs are likely not Hermitian");
    }
    return via_matrix;
}

bool is_idempotent(const Element& x, double tol) {
    if (x.rows() != x.cols()) return false;
    return (jordan_product(x, x) - x).norm() <= tol;
}

bool commutes(const Element& x, const Element& y, double tol) {
    require_same_dim(x, y);
    return (x * y - y * x).norm() <= tol;
}

SpectralDecomposition spectral_decompose(const Element& x, double group_tol) {
    validate_hermitian(x, 1e-8, "spectral_decompose input");
    const int n = static_cast<int>(x.rows());
    Eigen::SelfAdjointEigenSolver<Element> es(0.5 * (x + Element(x.adjoint())));
    if (es.info() != Eigen::Success) {
        throw SolveError("eigendecomposition failed to converge");
    }
    const Eigen::VectorXd lambda = es.eigenvalues();  // ascending
    const Element vecs = es.eigenvectors();

    SpectralDecomposition out;
    int start = 0;
    while (start < n) {
        int end = start + 1;
        // Chain grouping: extend while consecutive eigenvalues stay close.
        while (end < n && lambda(end) - lambda(end - 1) <= group_tol) ++end;
        Element proj = Element::Zero(n, n);
        double mean = 0.0;
        for (int k = start; k < end; ++k) {
            proj += vecs.col(k) * vecs.col(k).adjoint();
            mean += lambda(k);
        }
        mean /= static_cast<double>(end - start);
        proj = 0.5 * (proj + Element(proj.adjoint()));  // scrub rounding noise
        out.eigenvalues.push_back(mean);
        out.projections.push_back(proj);
        start = end;
    }
    return out;
}

SpectralDecomposition spectral_decompose(const Element& x, const Tolerances& tol) {
    return spectral_decompose(x, tol.group);
}

double min_eigenvalue(const Element& x) {
    Eigen::SelfAdjointEigenSolver<Element> es(0.5 * (x + Element(x.adjoint())),
                                              Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw SolveError("eigendecomposition failed to converge");
    }
    return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const Element& x) {
    Eigen::SelfAdjointEigenSolver<Element> es(0.5 * (x + Element(x.adjoint())),
                                              Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw SolveError("eigendecomposition failed to converge");
    }
    return es.eigenvalues().maxCoeff();
}

double operator_norm(const Element& x) {
    return std::max(std::abs(min_eigenvalue(x)), std::abs(max_eigenvalue(x)));
}

bool leq(const Element& x, const Element& y, const Tolerances& tol) {
    require_same_dim(x, y);
    return min_eigenvalue(y - x) >= -tol.psd;
}

Element positive_part(const Element& x, double group_tol) {
    const SpectralDecomposition sd = spectral_decompose(x, group_tol);
    Element pos = zero(static_cast<int>(x.rows()));
    for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
        if (sd.eigenvalues[i] > 0.0) pos += sd.eigenvalues[i] * sd.projections[i];
    }
    return pos;
}

int herm_dim(int n) { return n * n; }

RealVector herm_coords(const Element& x) {
    const int n = static_cast<int>(x.rows());
    if (x.cols() != n) throw DimensionMismatch("herm_coords: matrix not square");
    RealVector v(herm_dim(n));
    int k = 0;
    for (int i = 0; i < n; ++i) v(k++) = x(i, i).real();
    const double s = std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            v(k++) = s * x(i, j).real();
            v(k++) = s * x(i, j).imag();
        }
    }
    return v;
}

Element herm_from_coords(const RealVector& v, int n) {
    if (v.size() != herm_dim(n)) {
        throw DimensionMismatch("herm_from_coords: coordinate vector has wrong length");
    }
    Element x = Element::Zero(n, n);
    int k = 0;
    for (int i = 0; i < n; ++i) x(i, i) = v(k++);
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double re = v(k++) * s;
            const double im = v(k++) * s;
            x(i, j) = Complex(re, im);
            x(j, i) = Complex(re, -im);
        }
    }
    return x;
}

Element random_hermitian(int n, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Element a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a(i, j) = Complex(gauss(rng), gauss(rng));
        }
    }
    return 0.5 * (a + Element(a.adjoint()));
}

Element random_projection(int n, int rank, Rng& rng) {
    if (rank < 0 || rank > n) throw ValidationError("random_projection: rank out of range");
    if (rank == 0) return zero(n);
    if (rank == n) return identity(n);
    Eigen::SelfAdjointEigenSolver<Element> es(random_hermitian(n, rng));
    const Element vecs = es.eigenvectors();
    Element p = Element::Zero(n, n);
    for (int k = 0; k < rank; ++k) p += vecs.col(k) * vecs.col(k).adjoint();
    return 0.5 * (p + Element(p.adjoint()));
}

} // namespace jqp
