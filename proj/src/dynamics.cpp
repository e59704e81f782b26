#include "jqp/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "jqp/errors.hpp"

namespace jqp {

std::string to_string(Classification c) {
    switch (c) {
        case Classification::derivation: return "derivation";
        case Classification::dissipation_sampled: return "dissipation_sampled";
        case Classification::neither: return "neither";
        case Classification::unclassified: return "unclassified";
    }
    return "unclassified";
}

Element GeneratorMap::apply(const Element& x, const Tolerances& tol) const {
    const double residual = algebra.span_residual(x);
    if (residual > tol.rank * std::max(1.0, frobenius_norm(x))) {
        throw ValidationError("GeneratorMap: input is not in the algebra");
    }
    return algebra.from_coords(matrix * algebra.coords(x));
}

GeneratorMap generator_from_kernel(const LinearMap& v, double delta,
                                   bool allow_first_order, const Tolerances& tol) {
    if (!(delta > 0.0)) {
        throw ValidationError("generator_from_kernel: delta must be positive");
    }
    if (v.matrix().rows() != v.matrix().cols()) {
        throw ValidationError("generator_from_kernel: kernel matrix is not square");
    }
    if (!same_span(v.source(), v.target(), tol)) {
        throw ValidationError(
            "generator_from_kernel: kernel must act on a single algebra");
    }
    const JordanAlgebra& a = v.source();
    const int d = a.dim();
    // Express the kernel with the source basis on both sides (the bases may
    // differ even though the spans agree).
    const RealMatrix m = (a.coordinate_frame().transpose() *
                          v.target().coordinate_frame()) * v.matrix();

    const Eigen::EigenSolver<RealMatrix> es(m);
    bool negative_axis = false;
    for (int k = 0; k < d; ++k) {
        const Complex ev = es.eigenvalues()(k);
        if (ev.real() <= 0.0 &&
            std::abs(ev.imag()) <= tol.rank * std::max(1.0, std::abs(ev))) {
            negative_axis = true;
            break;
        }
    }

    GeneratorMap out{a, RealMatrix::Zero(d, d), Classification::unclassified, false};
    if (negative_axis) {
        if (!allow_first_order) {
            throw LogarithmError(
                "generator_from_kernel: eigenvalue on the closed negative real axis, "
                "no principal logarithm (first-order fallback available on request)");
        }
        out.matrix = (m - RealMatrix::Identity(d, d)) / delta;
        out.first_order = true;
    } else {
        const Eigen::MatrixXcd logc = m.cast<Complex>().eval().log();
        const double imag_norm = logc.imag().norm();
        if (imag_norm > tol.solve * std::max(1.0, logc.real().norm())) {
            throw LogarithmError(
                "generator_from_kernel: principal logarithm is not real");
        }
        out.matrix = logc.real() / delta;
        const RealMatrix round_trip = (delta * out.matrix).eval().exp();
        const double rt_dev = (round_trip - m).norm();
        if (rt_dev > tol.solve * std::max(1.0, m.norm())) {
            std::ostringstream os;
            os << "generator_from_kernel: exponential round-trip residual " << rt_dev;
            throw SolveError(os.str());
        }
    }

    const RealVector c1 = a.coords(identity(a.ambient_dim()));
    const bool unital = (m * c1 - c1).norm() <= tol.eq * std::max(1.0, c1.norm());
    if (unital) {
        const double one_dev = (out.matrix * c1).norm();
        if (one_dev > tol.solve * std::max(1.0, out.matrix.norm()) * c1.norm()) {
            std::ostringstream os;
            os << "generator_from_kernel: L(1) deviates from 0 by " << one_dev
               << " for a unital kernel";
            throw SolveError(os.str());
        }
    }
    return out;
}

LinearMap exponentiate(const GeneratorMap& l, double t) {
    const RealMatrix expm = (t * l.matrix).eval().exp();
    return LinearMap(l.algebra, l.algebra, expm);
}

Element polarized_defect(const GeneratorMap& l, const Element& y, const Element& z,
                         const Tolerances& tol) {
    const Element lhs = l.apply(jordan_product(y, z), tol);
    return lhs - jordan_product(y, l.apply(z, tol)) - jordan_product(z, l.apply(y, tol));
}

ClassificationResult classify(const GeneratorMap& l, int samples, std::uint64_t seed,
                              const Tolerances& tol) {
    ClassificationResult out;
    out.samples = samples;
    out.seed = seed;
    const JordanAlgebra& a = l.algebra;
    const int d = a.dim();

    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            const double defect =
                polarized_defect(l, a.basis(i), a.basis(j), tol).norm();
            if (defect > out.max_basis_defect) {
                out.max_basis_defect = defect;
                out.worst_basis_pair = {i, j};
            }
        }
    }
    if (out.max_basis_defect <= tol.eq) {
        out.value = Classification::derivation;
        return out;
    }

    Rng rng(seed);
    out.worst_min_eigenvalue = std::numeric_limits<double>::infinity();
    Element worst_y;
    for (int s = 0; s < samples; ++s) {
        Element y = random_element(a, rng);
        const double scale = frobenius_norm(y);
        if (scale > 0.0) y /= scale;
        const double me = min_eigenvalue(polarized_defect(l, y, y, tol));
        if (me < out.worst_min_eigenvalue) {
            out.worst_min_eigenvalue = me;
            worst_y = y;
        }
    }
    if (out.worst_min_eigenvalue >= -tol.psd) {
        out.value = Classification::dissipation_sampled;
    } else {
        out.value = Classification::neither;
        out.witness = std::move(worst_y);
    }
    return out;
}

GeneratorMap commutator_derivation(const JordanAlgebra& m, const Element& h,
                                   const Tolerances& tol) {
    validate_hermitian(h, tol.eq, "commutator_derivation: H");
    if (h.rows() != m.ambient_dim()) {
        throw DimensionMismatch("commutator_derivation: H has the wrong dimension");
    }
    const int d = m.dim();
    RealMatrix mat(d, d);
    for (int j = 0; j < d; ++j) {
        const Element& b = m.basis(j);
        const Element image = Complex(0.0, 1.0) * (h * b - b * h);
        const double residual = m.span_residual(image);
        if (residual > tol.rank * std::max(1.0, frobenius_norm(image))) {
            throw ValidationError(
                "commutator_derivation: the algebra is not commutator-closed for H");
        }
        mat.col(j) = m.coords(image);
    }
    return GeneratorMap{m, std::move(mat), Classification::derivation, false};
}

Element schrodinger_flow(const Element& h, double t, const Element& x) {
    validate_hermitian(h, 1e-12 * std::max(1.0, frobenius_norm(h)), "schrodinger_flow: H");
    validate_hermitian(x, 1e-12 * std::max(1.0, frobenius_norm(x)), "schrodinger_flow: X");
    require_same_dim(h, x);
    Eigen::SelfAdjointEigenSolver<Element> es(h);
    if (es.info() != Eigen::Success) {
        throw SolveError("schrodinger_flow: eigendecomposition failed");
    }
    const Eigen::VectorXd lambda = es.eigenvalues();
    Eigen::VectorXcd phases(lambda.size());
    for (int k = 0; k < lambda.size(); ++k) {
        phases(k) = std::exp(Complex(0.0, t * lambda(k)));
    }
    const Element u = es.eigenvectors() * phases.asDiagonal() *
                      es.eigenvectors().adjoint();
    const Element result = u * x * u.adjoint();
    return ((result + result.adjoint()) / 2.0).eval();
}

} // namespace jqp
