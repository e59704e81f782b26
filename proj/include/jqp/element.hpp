#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "jqp/tolerances.hpp"

namespace jqp {

using Complex = std::complex<double>;

// The universal carrier: an n-by-n complex matrix, Hermitian at every API
// boundary.  Events, densities and algebra elements are all of this type.
using Element = Eigen::MatrixXcd;

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Basic constructors and predicates
// ---------------------------------------------------------------------------

Element identity(int n);
Element zero(int n);

double frobenius_norm(const Element& x);

// Frobenius-norm comparison: ||x - y||_F <= tol.
bool approx_equal(const Element& x, const Element& y, double tol);

// Throws ValidationError unless x is square and Hermitian within tol
// (max-entry deviation from its adjoint).
void validate_hermitian(const Element& x, double tol, const char* what = "element");

// Throws DimensionMismatch unless x and y are square of equal size.
void require_same_dim(const Element& x, const Element& y);

// ---------------------------------------------------------------------------
// Jordan structure
// ---------------------------------------------------------------------------

// X o Y = (XY + YX)/2.
Element jordan_product(const Element& x, const Element& y);

// {X,Y,Z} = (X o Y) o Z + (Y o Z) o X - (X o Z) o Y.  In this matrix
// representation the same element equals (XYZ + ZYX)/2; both formulas are
// evaluated and cross-checked (SolveError on disagreement, which would
// indicate a numerics bug rather than bad input).
Element triple_product(const Element& x, const Element& y, const Element& z);

// E o E = E within tol?
bool is_idempotent(const Element& x, double tol);

// Matrix commutator [x,y] vanishes within tol (Frobenius norm)?
bool commutes(const Element& x, const Element& y, double tol);

// ---------------------------------------------------------------------------
// Spectral calculus and order
// ---------------------------------------------------------------------------

struct SpectralDecomposition {
    std::vector<double> eigenvalues;    // distinct after grouping, ascending
    std::vector<Element> projections;   // orthogonal idempotents summing to 1
};

// Eigendecomposition with eigenvalues grouped when adjacent values (in
// ascending order) lie within group_tol of each other; each group's
// eigenvalue is the mean of its members.
SpectralDecomposition spectral_decompose(const Element& x, double group_tol);

SpectralDecomposition spectral_decompose(const Element& x,
                                         const Tolerances& tol = Tolerances::defaults());

double min_eigenvalue(const Element& x);
double max_eigenvalue(const Element& x);

// Spectral radius = operator norm for Hermitian x.
double operator_norm(const Element& x);

// X <= Y in the JB order: min eigenvalue of Y - X >= -psd_tol.
bool leq(const Element& x, const Element& y,
         const Tolerances& tol = Tolerances::defaults());

// Positive and negative parts: x = pos - neg with pos, neg >= 0, pos o neg = 0.
Element positive_part(const Element& x, double group_tol);

// ---------------------------------------------------------------------------
// Real coordinates
// ---------------------------------------------------------------------------
// herm_coords is a linear isometry from the real vector space of Hermitian
// n-by-n matrices onto R^{n^2}: the trace inner product trace(XY) becomes the
// Euclidean dot product.  Layout: the n diagonal entries, then for each pair
// i<j the values sqrt(2)*Re(X_ij) and sqrt(2)*Im(X_ij).

int herm_dim(int n);  // = n*n

RealVector herm_coords(const Element& x);
Element herm_from_coords(const RealVector& v, int n);

// ---------------------------------------------------------------------------
// Randomized constructions (deterministic in the supplied engine state)
// ---------------------------------------------------------------------------

// GUE-style: (A + A*)/2 with A of i.i.d. standard complex Gaussian entries.
Element random_hermitian(int n, Rng& rng);

// A random rank-r orthogonal projection (eigenprojection of a random
// Hermitian matrix).
Element random_projection(int n, int rank, Rng& rng);

} // namespace jqp
