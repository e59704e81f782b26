#pragma once

// Shared constructions for the test suite: deterministic random algebras,
// states, and maps built only from the public library API.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jqp/algebra.hpp"
#include "jqp/element.hpp"
#include "jqp/errors.hpp"
#include "jqp/maps.hpp"
#include "jqp/state.hpp"

namespace jqp::testing {

inline Element mat2(Complex a, Complex b, Complex c, Complex d) {
    Element m(2, 2);
    m << a, b, c, d;
    return m;
}

inline Element diag(const std::vector<double>& entries) {
    Element m = zero(static_cast<int>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = entries[i];
    return m;
}

inline Element pauli_x() { return mat2(0, 1, 1, 0); }
inline Element pauli_y() { return mat2(0, Complex(0, -1), Complex(0, 1), 0); }
inline Element pauli_z() { return mat2(1, 0, 0, -1); }

// Projection onto (|0> + |1>)/sqrt(2).
inline Element plus_projection() { return mat2(0.5, 0.5, 0.5, 0.5); }

// A Haar-ish random unitary: the eigenvector matrix of a random Hermitian.
inline Element random_unitary(int n, Rng& rng) {
    Eigen::SelfAdjointEigenSolver<Element> es(random_hermitian(n, rng));
    return es.eigenvectors();
}

// A random partition of {0..n-1} into at least `min_blocks` non-empty blocks.
inline std::vector<std::vector<int>> random_partition(int n, Rng& rng, int min_blocks = 1) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    const int lo = std::max(1, min_blocks);
    std::uniform_int_distribution<int> nb(lo, std::max(lo, n));
    const int k = std::min(n, nb(rng));
    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(k));
    for (int i = 0; i < n; ++i) blocks[static_cast<std::size_t>(i % k)].push_back(idx[static_cast<std::size_t>(i)]);
    return blocks;
}

inline Element block_projection(int n, const std::vector<int>& block, const Element& w) {
    Element d = zero(n);
    for (int i : block) d(i, i) = 1.0;
    return (w * d * w.adjoint() + (w * d * w.adjoint()).adjoint()) / 2.0;
}

// The associative subalgebra spanned by the projections of a random partition,
// conjugated by a random unitary.  Returns the algebra plus its partition
// projections (which are exactly its minimal idempotents).
struct PartitionAlgebra {
    JordanAlgebra algebra;
    std::vector<Element> projections;
    Element unitary;
    std::vector<std::vector<int>> blocks;
};

inline PartitionAlgebra random_partition_algebra(int n, Rng& rng, int min_blocks = 2) {
    const Element w = random_unitary(n, rng);
    const auto blocks = random_partition(n, rng, min_blocks);
    std::vector<Element> projs;
    projs.reserve(blocks.size());
    for (const auto& b : blocks) projs.push_back(block_projection(n, b, w));
    return PartitionAlgebra{make_algebra(n, projs), projs, w, blocks};
}

// Refines the partition of `coarse` (same unitary) so the result contains it.
inline PartitionAlgebra refine_partition_algebra(const PartitionAlgebra& coarse, Rng& rng) {
    const int n = coarse.algebra.ambient_dim();
    std::vector<std::vector<int>> fine;
    for (const auto& block : coarse.blocks) {
        std::vector<int> b = block;
        std::shuffle(b.begin(), b.end(), rng);
        std::uniform_int_distribution<int> split(1, static_cast<int>(b.size()));
        const int k = split(rng);
        std::vector<std::vector<int>> sub(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < b.size(); ++i) sub[i % static_cast<std::size_t>(k)].push_back(b[i]);
        for (auto& s : sub)
            if (!s.empty()) fine.push_back(std::move(s));
    }
    std::vector<Element> projs;
    projs.reserve(fine.size());
    for (const auto& b : fine) projs.push_back(block_projection(n, b, coarse.unitary));
    return PartitionAlgebra{make_algebra(n, projs), projs, coarse.unitary, fine};
}

// A random Hermitian that commutes with every projection of `pa` (diagonal in
// the same unitary frame), generically not in the span of the partition.
inline Element commuting_hermitian(const PartitionAlgebra& pa, Rng& rng) {
    const int n = pa.algebra.ambient_dim();
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Element d = zero(n);
    for (int i = 0; i < n; ++i) d(i, i) = u(rng);
    Element h = pa.unitary * d * pa.unitary.adjoint();
    return (h + Element(h.adjoint())) / 2.0;
}

// An element of the partition algebra with spectrum inside [lo, hi].
inline Element interval_element(const PartitionAlgebra& pa, Rng& rng, double lo = 0.0,
                                double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Element y = zero(pa.algebra.ambient_dim());
    for (const Element& p : pa.projections) y += u(rng) * p;
    return y;
}

// A faithful state whose density commutes with the partition projections.
inline State commuting_faithful_state(const PartitionAlgebra& pa, Rng& rng) {
    const int n = pa.algebra.ambient_dim();
    std::uniform_real_distribution<double> u(0.2, 1.0);
    Element d = zero(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double p = u(rng);
        d(i, i) = p;
        total += p;
    }
    d /= total;
    Element rho = pa.unitary * d * pa.unitary.adjoint();
    return State((rho + Element(rho.adjoint())) / 2.0);
}

// A random positive unital map on the full algebra: a convex combination of
// unitary conjugations plus an optional trace-to-identity (state preparation)
// component.  Positive and unital by construction.
inline LinearMap random_positive_unital_map(const JordanAlgebra& full, Rng& rng) {
    const int n = full.ambient_dim();
    std::uniform_int_distribution<int> nk(1, 3);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const int k = nk(rng);
    std::vector<Element> unitaries;
    std::vector<double> weights;
    for (int i = 0; i < k; ++i) {
        unitaries.push_back(random_unitary(n, rng));
        weights.push_back(u(rng));
    }
    const double prep_weight = (nk(rng) == 1) ? u(rng) : 0.0;
    const double total = std::accumulate(weights.begin(), weights.end(), prep_weight);
    const State rho0 = random_faithful_state(n, rng);

    RealMatrix m(full.dim(), full.dim());
    for (int c = 0; c < full.dim(); ++c) {
        const Element& b = full.basis(c);
        Element img = zero(n);
        for (int i = 0; i < k; ++i)
            img += (weights[static_cast<std::size_t>(i)] / total) * Element(unitaries[static_cast<std::size_t>(i)] * b *
                                                                            unitaries[static_cast<std::size_t>(i)].adjoint());
        if (prep_weight > 0.0) img += (prep_weight / total) * rho0.evaluate(b) * identity(n);
        m.col(c) = full.coords((img + Element(img.adjoint())) / 2.0);
    }
    return LinearMap(full, full, m);
}

// Brute-force subalgebra compatibility: checks mu({E,X,E}) = mu(E o X) for
// every one of the 2^k events formed from the minimal idempotents.
struct BruteForceCompat {
    bool compatible = true;
    double max_deviation = 0.0;
    int events = 0;
};

inline BruteForceCompat brute_force_compatibility(const State& mu, const std::vector<Element>& atoms,
                                                  const Element& x, double tol) {
    BruteForceCompat out;
    const int k = static_cast<int>(atoms.size());
    const int n = static_cast<int>(x.rows());
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        Element e = zero(n);
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) e += atoms[static_cast<std::size_t>(i)];
        const double lhs = mu.evaluate(triple_product(e, x, e));
        const double rhs = mu.evaluate(jordan_product(e, x));
        out.max_deviation = std::max(out.max_deviation, std::abs(lhs - rhs));
        ++out.events;
    }
    out.compatible = out.max_deviation <= tol;
    return out;
}

// Max violation of the conditional-expectation defining equation for a
// candidate Y over all events generated by the given minimal idempotents.
inline double defining_equation_residual(const State& mu, const std::vector<Element>& atoms,
                                         const Element& x, const Element& y) {
    double worst = 0.0;
    const int k = static_cast<int>(atoms.size());
    const int n = static_cast<int>(x.rows());
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        Element e = zero(n);
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) e += atoms[static_cast<std::size_t>(i)];
        const double lhs = mu.evaluate(triple_product(e, x, e));
        const double rhs = mu.evaluate(jordan_product(y, e));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace jqp::testing
