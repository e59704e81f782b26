#pragma once

namespace jqp {

// Named numeric tolerances used throughout the library.  Each field can be
// overridden independently (e.g. from a scenario file); the defaults below
// are the library-wide reference values.
struct Tolerances {
    double eq = 1e-9;     // equality of scalars / entrywise matrix comparisons
    double psd = 1e-9;    // positive-semidefiniteness slack (min eigenvalue >= -psd)
    double rank = 1e-10;  // singular-value / residual cutoff for rank decisions
    double group = 1e-8;  // eigenvalue grouping width in spectral decompositions
    double solve = 1e-8;  // residual bound for linear-solve based constructions

    static const Tolerances& defaults() {
        static const Tolerances t{};
        return t;
    }
};

} // namespace jqp
