#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jqp/algebra.hpp"
#include "jqp/condexp.hpp"
#include "jqp/maps.hpp"
#include "jqp/state.hpp"
#include "jqp/tolerances.hpp"

namespace jqp {

// A strictly increasing finite list of time points (length >= 2).
class TimeGrid {
  public:
    explicit TimeGrid(std::vector<double> points);

    int size() const { return static_cast<int>(points_.size()); }
    double at(int i) const { return points_.at(static_cast<std::size_t>(i)); }
    const std::vector<double>& points() const { return points_; }

  private:
    std::vector<double> points_;
};

// One observable per time point into a common target algebra, plus a state on
// that algebra.  Construction validates that all targets span the same
// subspace and that the state is faithful on it.
class MarkovProcess {
  public:
    MarkovProcess(TimeGrid times, std::vector<Observable> observables, State state,
                  const Tolerances& tol = Tolerances::defaults());

    const TimeGrid& times() const { return times_; }
    const std::vector<Observable>& observables() const { return observables_; }
    const Observable& observable(int i) const {
        return observables_.at(static_cast<std::size_t>(i));
    }
    const State& state() const { return state_; }
    const JordanAlgebra& target() const { return observables_.front().target(); }

  private:
    TimeGrid times_;
    std::vector<Observable> observables_;
    State state_;
};

// The subalgebra generated by the images of all observables at times <= the
// i-th grid point.
JordanAlgebra history_algebra(const MarkovProcess& p, int i,
                              const Tolerances& tol = Tolerances::defaults());

// --- Compatibility condition (per ordered pair of times) ---------------------

struct PairCompatibility {
    int s_index = 0;
    int s_prime_index = 0;
    CompatibilityReport report;
};

struct ConditionIReport {
    std::vector<PairCompatibility> pairs;
    CompatVerdict aggregate = CompatVerdict::holds;  // weakest per-pair verdict
    CompatMethod method = CompatMethod::associative_exact;
    double max_deviation = 0.0;
    std::optional<CompatWitness> witness;
    std::pair<int, int> witness_pair{-1, -1};

    bool failed() const { return aggregate == CompatVerdict::fails; }
};

ConditionIReport check_condition_i(const MarkovProcess& p, int samples = 25,
                                   std::uint64_t seed = 42,
                                   const Tolerances& tol = Tolerances::defaults());

// --- Markov property ---------------------------------------------------------

struct PairDeviation {
    int s_index = 0;
    int s_prime_index = 0;
    double max_deviation = 0.0;
};

struct MarkovPropertyReport {
    std::vector<PairDeviation> pairs;
    double max_deviation = 0.0;
    std::pair<int, int> worst_pair{-1, -1};
    bool pass = false;  // max_deviation <= tol.solve
};

// Compares the conditional expectation of every basis element of the later
// image algebra onto the history algebra with the one onto the current image
// algebra (Frobenius norm of the difference).
MarkovPropertyReport check_markov_property(const MarkovProcess& p, int samples = 25,
                                           std::uint64_t seed = 42,
                                           const Tolerances& tol = Tolerances::defaults());

// --- Kernels -----------------------------------------------------------------

// The transition kernel for grid indices i <= j: the map M_j -> M_i sending Y
// to the pullback through R_i of the conditional expectation of R_j(Y); the
// identity when i = j.  Unitality is asserted; positivity is checked by
// sampling (SolveError on a violation).
LinearMap extract_kernel(const MarkovProcess& p, int i, int j, int samples = 25,
                         std::uint64_t seed = 42,
                         const Tolerances& tol = Tolerances::defaults());

struct KernelFamily {
    std::vector<double> times;
    std::map<std::pair<int, int>, LinearMap> kernels;  // all pairs i <= j

    const LinearMap& at(int i, int j) const;
};

KernelFamily extract_kernels(const MarkovProcess& p, int samples = 25,
                             std::uint64_t seed = 42,
                             const Tolerances& tol = Tolerances::defaults());

// --- Kernel-family checks ----------------------------------------------------

struct ChapmanKolmogorovReport {
    double max_deviation = 0.0;
    std::array<int, 3> worst_triple{-1, -1, -1};
    bool pass = false;  // max_deviation <= tol.solve
};

ChapmanKolmogorovReport check_chapman_kolmogorov(
    const KernelFamily& k, const Tolerances& tol = Tolerances::defaults());

struct DistributionTransferReport {
    double max_deviation = 0.0;
    std::pair<int, int> worst_pair{-1, -1};
    bool pass = false;  // max_deviation <= tol.solve
};

DistributionTransferReport check_distribution_transfer(
    const MarkovProcess& p, const KernelFamily& k,
    const Tolerances& tol = Tolerances::defaults());

struct GapGroup {
    double gap = 0.0;
    std::vector<std::pair<int, int>> pairs;
    double max_deviation = 0.0;  // across kernels sharing this gap
};

struct StationarityReport {
    bool pass = false;
    double max_deviation = 0.0;
    std::vector<GapGroup> groups;
    // On pass: one representative kernel per distinct positive gap, expressed
    // on the time-0 source algebra (the one-parameter family), including the
    // identity at gap 0.
    std::vector<std::pair<double, LinearMap>> family;
};

StationarityReport check_stationarity(const MarkovProcess& p, const KernelFamily& k,
                                      const Tolerances& tol = Tolerances::defaults());

struct KernelReversibility {
    std::pair<int, int> pair{-1, -1};
    bool reversible = false;
    bool multiplicative = false;      // meaningful when reversible
    double inverse_worst_min_eigenvalue = 0.0;
    std::string reason;               // why reversibility was denied
};

struct ReversibilityReport {
    std::vector<KernelReversibility> kernels;
    bool all_reversible = false;
    // Every reversible kernel must also be multiplicative (positive inverse
    // makes it an order isomorphism); false indicates an internal
    // inconsistency, not a property of the process.
    bool consistent = true;
};

ReversibilityReport check_reversibility(const KernelFamily& k, int samples = 25,
                                        std::uint64_t seed = 42,
                                        const Tolerances& tol = Tolerances::defaults());

} // namespace jqp
