#include "jqp/markov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "jqp/errors.hpp"

namespace jqp {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) {
        throw ValidationError("TimeGrid: need at least two time points");
    }
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i] > points_[i - 1])) {
            throw ValidationError("TimeGrid: time points must be strictly increasing");
        }
    }
}

MarkovProcess::MarkovProcess(TimeGrid times, std::vector<Observable> observables, State state,
                             const Tolerances& tol)
    : times_(std::move(times)), observables_(std::move(observables)), state_(std::move(state)) {
    if (static_cast<int>(observables_.size()) != times_.size()) {
        throw ValidationError("MarkovProcess: need exactly one observable per time point");
    }
    const JordanAlgebra& target = observables_.front().target();
    for (const Observable& r : observables_) {
        if (!same_span(r.target(), target, tol)) {
            throw ValidationError("MarkovProcess: observables have different target algebras");
        }
    }
    if (state_.dim() != target.ambient_dim()) {
        throw DimensionMismatch("MarkovProcess: state dimension differs from the target algebra");
    }
    if (!is_faithful_on(state_, target, tol)) {
        throw ValidationError("MarkovProcess: the state is not faithful on the target algebra");
    }
}

JordanAlgebra history_algebra(const MarkovProcess& p, int i, const Tolerances& tol) {
    if (i < 0 || i >= p.times().size()) {
        throw ValidationError("history_algebra: time index out of range");
    }
    std::vector<Element> generators;
    for (int s = 0; s <= i; ++s) {
        const JordanAlgebra& image = p.observable(s).image_algebra();
        generators.insert(generators.end(), image.basis().begin(), image.basis().end());
    }
    return generate_subalgebra(p.target().ambient_dim(), generators, tol);
}

ConditionIReport check_condition_i(const MarkovProcess& p, int samples, std::uint64_t seed,
                                   const Tolerances& tol) {
    ConditionIReport out;
    const int t = p.times().size();
    auto rank = [](CompatVerdict v) {
        switch (v) {
            case CompatVerdict::fails: return 0;
            case CompatVerdict::holds_sampled: return 1;
            case CompatVerdict::holds: return 2;
        }
        return 0;
    };
    bool any_sampled = false;
    bool all_upgraded = true;
    for (int s = 0; s + 1 < t; ++s) {
        const JordanAlgebra history = history_algebra(p, s, tol);
        for (int sp = s + 1; sp < t; ++sp) {
            CompatibilityReport rep = is_compatible_pair(
                p.state(), history, p.observable(sp).image_algebra(), samples, seed, tol);
            if (rep.max_deviation > out.max_deviation) out.max_deviation = rep.max_deviation;
            if (rank(rep.verdict) < rank(out.aggregate)) out.aggregate = rep.verdict;
            if (rep.verdict == CompatVerdict::fails && !out.witness) {
                out.witness = rep.witness;
                out.witness_pair = {s, sp};
                out.method = rep.method;
            }
            if (rep.verdict == CompatVerdict::holds_sampled) {
                any_sampled = true;
                if (rep.method != CompatMethod::construct_and_verify) all_upgraded = false;
            }
            out.pairs.push_back(PairCompatibility{s, sp, std::move(rep)});
        }
    }
    if (out.aggregate != CompatVerdict::fails && any_sampled) {
        out.method = all_upgraded ? CompatMethod::construct_and_verify : CompatMethod::sampled;
    }
    return out;
}

MarkovPropertyReport check_markov_property(const MarkovProcess& p, int samples,
                                           std::uint64_t seed, const Tolerances& tol) {
    MarkovPropertyReport out;
    const int t = p.times().size();
    for (int s = 0; s + 1 < t; ++s) {
        const JordanAlgebra history = history_algebra(p, s, tol);
        const JordanAlgebra& present = p.observable(s).image_algebra();
        for (int sp = s + 1; sp < t; ++sp) {
            double pair_dev = 0.0;
            for (const Element& x : p.observable(sp).image_algebra().basis()) {
                const Element via_history =
                    conditional_expectation(p.state(), x, history, samples, seed, tol).value;
                const Element via_present =
                    conditional_expectation(p.state(), x, present, samples, seed, tol).value;
                pair_dev = std::max(pair_dev, (via_history - via_present).norm());
            }
            out.pairs.push_back(PairDeviation{s, sp, pair_dev});
            if (pair_dev > out.max_deviation) {
                out.max_deviation = pair_dev;
                out.worst_pair = {s, sp};
            }
        }
    }
    out.pass = out.max_deviation <= tol.solve;
    return out;
}

LinearMap extract_kernel(const MarkovProcess& p, int i, int j, int samples,
                         std::uint64_t seed, const Tolerances& tol) {
    const int t = p.times().size();
    if (i < 0 || j < 0 || i >= t || j >= t || i > j) {
        throw ValidationError("extract_kernel: need grid indices i <= j");
    }
    const JordanAlgebra& source_j = p.observable(j).source();
    if (i == j) return identity_map(source_j);

    const Observable& ri = p.observable(i);
    if (!ri.injective()) {
        throw ValidationError("extract_kernel: the earlier observable is not injective");
    }
    const JordanAlgebra& source_i = ri.source();
    RealMatrix m(source_i.dim(), source_j.dim());
    for (int c = 0; c < source_j.dim(); ++c) {
        const Element image = p.observable(j).apply(source_j.basis(c), tol);
        m.col(c) = source_i.coords(v_r_mu(ri, p.state(), image, samples, seed, tol));
    }
    LinearMap kernel(source_j, source_i, std::move(m));

    const Element one_image = kernel.apply(identity(source_j.ambient_dim()), tol);
    const double unital_dev = (one_image - identity(source_i.ambient_dim())).norm();
    if (unital_dev > tol.eq) {
        std::ostringstream os;
        os << "extract_kernel: kernel is not unital (deviation " << unital_dev << ")";
        throw SolveError(os.str());
    }
    const PositivityReport pos = is_positive_unital(kernel, std::min(samples, 10), seed, tol);
    if (!pos.holds) {
        std::ostringstream os;
        os << "extract_kernel: kernel failed the sampled positivity check (worst min "
              "eigenvalue " << pos.worst_min_eigenvalue << ")";
        throw SolveError(os.str());
    }
    return kernel;
}

const LinearMap& KernelFamily::at(int i, int j) const {
    const auto it = kernels.find({i, j});
    if (it == kernels.end()) {
        throw ValidationError("KernelFamily: no kernel for the requested time pair");
    }
    return it->second;
}

KernelFamily extract_kernels(const MarkovProcess& p, int samples, std::uint64_t seed,
                             const Tolerances& tol) {
    KernelFamily fam;
    fam.times = p.times().points();
    const int t = p.times().size();
    for (int i = 0; i < t; ++i) {
        for (int j = i; j < t; ++j) {
            fam.kernels.emplace(std::make_pair(i, j),
                                extract_kernel(p, i, j, samples, seed, tol));
        }
    }
    return fam;
}

ChapmanKolmogorovReport check_chapman_kolmogorov(const KernelFamily& k,
                                                 const Tolerances& tol) {
    ChapmanKolmogorovReport out;
    const int t = static_cast<int>(k.times.size());
    for (int i = 0; i < t; ++i) {
        for (int j = i + 1; j < t; ++j) {
            for (int l = j + 1; l < t; ++l) {
                const RealMatrix lhs = k.at(i, j).matrix() * k.at(j, l).matrix();
                const double dev = (lhs - k.at(i, l).matrix()).norm();
                if (dev > out.max_deviation) {
                    out.max_deviation = dev;
                    out.worst_triple = {i, j, l};
                }
            }
        }
    }
    out.pass = out.max_deviation <= tol.solve;
    return out;
}

DistributionTransferReport check_distribution_transfer(const MarkovProcess& p,
                                                       const KernelFamily& k,
                                                       const Tolerances& tol) {
    DistributionTransferReport out;
    const int t = p.times().size();
    std::vector<State> marginals;
    marginals.reserve(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i) {
        marginals.push_back(pushforward_distribution(p.state(), p.observable(i), tol));
    }
    for (int i = 0; i < t; ++i) {
        for (int j = i + 1; j < t; ++j) {
            const LinearMap& v = k.at(i, j);
            const JordanAlgebra& source_j = p.observable(j).source();
            double pair_dev = 0.0;
            for (int c = 0; c < source_j.dim(); ++c) {
                const Element y = source_j.basis(c);
                const double lhs = marginals[static_cast<std::size_t>(i)].evaluate(v.apply(y, tol));
                const double rhs = marginals[static_cast<std::size_t>(j)].evaluate(y);
                pair_dev = std::max(pair_dev, std::abs(lhs - rhs));
            }
            if (pair_dev > out.max_deviation) {
                out.max_deviation = pair_dev;
                out.worst_pair = {i, j};
            }
        }
    }
    out.pass = out.max_deviation <= tol.solve;
    return out;
}

StationarityReport check_stationarity(const MarkovProcess& p, const KernelFamily& k,
                                      const Tolerances& tol) {
    const int t = p.times().size();
    const JordanAlgebra& m0 = p.observable(0).source();
    for (int i = 1; i < t; ++i) {
        if (!same_span(p.observable(i).source(), m0, tol)) {
            throw ValidationError("check_stationarity: source algebras differ across times");
        }
    }
    // Express every kernel on the time-0 source basis so matrices are
    // directly comparable even if per-time bases differ.
    auto to_base0 = [&](const LinearMap& v) -> RealMatrix {
        const RealMatrix left = m0.coordinate_frame().transpose() *
                                v.target().coordinate_frame();
        const RealMatrix right = v.source().coordinate_frame().transpose() *
                                 m0.coordinate_frame();
        return left * v.matrix() * right;
    };

    StationarityReport out;
    for (int i = 0; i < t; ++i) {
        for (int j = i + 1; j < t; ++j) {
            const double gap = k.times[static_cast<std::size_t>(j)] -
                               k.times[static_cast<std::size_t>(i)];
            GapGroup* group = nullptr;
            for (GapGroup& g : out.groups) {
                if (std::abs(g.gap - gap) <= tol.group * std::max(1.0, std::abs(gap))) {
                    group = &g;
                    break;
                }
            }
            if (group == nullptr) {
                out.groups.push_back(GapGroup{gap, {}, 0.0});
                group = &out.groups.back();
            }
            group->pairs.emplace_back(i, j);
        }
    }
    std::sort(out.groups.begin(), out.groups.end(),
              [](const GapGroup& a, const GapGroup& b) { return a.gap < b.gap; });

    for (GapGroup& g : out.groups) {
        const RealMatrix rep = to_base0(k.at(g.pairs.front().first, g.pairs.front().second));
        for (const auto& [i, j] : g.pairs) {
            const double dev = (to_base0(k.at(i, j)) - rep).norm();
            g.max_deviation = std::max(g.max_deviation, dev);
        }
        out.max_deviation = std::max(out.max_deviation, g.max_deviation);
    }
    out.pass = out.max_deviation <= tol.solve;

    if (out.pass) {
        out.family.emplace_back(0.0, identity_map(m0));
        for (const GapGroup& g : out.groups) {
            const auto& [i, j] = g.pairs.front();
            out.family.emplace_back(g.gap, LinearMap(m0, m0, to_base0(k.at(i, j))));
        }
    }
    return out;
}

ReversibilityReport check_reversibility(const KernelFamily& k, int samples,
                                        std::uint64_t seed, const Tolerances& tol) {
    ReversibilityReport out;
    out.all_reversible = true;
    for (const auto& [pair, v] : k.kernels) {
        if (pair.first == pair.second) continue;
        KernelReversibility kr;
        kr.pair = pair;
        if (v.matrix().rows() != v.matrix().cols()) {
            kr.reason = "kernel is not square";
            out.all_reversible = false;
            out.kernels.push_back(std::move(kr));
            continue;
        }
        Eigen::JacobiSVD<RealMatrix> svd(v.matrix());
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        if (smin <= tol.rank || smax / smin >= 1.0 / tol.rank) {
            kr.reason = "kernel is singular or too ill-conditioned to invert";
            out.all_reversible = false;
            out.kernels.push_back(std::move(kr));
            continue;
        }
        const LinearMap inverse(v.target(), v.source(), v.matrix().inverse());
        const PositivityReport pos = is_positive_unital(inverse, samples, seed, tol);
        kr.inverse_worst_min_eigenvalue = pos.worst_min_eigenvalue;
        if (!pos.holds) {
            kr.reason = "inverse fails positivity on a sampled event";
            out.all_reversible = false;
            out.kernels.push_back(std::move(kr));
            continue;
        }
        kr.reversible = true;
        kr.multiplicative = is_multiplicative(v, tol);
        if (!kr.multiplicative) out.consistent = false;
        out.kernels.push_back(std::move(kr));
    }
    return out;
}

} // namespace jqp
