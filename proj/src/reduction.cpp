#include "ladderflow/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ladderflow/entropy.hpp"

namespace ladderflow {

QuadraticCoefficients FeshbachTerms::coefficients() const {
    const double A = projected_energy;
    const double w = coupling;
    const double n = norm;
    const double d = eliminated_diagonal;
    const double lambda = target;
    return {w * w - A * d, lambda * (A + n * d), -lambda * lambda * n};
}

double FeshbachTerms::condition(double g) const {
    const double fold = g * g * coupling * coupling / (target - g * eliminated_diagonal);
    return g * projected_energy + fold - target * norm;
}

FeshbachTerms feshbach_terms(std::span<const double> projected, std::span<const Index> support,
                             const SparseOperator& h1, Index eliminated, double target) {
    if (projected.size() != support.size())
        throw DimensionMismatchError("feshbach_terms: vector and support sizes differ");
    if (eliminated >= h1.dim()) throw DimensionMismatchError("feshbach_terms: q out of range");

    constexpr Index absent = static_cast<Index>(-1);
    std::vector<Index> position(h1.dim(), absent);
    for (Index k = 0; k < support.size(); ++k) position[support[k]] = k;
    if (position[eliminated] != absent)
        throw InvalidArgumentError("feshbach_terms: eliminated state is part of the support");

    FeshbachTerms t;
    t.target = target;
    t.eliminated_diagonal = h1.at(eliminated, eliminated);
    for (Index k = 0; k < support.size(); ++k) {
        const double bk = projected[k];
        t.norm += bk * bk;
        const auto cols = h1.row_cols(support[k]);
        const auto vals = h1.row_values(support[k]);
        double row_sum = 0.0;
        for (std::size_t e = 0; e < cols.size(); ++e) {
            if (cols[e] == eliminated) {
                t.coupling += bk * vals[e];
            } else if (position[cols[e]] != absent) {
                row_sum += vals[e] * projected[position[cols[e]]];
            }
        }
        t.projected_energy += bk * row_sum;
    }
    return t;
}

QuadraticCoefficients feshbach_coefficients(std::span<const double> projected,
                                            std::span<const Index> support,
                                            const SparseOperator& h1, Index eliminated,
                                            double target) {
    return feshbach_terms(projected, support, h1, eliminated, target).coefficients();
}

RenormalizedCoupling solve_renormalized_g(const QuadraticCoefficients& q, double g_prev,
                                          std::optional<double> eps_coef) {
    const double eps =
        eps_coef.value_or(1e-12 * std::max({std::abs(q.a), std::abs(q.b), std::abs(q.c), 1.0}));
    RenormalizedCoupling out;
    out.g = g_prev;

    if (std::abs(q.a) >= eps) {
        const double disc = q.b * q.b - 4.0 * q.a * q.c;
        if (disc < 0.0) {
            out.pathological = true;
            return out;
        }
        // Cancellation-free pair of roots.
        const double h = -0.5 * (q.b + std::copysign(std::sqrt(disc), q.b));
        const double r1 = h / q.a;
        const double r2 = h != 0.0 ? q.c / h : r1;
        out.roots = {r1, r2};
        out.root_count = 2;
        out.g = std::abs(r1 - g_prev) <= std::abs(r2 - g_prev) ? r1 : r2;
        return out;
    }
    if (std::abs(q.b) >= eps) {
        out.g = -q.c / q.b;
        out.roots = {out.g, out.g};
        out.root_count = 1;
        return out;
    }
    out.pathological = true;
    return out;
}

std::vector<Index> order_states(std::span<const double> h1_diagonal, double g,
                                std::span<const Index> active) {
    std::vector<Index> order(active.begin(), active.end());
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        const double ea = g * h1_diagonal[a];
        const double eb = g * h1_diagonal[b];
        return ea != eb ? ea < eb : a < b;
    });
    return order;
}

std::vector<Index> order_states(std::span<const double> h1_diagonal, double g) {
    std::vector<Index> all(h1_diagonal.size());
    std::iota(all.begin(), all.end(), Index{0});
    return order_states(h1_diagonal, g, all);
}

ReductionState initial_state(std::shared_ptr<const SparseOperator> h1, double g, Index k_track,
                             const LanczosOptions& options) {
    ReductionState state;
    state.active.resize(h1->dim());
    std::iota(state.active.begin(), state.active.end(), Index{0});
    state.g = g;
    state.eigenpairs = lanczos_lowest(h1->scaled(g), k_track, options);
    state.target_energy = state.eigenpairs.front().value;
    state.h1 = std::move(h1);
    return state;
}

ReductionState reduce_step(const ReductionState& state, Index k_track, const LanczosOptions& options) {
    const SparseOperator& h1 = *state.h1;
    const Index n = state.active.size();
    if (n <= k_track + 1)
        throw InvalidArgumentError("reduce_step: active dimension " + std::to_string(n) +
                                   " too small for k_track=" + std::to_string(k_track));
    if (state.eigenpairs.empty() || state.eigenpairs.front().vector.size() != n)
        throw DimensionMismatchError("reduce_step: eigenpairs do not match the active space");

    // Highest epsilon = g <q|H1|q>, ties resolved toward the larger index,
    // i.e. the last entry of order_states.
    Index pos = 0;
    for (Index k = 1; k < n; ++k) {
        const double ek = state.g * h1.at(state.active[k], state.active[k]);
        const double eb = state.g * h1.at(state.active[pos], state.active[pos]);
        if (ek > eb || (ek == eb && state.active[k] > state.active[pos])) pos = k;
    }
    const Index q = state.active[pos];
    const std::vector<double>& ground = state.eigenpairs.front().vector;

    std::vector<Index> support;
    std::vector<double> projected;
    support.reserve(n - 1);
    projected.reserve(n - 1);
    for (Index k = 0; k < n; ++k) {
        if (k == pos) continue;
        support.push_back(state.active[k]);
        projected.push_back(ground[k]);
    }

    const FeshbachTerms terms = feshbach_terms(projected, support, h1, q, state.target_energy);
    RenormalizedCoupling solved = solve_renormalized_g(terms.coefficients(), state.g);
    // Clearing the denominator admits g' = lambda / d as a spurious root (the
    // pole of the fold, exact when w = 0); take the other one instead.
    if (!solved.pathological && solved.root_count == 2) {
        auto at_pole = [&](double g) {
            return std::abs(terms.target - g * terms.eliminated_diagonal) <=
                   1e-9 * std::abs(terms.target);
        };
        if (at_pole(solved.g))
            solved.g = solved.g == solved.roots[0] ? solved.roots[1] : solved.roots[0];
    }

    ReductionState next;
    next.h1 = state.h1;
    next.active = std::move(support);
    next.g = solved.g;
    next.target_energy = state.target_energy;
    next.step = state.step + 1;
    next.eigenpairs = lanczos_lowest(h1.restricted(next.active).scaled(next.g), k_track, options);
    next.last = Elimination{q, std::abs(ground[pos]), solved.pathological, state.g, solved.g, terms};
    return next;
}

namespace {

FlowRecord make_record(const ReductionState& state, int rungs) {
    FlowRecord r;
    r.dimension = state.active.size();
    r.g = state.g;
    const double sites = 2.0 * rungs;
    for (const auto& p : state.eigenpairs) r.energies.push_back(p.value / sites);
    r.entropy = entropy_per_site(state.eigenpairs.front(), rungs);
    if (state.last) {
        r.eliminated = state.last->index;
        r.eliminated_amplitude = state.last->amplitude;
        r.pathological = state.last->pathological;
    }
    return r;
}

} // namespace

const FlowRecord& FlowTrajectory::at_dimension(Index n) const {
    // Records are in strictly decreasing dimension, one per step.
    if (records.empty() || n > records.front().dimension || n < records.back().dimension)
        throw InvalidArgumentError("no flow record at dimension " + std::to_string(n));
    const FlowRecord& r = records[records.front().dimension - n];
    if (r.dimension != n) throw InvalidArgumentError("flow records are not contiguous");
    return r;
}

std::size_t FlowTrajectory::pathological_steps() const {
    return static_cast<std::size_t>(std::count_if(
        records.begin(), records.end(), [](const FlowRecord& r) { return r.pathological; }));
}

FlowTrajectory run_flow(Scheme scheme, int rungs, const CouplingSet& couplings, Index n_min,
                        Index k_track, const LanczosOptions& options, int magnetization) {
    if (k_track < 1) throw InvalidArgumentError("run_flow: k_track must be at least 1");
    if (n_min < k_track + 2)
        throw InvalidArgumentError("run_flow: n_min must be at least k_track + 2");

    const SectorBasis basis = enumerate_basis(scheme, rungs, magnetization);
    if (basis.dimension() < k_track)
        throw InvalidArgumentError("run_flow: sector dimension smaller than k_track");
    auto h1 = std::make_shared<const SparseOperator>(
        build_h1(basis, couplings.gamma_tl(), couplings.gamma_c()));

    FlowTrajectory trajectory;
    trajectory.scheme = scheme;
    trajectory.rungs = rungs;
    trajectory.couplings = couplings;

    ReductionState state = initial_state(h1, couplings.jt, k_track, options);
    trajectory.records.push_back(make_record(state, rungs));
    while (state.active.size() > n_min) {
        try {
            state = reduce_step(state, k_track, options);
        } catch (const Error& e) {
            throw FlowError("flow stopped at dimension " + std::to_string(state.active.size()) +
                                ": " + e.what(),
                            std::move(trajectory), std::current_exception());
        }
        trajectory.records.push_back(make_record(state, rungs));
    }
    return trajectory;
}

FixedPointVerdict fixed_point_detector(const FlowTrajectory& trajectory, std::size_t window,
                                       double rel_tol) {
    const auto& recs = trajectory.records;
    if (recs.size() < window || window == 0)
        throw InvalidArgumentError("fixed_point_detector: trajectory shorter than window");

    FixedPointVerdict verdict;
    std::size_t best_start = 0;
    std::size_t best_len = 0;
    std::vector<double> sorted;
    for (std::size_t start = 0; start < recs.size(); ++start) {
        sorted.clear();
        double lo = recs[start].g;
        double hi = recs[start].g;
        for (std::size_t end = start; end < recs.size(); ++end) {
            const double g = recs[end].g;
            sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), g), g);
            lo = std::min(lo, g);
            hi = std::max(hi, g);
            const std::size_t m = sorted.size();
            const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
            const double spread = std::max(hi - median, median - lo);
            const bool flat = median != 0.0 ? spread / std::abs(median) < rel_tol : spread == 0.0;
            if (flat && m > best_len) {
                best_len = m;
                best_start = start;
            }
            if (flat && start == 0) verdict.anchored_length = m;
            // No extension can be flat once the spread exceeds the tolerance
            // relative to the largest magnitude in the range.
            if (0.5 * (hi - lo) >= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
        }
    }
    verdict.n_hi = recs[best_start].dimension;
    verdict.n_lo = recs[best_start + best_len - 1].dimension;
    verdict.fixed_point = verdict.anchored_length >= window;
    return verdict;
}

} // namespace ladderflow
