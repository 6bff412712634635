#pragma once

#include <array>
#include <exception>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ladderflow/basis.hpp"
#include "ladderflow/eigensolver.hpp"
#include "ladderflow/errors.hpp"
#include "ladderflow/hamiltonian.hpp"
#include "ladderflow/sparse.hpp"

namespace ladderflow {

// Hilbert-space reduction with renormalization of the rung coupling.
//
// The Hamiltonian is H = g * H1 (no g-independent part). One step removes a
// single basis state |q> from the active space and looks for the coupling g'
// for which the projected ground vector b = P|psi> still solves the Feshbach
// problem at the target energy lambda:
//
//   H_eff(lambda; g') = g' P H1 P + g'^2 P H1 |q><q| H1 P / (lambda - g' <q|H1|q>)
//   <b| H_eff(lambda; g') |b> = lambda <b|b>.
//
// With A = <b|H1|b>, w = <b|H1|q>, n = <b|b> and d = <q|H1|q>, clearing the
// denominator gives
//
//   (w^2 - A d) g'^2 + lambda (A + n d) g' - lambda^2 n = 0.
//
// lambda is the ground energy of the full sector at the start of the flow and
// stays fixed, so the coupling moves only when truncation has shifted the
// re-diagonalized ground energy away from it.

struct QuadraticCoefficients {
    double a = 0.0; // g'^2
    double b = 0.0; // g'
    double c = 0.0; // constant
};

/// Scalar quantities entering the one-state Feshbach fold.
struct FeshbachTerms {
    double projected_energy = 0.0; // A
    double coupling = 0.0;         // w
    double norm = 0.0;             // n
    double eliminated_diagonal = 0.0; // d
    double target = 0.0;           // lambda

    QuadraticCoefficients coefficients() const;
    /// g A + g^2 w^2 / (lambda - g d) - lambda n; zero at an exact solution.
    double condition(double g) const;
};

/// `projected` holds the ground-vector components on `support` (the active
/// indices other than q, in the same order). Indices refer to rows of `h1`.
FeshbachTerms feshbach_terms(std::span<const double> projected, std::span<const Index> support,
                             const SparseOperator& h1, Index eliminated, double target);

QuadraticCoefficients feshbach_coefficients(std::span<const double> projected,
                                            std::span<const Index> support,
                                            const SparseOperator& h1, Index eliminated,
                                            double target);

struct RenormalizedCoupling {
    double g = 0.0;
    bool pathological = false;
    std::array<double, 2> roots{};
    int root_count = 0;
};

/// Picks the real root nearest to `g_prev`. A vanishing quadratic term falls
/// back to the linear solve; when both leading terms vanish or the roots are
/// complex the coupling is frozen at `g_prev` and the step is flagged.
/// `eps_coef` defaults to 1e-12 * max(|a|, |b|, |c|, 1).
RenormalizedCoupling solve_renormalized_g(const QuadraticCoefficients& q, double g_prev,
                                          std::optional<double> eps_coef = std::nullopt);

/// Indices sorted by epsilon_i = g * diag_i ascending, ties by index. The
/// next state to eliminate is the last entry.
std::vector<Index> order_states(std::span<const double> h1_diagonal, double g);
std::vector<Index> order_states(std::span<const double> h1_diagonal, double g,
                                std::span<const Index> active);

struct Elimination {
    Index index = 0;        // original basis index of q
    double amplitude = 0.0; // |a_1q| before elimination
    bool pathological = false;
    double g_before = 0.0;
    double g_after = 0.0;
    FeshbachTerms terms;
};

struct ReductionState {
    std::shared_ptr<const SparseOperator> h1;
    std::vector<Index> active;          // original indices, ascending
    double g = 0.0;
    double target_energy = 0.0;
    std::vector<EigenPair> eigenpairs;  // over `active` positions
    std::size_t step = 0;
    std::optional<Elimination> last;
};

/// Diagonalizes g * H1 on the full space; the ground energy becomes the
/// target of every later step.
ReductionState initial_state(std::shared_ptr<const SparseOperator> h1, double g, Index k_track,
                             const LanczosOptions& options = {});

ReductionState reduce_step(const ReductionState& state, Index k_track,
                           const LanczosOptions& options = {});

struct FlowRecord {
    Index dimension = 0;
    double g = 0.0;
    std::vector<double> energies; // per site, lowest k_track
    double entropy = 0.0;         // ground state, per site
    std::optional<Index> eliminated;
    double eliminated_amplitude = 0.0;
    bool pathological = false;
};

struct FlowTrajectory {
    Scheme scheme = Scheme::SU2;
    int rungs = 0;
    CouplingSet couplings;
    std::vector<FlowRecord> records;

    const FlowRecord& at_dimension(Index n) const;
    std::size_t pathological_steps() const;
};

/// Thrown when a flow stops early; the records computed so far are kept.
class FlowError : public Error {
public:
    FlowError(const std::string& what, FlowTrajectory partial, std::exception_ptr cause)
        : Error(what), partial_(std::move(partial)), cause_(std::move(cause)) {}

    const FlowTrajectory& partial() const noexcept { return partial_; }
    std::exception_ptr cause() const noexcept { return cause_; }

private:
    FlowTrajectory partial_;
    std::exception_ptr cause_;
};

FlowTrajectory run_flow(Scheme scheme, int rungs, const CouplingSet& couplings, Index n_min,
                        Index k_track = 4, const LanczosOptions& options = {},
                        int magnetization = 0);

struct FixedPointVerdict {
    bool fixed_point = false;
    // Largest contiguous record range with a flat coupling, as dimensions.
    Index n_hi = 0;
    Index n_lo = 0;
    // Length of the flat range that starts at the first record.
    std::size_t anchored_length = 0;
};

/// A range of records is flat when max |g - median(g)| / |median(g)| < rel_tol.
/// The flow has a fixed point when the flat range starting at the full
/// dimension spans at least `window` records.
FixedPointVerdict fixed_point_detector(const FlowTrajectory& trajectory, std::size_t window,
                                       double rel_tol);

} // namespace ladderflow
