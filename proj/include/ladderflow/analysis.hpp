#pragma once

#include <span>
#include <string>
#include <vector>

#include "ladderflow/basis.hpp"
#include "ladderflow/eigensolver.hpp"
#include "ladderflow/entropy.hpp"
#include "ladderflow/errors.hpp"
#include "ladderflow/reduction.hpp"

namespace ladderflow {

// Level numbers in this header are 1-based (level 1 is the ground state),
// matching the e1..e4 naming used in outputs.

/// Worker count for parallel sweeps: LADDERFLOW_THREADS when set to a
/// positive integer, otherwise the hardware concurrency.
unsigned worker_threads();

struct SweepRow {
    double jt = 0.0;
    std::vector<double> energies; // per site, ascending
    double entropy = 0.0;         // ground state, per site
};

class SweepError : public Error {
public:
    SweepError(const std::string& what, double jt) : Error(what), jt_(jt) {}
    double jt() const noexcept { return jt_; }

private:
    double jt_;
};

/// Lowest `k` energies per site of the full ladder Hamiltonian at each rung
/// coupling of a sorted grid. Grid points run concurrently; rows come back
/// in grid order.
std::vector<SweepRow> spectrum_sweep(Scheme scheme, int rungs, double jl, double jc,
                                     std::span<const double> jt_grid, Index k,
                                     const LanczosOptions& options = {}, int magnetization = 0,
                                     unsigned threads = 0);

struct LevelPair {
    int lower = 1;
    int upper = 2;
};

enum class CrossingKind { Crossing, Avoided };

std::string_view to_string(CrossingKind kind);

struct CrossingReport {
    LevelPair pair;
    double jt_star = 0.0;
    double j_lo = 0.0;
    double j_hi = 0.0;
    double gap_at_star = 0.0; // per site, e_upper - e_lower
    CrossingKind kind = CrossingKind::Crossing;
    double min_gap = 0.0;     // per site, smallest gap seen
};

struct ScanOptions {
    double tol = 1e-9;              // final bracket width in J_t
    int grid_cells = 16;
    double degeneracy_tol = 1e-8;   // per site
    LanczosOptions lanczos;
    int magnetization = 0;
};

/// Locates where levels `pair.lower` and `pair.upper` meet inside
/// [j_lo, j_hi].
///
/// The bracket is first sampled on a coarse grid. Between neighbouring
/// samples the two states are followed by eigenvector overlap; when they
/// swap order the signed gap has changed sign and the cell is bisected down
/// to `tol` (kind Crossing). Without a swap the adiabatic gap is minimized
/// around the smallest sampled value (kind Avoided, or Crossing when the
/// minimum is below the degeneracy tolerance). A minimum sitting on the
/// bracket edge throws NoSignChangeError.
CrossingReport crossing_scan(Scheme scheme, int rungs, double jl, double jc, LevelPair pair,
                             double j_lo, double j_hi, const ScanOptions& options = {});

/// True iff the listed levels all lie within `tol` of each other.
bool degeneracy_check(std::span<const double> energies, std::span<const int> levels, double tol);

/// Percentage change |(e_i(N) - e_i(N-k)) / e_i(N)| * 100 of level `level`
/// between the records at dimensions N and N - k.
double fluctuation_p(const FlowTrajectory& trajectory, int level, Index n, Index k);

} // namespace ladderflow
