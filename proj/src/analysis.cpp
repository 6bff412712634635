#include "ladderflow/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

#include "ladderflow/hamiltonian.hpp"

namespace ladderflow {

unsigned worker_threads() {
    if (const char* env = std::getenv("LADDERFLOW_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

std::vector<SweepRow> spectrum_sweep(Scheme scheme, int rungs, double jl, double jc,
                                     std::span<const double> jt_grid, Index k,
                                     const LanczosOptions& options, int magnetization,
                                     unsigned threads) {
    if (jt_grid.empty()) throw InvalidArgumentError("spectrum_sweep: empty grid");
    if (!std::is_sorted(jt_grid.begin(), jt_grid.end()))
        throw InvalidArgumentError("spectrum_sweep: grid must be sorted ascending");

    const SectorBasis basis = enumerate_basis(scheme, rungs, magnetization);
    if (k < 1 || k > basis.dimension())
        throw InvalidArgumentError("spectrum_sweep: k out of range for the sector");

    std::vector<SweepRow> rows(jt_grid.size());
    std::vector<std::exception_ptr> errors(jt_grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jt_grid.size(); i = next++) {
            try {
                const double jt = jt_grid[i];
                const auto pairs =
                    lanczos_lowest(build_hamiltonian(basis, {jt, jl, jc}), k, options);
                SweepRow row{jt, {}, entropy_per_site(pairs.front(), rungs)};
                for (const auto& p : pairs) row.energies.push_back(p.value / (2.0 * rungs));
                rows[i] = std::move(row);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const unsigned n_threads =
        std::min<unsigned>(threads ? threads : worker_threads(), static_cast<unsigned>(jt_grid.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            throw SweepError("sweep failed at J_t=" + std::to_string(jt_grid[i]) + ": " + e.what(),
                             jt_grid[i]);
        }
    }
    return rows;
}

std::string_view to_string(CrossingKind kind) {
    return kind == CrossingKind::Crossing ? "crossing" : "avoided";
}

namespace {

struct Sample {
    double jt;
    std::vector<EigenPair> pairs;
};

class LevelScanner {
public:
    LevelScanner(Scheme scheme, int rungs, double jl, double jc, LevelPair pair,
                 const ScanOptions& options)
        : basis_(enumerate_basis(scheme, rungs, options.magnetization)),
          rungs_(rungs),
          jl_(jl),
          jc_(jc),
          lower_(static_cast<Index>(pair.lower - 1)),
          upper_(static_cast<Index>(pair.upper - 1)),
          options_(options) {
        if (pair.lower < 1 || pair.upper <= pair.lower)
            throw InvalidArgumentError("crossing_scan: need 1 <= lower < upper");
        if (static_cast<Index>(pair.upper) > basis_.dimension())
            throw InvalidArgumentError("crossing_scan: level beyond sector dimension");
        levels_ = std::min<Index>(basis_.dimension(), upper_ + 3);
    }

    Sample sample(double jt) const {
        return {jt, lanczos_lowest(build_hamiltonian(basis_, {jt, jl_, jc_}), levels_, options_.lanczos)};
    }

    double gap(const Sample& s) const {
        return (s.pairs[upper_].value - s.pairs[lower_].value) / (2.0 * rungs_);
    }

    // Follows the lower and upper states of `ref` into `s` by maximal
    // overlap and returns E(upper state) - E(lower state) per site. Negative
    // once the two have swapped order.
    double signed_gap(const Sample& ref, const Sample& s) const {
        const auto& a = ref.pairs[lower_].vector;
        const auto& b = ref.pairs[upper_].vector;
        double best = -1.0;
        Index ia = lower_, ib = upper_;
        for (Index i = 0; i < s.pairs.size(); ++i) {
            const double oa = dot(a, s.pairs[i].vector);
            for (Index j = 0; j < s.pairs.size(); ++j) {
                if (j == i) continue;
                const double ob = dot(b, s.pairs[j].vector);
                const double score = oa * oa + ob * ob;
                if (score > best) {
                    best = score;
                    ia = i;
                    ib = j;
                }
            }
        }
        return (s.pairs[ib].value - s.pairs[ia].value) / (2.0 * rungs_);
    }

    const ScanOptions& options() const { return options_; }

private:
    SectorBasis basis_;
    int rungs_;
    double jl_;
    double jc_;
    Index lower_;
    Index upper_;
    Index levels_ = 0;
    ScanOptions options_;
};

} // namespace

CrossingReport crossing_scan(Scheme scheme, int rungs, double jl, double jc, LevelPair pair,
                             double j_lo, double j_hi, const ScanOptions& options) {
    if (!(j_lo < j_hi)) throw InvalidArgumentError("crossing_scan: empty bracket");
    if (options.grid_cells < 2) throw InvalidArgumentError("crossing_scan: need >= 2 grid cells");
    const LevelScanner scanner(scheme, rungs, jl, jc, pair, options);

    std::vector<Sample> grid;
    const int cells = options.grid_cells;
    for (int c = 0; c <= cells; ++c)
        grid.push_back(scanner.sample(j_lo + (j_hi - j_lo) * c / cells));

    CrossingReport report;
    report.pair = pair;
    report.min_gap = std::numeric_limits<double>::infinity();
    for (const auto& s : grid) report.min_gap = std::min(report.min_gap, scanner.gap(s));

    // A sample landing on the crossing itself: eigenvector tracking is
    // ambiguous there, so report it directly.
    constexpr double exact_gap = 1e-12;
    for (int c = 1; c < cells; ++c) {
        if (scanner.gap(grid[c]) < exact_gap) {
            report.jt_star = grid[c].jt;
            report.j_lo = grid[c - 1].jt;
            report.j_hi = grid[c + 1].jt;
            report.gap_at_star = scanner.gap(grid[c]);
            report.kind = CrossingKind::Crossing;
            return report;
        }
    }

    for (int c = 0; c < cells; ++c) {
        if (scanner.signed_gap(grid[c], grid[c + 1]) >= 0.0) continue;
        Sample left = grid[c];
        double right = grid[c + 1].jt;
        while (right - left.jt > options.tol) {
            Sample mid = scanner.sample(0.5 * (left.jt + right));
            const double g = scanner.gap(mid);
            report.min_gap = std::min(report.min_gap, g);
            if (g < exact_gap) {
                report.jt_star = mid.jt;
                report.j_lo = left.jt;
                report.j_hi = right;
                report.gap_at_star = g;
                report.kind = CrossingKind::Crossing;
                return report;
            }
            if (scanner.signed_gap(left, mid) < 0.0) right = mid.jt;
            else left = std::move(mid);
        }
        report.j_lo = left.jt;
        report.j_hi = right;
        report.jt_star = 0.5 * (left.jt + right);
        report.gap_at_star = scanner.gap(scanner.sample(report.jt_star));
        report.min_gap = std::min(report.min_gap, report.gap_at_star);
        report.kind = CrossingKind::Crossing;
        return report;
    }

    // No swap: look for an interior minimum of the adiabatic gap.
    int best = 0;
    for (int c = 1; c <= cells; ++c)
        if (scanner.gap(grid[c]) < scanner.gap(grid[best])) best = c;
    if (best == 0 || best == cells)
        throw NoSignChangeError("no level swap and no interior gap minimum for levels (" +
                                std::to_string(pair.lower) + ", " + std::to_string(pair.upper) +
                                ") in [" + std::to_string(j_lo) + ", " + std::to_string(j_hi) + "]");

    // Golden-section search on the gap.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = grid[best - 1].jt;
    double b = grid[best + 1].jt;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = scanner.gap(scanner.sample(x1));
    double f2 = scanner.gap(scanner.sample(x2));
    while (b - a > options.tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = scanner.gap(scanner.sample(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = scanner.gap(scanner.sample(x2));
        }
    }
    report.j_lo = a;
    report.j_hi = b;
    report.jt_star = 0.5 * (a + b);
    report.gap_at_star = scanner.gap(scanner.sample(report.jt_star));
    report.min_gap = std::min({report.min_gap, report.gap_at_star, f1, f2});
    report.kind = report.min_gap < options.degeneracy_tol ? CrossingKind::Crossing : CrossingKind::Avoided;
    return report;
}

bool degeneracy_check(std::span<const double> energies, std::span<const int> levels, double tol) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int level : levels) {
        if (level < 1 || static_cast<std::size_t>(level) > energies.size())
            throw InvalidArgumentError("degeneracy_check: level " + std::to_string(level) +
                                       " out of range");
        lo = std::min(lo, energies[static_cast<std::size_t>(level - 1)]);
        hi = std::max(hi, energies[static_cast<std::size_t>(level - 1)]);
    }
    return levels.empty() || hi - lo < tol || hi == lo;
}

double fluctuation_p(const FlowTrajectory& trajectory, int level, Index n, Index k) {
    if (k > n) throw InvalidArgumentError("fluctuation_p: k larger than N");
    const FlowRecord& at_n = trajectory.at_dimension(n);
    const FlowRecord& at_nk = trajectory.at_dimension(n - k);
    if (level < 1 || static_cast<std::size_t>(level) > at_n.energies.size())
        throw InvalidArgumentError("fluctuation_p: level " + std::to_string(level) + " not tracked");
    const double e = at_n.energies[static_cast<std::size_t>(level - 1)];
    if (e == 0.0) throw DivisionByZeroError("fluctuation_p: e_i(N) is zero");
    return std::abs((e - at_nk.energies[static_cast<std::size_t>(level - 1)]) / e) * 100.0;
}

} // namespace ladderflow
