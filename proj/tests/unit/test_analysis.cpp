#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "ladderflow/errors.hpp"
#include "ladderflow/analysis.hpp"
#include "ladderflow/hamiltonian.hpp"

using namespace ladderflow;

namespace {

FlowTrajectory two_records(double e_hi, double e_lo) {
    FlowTrajectory t;
    FlowRecord a;
    a.dimension = 20;
    a.energies = {e_hi};
    FlowRecord b;
    b.dimension = 19;
    b.energies = {e_lo};
    t.records = {a, b};
    return t;
}

} // namespace

TEST_CASE("entropy of simple amplitude patterns") {
    const std::vector<double> pure{0.0, 1.0, 0.0};
    CHECK(entropy_per_site(pure, 3) == 0.0);
    const std::vector<double> uniform(924, 1.0 / std::sqrt(924.0));
    CHECK(entropy_per_site(uniform, 6) == doctest::Approx(std::log(924.0) / 12.0).epsilon(1e-12));
    const double s = 1.0 / std::sqrt(2.0);
    const std::vector<double> two{s, -s};
    CHECK(entropy_per_site(two, 1) == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("ground-state entropy stays within its bounds") {
    const auto b = enumerate_basis(Scheme::SU2, 4, 0);
    for (double jt : {0.5, 2.0, 8.0}) {
        const auto p = lanczos_lowest(build_hamiltonian(b, {jt, 1.0, 0.7}), 1).front();
        const double s = entropy_per_site(p, 4);
        CHECK(s >= 0.0);
        CHECK(s <= std::log(static_cast<double>(b.dimension())) / 8.0 + 1e-12);
    }
}

TEST_CASE("fluctuation percentage") {
    CHECK(fluctuation_p(two_records(-2.0, -1.9), 1, 20, 1) == doctest::Approx(5.0));
    CHECK(fluctuation_p(two_records(-2.0, -2.0), 1, 20, 1) == 0.0);
    CHECK(fluctuation_p(two_records(-6.0, -5.7), 1, 20, 1) == doctest::Approx(5.0));
    CHECK_THROWS_AS(fluctuation_p(two_records(0.0, 1.0), 1, 20, 1), DivisionByZeroError);
    CHECK_THROWS_AS(fluctuation_p(two_records(-2.0, -1.9), 1, 20, 2), InvalidArgumentError);
    CHECK_THROWS_AS(fluctuation_p(two_records(-2.0, -1.9), 2, 20, 1), InvalidArgumentError);
}

TEST_CASE("degeneracy check") {
    const std::vector<double> e{-1.0, -0.5, -0.5, -0.5 + 1e-12};
    const std::vector<int> excited{2, 3, 4};
    const std::vector<int> lowest{1, 2};
    CHECK(degeneracy_check(e, excited, 1e-8));
    CHECK_FALSE(degeneracy_check(e, lowest, 1e-8));
    const std::vector<double> same{0.25, 0.25};
    CHECK(degeneracy_check(same, lowest, 0.0));
    const std::vector<int> bad{5};
    CHECK_THROWS_AS(degeneracy_check(e, bad, 1e-8), InvalidArgumentError);
}

TEST_CASE("decoupled sweep follows -3 J_t / 8") {
    const std::vector<double> grid{0.5, 1.0, 2.0, 4.0};
    const auto rows = spectrum_sweep(Scheme::SU2, 4, 0.0, 0.0, grid, 2, {}, 0, 2);
    REQUIRE(rows.size() == grid.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].jt == grid[i]);
        CHECK(rows[i].energies[0] == doctest::Approx(-0.375 * grid[i]).epsilon(1e-12));
    }
}

TEST_CASE("sweeps agree across schemes and thread counts") {
    const std::vector<double> grid{1.0, 2.0, 3.0};
    const auto a = spectrum_sweep(Scheme::SU2, 4, 1.2, 0.8, grid, 3, {}, 0, 1);
    const auto b = spectrum_sweep(Scheme::SO4, 4, 1.2, 0.8, grid, 3, {}, 0, 3);
    const auto c = spectrum_sweep(Scheme::SU2, 4, 1.2, 0.8, grid, 3, {}, 0, 3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(std::abs(a[i].energies[k] - b[i].energies[k]) < 1e-8);
            CHECK(a[i].energies[k] == c[i].energies[k]);
        }
    }
}

TEST_CASE("sweep rejects an unsorted grid") {
    const std::vector<double> grid{2.0, 1.0};
    CHECK_THROWS_AS(spectrum_sweep(Scheme::SU2, 2, 1.0, 1.0, grid, 1), InvalidArgumentError);
}

TEST_CASE("thread count from the environment") {
    ::setenv("LADDERFLOW_THREADS", "3", 1);
    CHECK(worker_threads() == 3);
    ::setenv("LADDERFLOW_THREADS", "zero", 1);
    CHECK(worker_threads() >= 1);
    ::unsetenv("LADDERFLOW_THREADS");
}

TEST_CASE("toy crossing: single rung with vanishing rung coupling") {
    // One rung: singlet at -3 J_t / 4, triplet at J_t / 4. They cross at
    // J_t = 0, which is the midpoint of a symmetric bracket.
    const auto r = crossing_scan(Scheme::SU2, 1, 0.0, 0.0, {1, 2}, -1.0, 1.0);
    CHECK(r.kind == CrossingKind::Crossing);
    CHECK(std::abs(r.jt_star) < 1e-9);
    CHECK(r.j_lo <= r.jt_star);
    CHECK(r.jt_star <= r.j_hi);
    CHECK(r.gap_at_star < 1e-8);
}

TEST_CASE("toy crossing inside a grid cell is bisected") {
    // Asymmetric bracket: 0 is not a grid point of the 16-cell grid.
    const auto r = crossing_scan(Scheme::SO4, 1, 0.0, 0.0, {1, 2}, -0.7, 1.3);
    CHECK(r.kind == CrossingKind::Crossing);
    CHECK(std::abs(r.jt_star) < 1e-9);
    CHECK(r.j_hi - r.j_lo <= 1e-9 + 1e-15);
}

TEST_CASE("bracket without crossing or interior minimum throws") {
    CHECK_THROWS_AS(crossing_scan(Scheme::SU2, 1, 0.0, 0.0, {1, 2}, 1.0, 2.0), NoSignChangeError);
}

TEST_CASE("invalid level pairs") {
    CHECK_THROWS_AS(crossing_scan(Scheme::SU2, 1, 0.0, 0.0, {2, 1}, -1.0, 1.0), InvalidArgumentError);
    CHECK_THROWS_AS(crossing_scan(Scheme::SU2, 1, 0.0, 0.0, {1, 3}, -1.0, 1.0), InvalidArgumentError);
}
