#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ladderflow/errors.hpp"
#include "ladderflow/basis.hpp"

using namespace ladderflow;

namespace {

// C(n, k) by the multiplicative formula.
Index choose(int n, int k) {
    Index r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<Index>(n - k + i) / static_cast<Index>(i);
    return r;
}

} // namespace

TEST_CASE("L=6 zero-magnetization sector has 924 states in both schemes") {
    CHECK(enumerate_basis(Scheme::SU2, 6, 0).dimension() == 924);
    CHECK(enumerate_basis(Scheme::SO4, 6, 0).dimension() == 924);
    CHECK(sector_dimension(6, 0) == 924);
}

TEST_CASE("L=1 SU(2) sector is the two antiparallel states") {
    const auto b = enumerate_basis(Scheme::SU2, 1, 0);
    REQUIRE(b.dimension() == 2);
    CHECK(SpinConfig(b.state(0), 1).to_string() == "ud");
    CHECK(SpinConfig(b.state(1), 1).to_string() == "du");
}

TEST_CASE("L=2 SO(4) sector") {
    const auto b = enumerate_basis(Scheme::SO4, 2, 0);
    REQUIRE(b.dimension() == 6);
    using R = RungState;
    const std::vector<std::array<R, 2>> expected{
        {R::Singlet, R::Singlet},         {R::Singlet, R::TripletZero},
        {R::TripletZero, R::Singlet},     {R::TripletZero, R::TripletZero},
        {R::TripletUp, R::TripletDown},   {R::TripletDown, R::TripletUp},
    };
    for (const auto& e : expected) CHECK(b.contains(RungConfig::from_rungs(e).code()));
}

TEST_CASE("dimensions agree across schemes and with the binomial count") {
    for (int L = 1; L <= 7; ++L) {
        for (int m = -L; m <= L; ++m) {
            const auto su2 = enumerate_basis(Scheme::SU2, L, m);
            const auto so4 = enumerate_basis(Scheme::SO4, L, m);
            CHECK(su2.dimension() == choose(2 * L, L + m));
            CHECK(so4.dimension() == su2.dimension());
        }
    }
}

TEST_CASE("states are sorted and carry the sector magnetization") {
    for (Scheme s : {Scheme::SU2, Scheme::SO4}) {
        const auto b = enumerate_basis(s, 5, 1);
        CHECK(std::is_sorted(b.states().begin(), b.states().end()));
        CHECK(std::adjacent_find(b.states().begin(), b.states().end()) == b.states().end());
        for (StateCode c : b.states()) {
            const int m = s == Scheme::SU2 ? SpinConfig(c, 5).magnetization()
                                           : RungConfig(c, 5).magnetization();
            CHECK(m == 1);
        }
    }
}

TEST_CASE("index_of inverts the state list") {
    const auto b = enumerate_basis(Scheme::SU2, 6, 0);
    CHECK(b.index_of(b.state(0)) == 0);
    CHECK(b.index_of(SpinConfig(b.state(923), 6)) == 923);
    CHECK(b.index_of(b.state(17)) == 17);
    for (Index k = 0; k < b.dimension(); ++k) CHECK(b.index_of(b.state(k)) == k);
}

TEST_CASE("index_of rejects foreign states") {
    const auto su2 = enumerate_basis(Scheme::SU2, 3, 0);
    CHECK_THROWS_AS(su2.index_of(StateCode{0}), NotInSectorError);
    const std::array<RungState, 3> rungs{RungState::Singlet, RungState::Singlet, RungState::Singlet};
    CHECK_THROWS_AS(su2.index_of(RungConfig::from_rungs(rungs)), SchemeMismatchError);
}

TEST_CASE("invalid sectors") {
    CHECK_THROWS_AS(enumerate_basis(Scheme::SU2, 2, 3), EmptySectorError);
    CHECK_THROWS_AS(enumerate_basis(Scheme::SO4, 0, 0), InvalidArgumentError);
}

TEST_CASE("enumeration is reproducible") {
    const auto a = enumerate_basis(Scheme::SO4, 6, 0);
    const auto b = enumerate_basis(Scheme::SO4, 6, 0);
    CHECK(std::equal(a.states().begin(), a.states().end(), b.states().begin(), b.states().end()));
}

TEST_CASE("single-rung transform is the Clebsch-Gordan matrix") {
    const auto u = basis_transform_matrix(1, 0);
    REQUIRE(u.rows() == 2);
    REQUIRE(u.cols() == 2);
    const double r = 1.0 / std::sqrt(2.0);
    // Rows: |0 0>, |1 0>. Columns: ud, du.
    CHECK(u.at(0, 0) == doctest::Approx(r));
    CHECK(u.at(0, 1) == doctest::Approx(-r));
    CHECK(u.at(1, 0) == doctest::Approx(r));
    CHECK(u.at(1, 1) == doctest::Approx(r));
}

TEST_CASE("transform is orthogonal") {
    for (int L = 1; L <= 4; ++L) {
        for (int m = 0; m <= L; ++m) {
            const auto u = basis_transform_matrix(L, m);
            const Index n = u.cols();
            double worst = 0.0;
            std::vector<double> e(n), col(n), back(n);
            for (Index j = 0; j < n; ++j) {
                std::fill(e.begin(), e.end(), 0.0);
                e[j] = 1.0;
                u.apply(e, col);
                u.apply_transpose(col, back);
                for (Index i = 0; i < n; ++i)
                    worst = std::max(worst, std::abs(back[i] - (i == j ? 1.0 : 0.0)));
            }
            CHECK(worst < 1e-12);
        }
    }
}
