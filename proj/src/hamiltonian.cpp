#include "ladderflow/hamiltonian.hpp"

#include <cmath>
#include <vector>

#include "ladderflow/errors.hpp"

namespace ladderflow {

namespace {

using Matrix4 = RungOperators::Matrix;

Matrix4 multiply(const Matrix4& a, const Matrix4& b) {
    Matrix4 c{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

Matrix4 transpose(const Matrix4& a) {
    Matrix4 t{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t[i][j] = a[j][i];
    return t;
}

// Dot product of two vector operators, A.B = Az Bz + (A+ B- + A- B+)/2,
// written as a 16x16 matrix on the rung pair: index 4*a + b means rung i in
// state a and rung j in state b.
using BondMatrix = std::array<std::array<double, 16>, 16>;

void add_dot(BondMatrix& out, double coupling, const Matrix4& plus, const Matrix4& minus,
             const Matrix4& z) {
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    const double v = z[a][c] * z[b][d] +
                                     0.5 * (plus[a][c] * minus[b][d] + minus[a][c] * plus[b][d]);
                    out[4 * a + b][4 * c + d] += coupling * v;
                }
}

struct SiteBond {
    int a;
    int b;
    double coupling;
};

void check_scheme(const SectorBasis& basis, Scheme expected) {
    if (basis.scheme() != expected)
        throw SchemeMismatchError("expected a " + std::string(to_string(expected)) +
                                  " basis, got " + std::string(to_string(basis.scheme())));
}

} // namespace

double CouplingSet::gamma_tl() const {
    if (jt == 0.0) throw InvalidArgumentError("gamma_tl undefined for J_t = 0");
    return jl / jt;
}

double CouplingSet::gamma_c() const {
    if (jt == 0.0) throw InvalidArgumentError("gamma_c undefined for J_t = 0");
    return jc / jt;
}

const RungOperators& RungOperators::get() {
    static const RungOperators ops = [] {
        constexpr int singlet = static_cast<int>(RungState::Singlet);
        constexpr int down = static_cast<int>(RungState::TripletDown);
        constexpr int zero = static_cast<int>(RungState::TripletZero);
        constexpr int up = static_cast<int>(RungState::TripletUp);
        const double sqrt2 = std::sqrt(2.0);

        RungOperators o;
        o.s_plus[up][zero] = sqrt2;
        o.s_plus[zero][down] = sqrt2;
        o.s_minus = transpose(o.s_plus);
        o.s_z[up][up] = 1.0;
        o.s_z[down][down] = -1.0;

        o.r_plus[up][singlet] = sqrt2;
        o.r_plus[singlet][down] = -sqrt2;
        o.r_minus = transpose(o.r_plus);
        o.r_z[zero][singlet] = -1.0;
        o.r_z[singlet][zero] = -1.0;
        return o;
    }();
    return ops;
}

RungOperators::Matrix RungOperators::s_squared() const {
    Matrix out = multiply(s_z, s_z);
    const Matrix pm = multiply(s_plus, s_minus);
    const Matrix mp = multiply(s_minus, s_plus);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i][j] += 0.5 * (pm[i][j] + mp[i][j]);
    return out;
}

RungOperators::Matrix RungOperators::r_squared() const {
    Matrix out = multiply(r_z, r_z);
    const Matrix pm = multiply(r_plus, r_minus);
    const Matrix mp = multiply(r_minus, r_plus);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i][j] += 0.5 * (pm[i][j] + mp[i][j]);
    return out;
}

SparseOperator build_h_su2(const SectorBasis& basis, const CouplingSet& couplings) {
    check_scheme(basis, Scheme::SU2);
    const int rungs = basis.rungs();

    std::vector<SiteBond> bonds;
    for (int i = 0; i < rungs; ++i) bonds.push_back({2 * i, 2 * i + 1, couplings.jt});
    for (int i = 0; i + 1 < rungs; ++i) {
        const int j = i + 1;
        bonds.push_back({2 * i, 2 * j, couplings.jl});
        bonds.push_back({2 * i + 1, 2 * j + 1, couplings.jl});
        bonds.push_back({2 * i, 2 * j + 1, couplings.jc});
        bonds.push_back({2 * i + 1, 2 * j, couplings.jc});
    }

    const Index dim = basis.dimension();
    std::vector<std::vector<Entry>> rows(dim);
    for (Index k = 0; k < dim; ++k) {
        const StateCode s = basis.state(k);
        double diag = 0.0;
        for (const auto& bond : bonds) {
            if (bond.coupling == 0.0) continue;
            const bool ua = (s >> bond.a) & 1U;
            const bool ub = (s >> bond.b) & 1U;
            if (ua == ub) {
                diag += 0.25 * bond.coupling;
            } else {
                diag -= 0.25 * bond.coupling;
                const StateCode flipped = s ^ (StateCode{1} << bond.a) ^ (StateCode{1} << bond.b);
                rows[k].push_back({basis.index_of(flipped), 0.5 * bond.coupling});
            }
        }
        rows[k].push_back({k, diag});
    }
    return {dim, std::move(rows)};
}

SparseOperator build_h1_su2(const SectorBasis& basis, double gamma_tl, double gamma_c) {
    return build_h_su2(basis, CouplingSet{1.0, gamma_tl, gamma_c});
}

SparseOperator build_h_so4(const SectorBasis& basis, const CouplingSet& couplings) {
    check_scheme(basis, Scheme::SO4);
    const auto& ops = RungOperators::get();
    const int rungs = basis.rungs();

    Matrix4 rung_term = ops.s_squared();
    const Matrix4 r2 = ops.r_squared();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rung_term[i][j] = 0.25 * couplings.jt * (rung_term[i][j] - r2[i][j]);

    BondMatrix bond{};
    add_dot(bond, couplings.j1(), ops.s_plus, ops.s_minus, ops.s_z);
    add_dot(bond, couplings.j2(), ops.r_plus, ops.r_minus, ops.r_z);

    const Index dim = basis.dimension();
    std::vector<std::vector<Entry>> rows(dim);
    for (Index k = 0; k < dim; ++k) {
        const StateCode s = basis.state(k);
        auto label = [s](int i) { return static_cast<int>((s >> (2 * i)) & 3U); };
        auto relabel = [](StateCode code, int i, int value) {
            return (code & ~(StateCode{3} << (2 * i))) | (static_cast<StateCode>(value) << (2 * i));
        };
        for (int i = 0; i < rungs; ++i) {
            const int a = label(i);
            for (int a2 = 0; a2 < 4; ++a2)
                if (rung_term[a2][a] != 0.0)
                    rows[k].push_back({basis.index_of(relabel(s, i, a2)), rung_term[a2][a]});
        }
        for (int i = 0; i + 1 < rungs; ++i) {
            const int col = 4 * label(i) + label(i + 1);
            for (int row = 0; row < 16; ++row) {
                const double v = bond[row][col];
                if (v == 0.0) continue;
                const StateCode target = relabel(relabel(s, i, row / 4), i + 1, row % 4);
                rows[k].push_back({basis.index_of(target), v});
            }
        }
    }
    return {dim, std::move(rows)};
}

SparseOperator build_hamiltonian(const SectorBasis& basis, const CouplingSet& couplings) {
    return basis.scheme() == Scheme::SU2 ? build_h_su2(basis, couplings)
                                         : build_h_so4(basis, couplings);
}

SparseOperator build_h1(const SectorBasis& basis, double gamma_tl, double gamma_c) {
    return build_hamiltonian(basis, CouplingSet{1.0, gamma_tl, gamma_c});
}

} // namespace ladderflow
