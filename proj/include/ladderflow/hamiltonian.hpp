#pragma once

#include <array>

#include "ladderflow/basis.hpp"
#include "ladderflow/sparse.hpp"

namespace ladderflow {

/// Exchange couplings of the two-leg ladder with equal diagonal bonds.
struct CouplingSet {
    double jt = 1.0; // rung
    double jl = 0.0; // leg
    double jc = 0.0; // diagonal (both diagonals)

    /// J_l / J_t; throws InvalidArgumentError when J_t == 0.
    double gamma_tl() const;
    /// J_c / J_t; throws InvalidArgumentError when J_t == 0.
    double gamma_c() const;
    /// Chain couplings after the rung rotation: J_1 multiplies S_i.S_j and
    /// J_2 multiplies R_i.R_j.
    double j1() const noexcept { return 0.5 * (jl + jc); }
    double j2() const noexcept { return 0.5 * (jl - jc); }

    /// Couplings divided by J_t, i.e. the operator multiplying the running
    /// rung coupling.
    CouplingSet reduced() const { return {1.0, gamma_tl(), gamma_c()}; }
};

/// Ladder Hamiltonian in the site basis with open boundaries:
///   J_t sum_i s_i1.s_i2 + J_l sum_i (s_i1.s_j1 + s_i2.s_j2)
///                       + J_c sum_i (s_i1.s_j2 + s_i2.s_j1),   j = i + 1.
SparseOperator build_h_su2(const SectorBasis& basis, const CouplingSet& couplings);

/// The same Hamiltonian divided by J_t, with the rung coupling set to one.
SparseOperator build_h1_su2(const SectorBasis& basis, double gamma_tl, double gamma_c);

/// Ladder Hamiltonian in the rung basis:
///   (J_t/4) sum_i (S_i^2 - R_i^2) + J_1 sum S_i.S_j + J_2 sum R_i.R_j.
/// Matrix elements come from the Hubbard-operator form of the SO(4)
/// generators (see RungOperators), not from transforming the SU(2) matrix.
SparseOperator build_h_so4(const SectorBasis& basis, const CouplingSet& couplings);

/// Dispatches on the basis scheme.
SparseOperator build_hamiltonian(const SectorBasis& basis, const CouplingSet& couplings);

/// Operator multiplying the rung coupling g = J_t, so that H = g * H1 with
/// the ratios gamma_tl and gamma_c held fixed. Dispatches on the scheme.
SparseOperator build_h1(const SectorBasis& basis, double gamma_tl, double gamma_c);

/// Single-rung SO(4) generators as 4x4 matrices indexed by RungState code,
/// built from X^{(SM)(S'M')} = |S M><S' M'|:
///   S+ = sqrt2 (X^{(11)(10)} + X^{(10)(1-1)}),  Sz = X^{(11)(11)} - X^{(1-1)(1-1)}
///   R+ = sqrt2 (X^{(11)(00)} - X^{(00)(1-1)}),  Rz = -(X^{(10)(00)} + X^{(00)(10)})
struct RungOperators {
    using Matrix = std::array<std::array<double, 4>, 4>;

    Matrix s_plus{}, s_minus{}, s_z{};
    Matrix r_plus{}, r_minus{}, r_z{};

    static const RungOperators& get();

    /// S.S and R.R on a single rung, i.e. S^2 and R^2.
    Matrix s_squared() const;
    Matrix r_squared() const;
};

} // namespace ladderflow
