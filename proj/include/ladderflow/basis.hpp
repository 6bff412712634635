#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ladderflow/sparse.hpp"

namespace ladderflow {

/// Symmetry scheme of the product basis.
///
/// SU2 is the site basis |m_1 ... m_2L>; SO4 couples the two spins of each
/// rung to |S M> first, which turns the ladder into a chain of four-state
/// sites.
enum class Scheme { SU2, SO4 };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);

/// Packed basis state. Both schemes use two bits per rung, rung i at bits
/// (2i, 2i+1), so the canonical order of a sector is plain integer order.
using StateCode = std::uint64_t;

inline constexpr int max_rungs = 16;

/// Single SU(2) product state. Site (rung i, leg l) lives at bit 2i + l and a
/// set bit means m = +1/2.
class SpinConfig {
public:
    SpinConfig(StateCode bits, int rungs);
    /// Occupancies in rung-major site order (i_1, i_2, (i+1)_1, ...).
    static SpinConfig from_occupancy(std::span<const int> up);

    StateCode code() const noexcept { return bits_; }
    int rungs() const noexcept { return rungs_; }
    bool up(int rung, int leg) const noexcept { return (bits_ >> (2 * rung + leg)) & 1U; }
    /// Sum of m_i; integer because there is an even number of spins.
    int magnetization() const noexcept;
    std::string to_string() const;

    friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

private:
    StateCode bits_;
    int rungs_;
};

/// Rung multiplet |S M>. The numeric values are the two-bit codes used in
/// StateCode, ordered so that integer order is the canonical order.
enum class RungState : std::uint8_t {
    Singlet = 0,     // |0 0>
    TripletDown = 1, // |1 -1>
    TripletZero = 2, // |1 0>
    TripletUp = 3,   // |1 +1>
};

int rung_spin(RungState s) noexcept;
int rung_projection(RungState s) noexcept;

/// Single SO(4) product state, one RungState per rung.
class RungConfig {
public:
    RungConfig(StateCode code, int rungs);
    static RungConfig from_rungs(std::span<const RungState> rungs);

    StateCode code() const noexcept { return code_; }
    int rungs() const noexcept { return rungs_; }
    RungState rung(int i) const noexcept { return static_cast<RungState>((code_ >> (2 * i)) & 3U); }
    int magnetization() const noexcept;
    std::string to_string() const;

    friend bool operator==(const RungConfig&, const RungConfig&) = default;

private:
    StateCode code_;
    int rungs_;
};

/// Fixed-magnetization sector of a ladder with a given number of rungs.
/// Immutable once built.
class SectorBasis {
public:
    Scheme scheme() const noexcept { return scheme_; }
    int rungs() const noexcept { return rungs_; }
    int magnetization() const noexcept { return magnetization_; }
    Index dimension() const noexcept { return states_.size(); }

    std::span<const StateCode> states() const noexcept { return states_; }
    StateCode state(Index k) const { return states_.at(k); }

    bool contains(StateCode code) const noexcept;
    /// Position of `code` in the canonical order; throws NotInSectorError.
    Index index_of(StateCode code) const;
    Index index_of(const SpinConfig& config) const;
    Index index_of(const RungConfig& config) const;

    std::string describe(Index k) const;

private:
    friend SectorBasis enumerate_basis(Scheme, int, int);

    Scheme scheme_ = Scheme::SU2;
    int rungs_ = 0;
    int magnetization_ = 0;
    std::vector<StateCode> states_;
};

SectorBasis enumerate_basis(Scheme scheme, int rungs, int magnetization = 0);

/// Combinatorial size of the sector, C(2L, L + M).
Index sector_dimension(int rungs, int magnetization);

/// Orthogonal map from SU(2) sector coordinates to SO(4) sector coordinates
/// (rows index the SO(4) basis, columns the SU(2) basis), built from the rung
/// Clebsch-Gordan coefficients
///   |1 1> = |up up>, |1 -1> = |dn dn>,
///   |1 0> = (|up dn> + |dn up>)/sqrt2, |0 0> = (|up dn> - |dn up>)/sqrt2
/// with the first spin on leg 1.
SparseMatrix basis_transform_matrix(int rungs, int magnetization = 0);

} // namespace ladderflow
