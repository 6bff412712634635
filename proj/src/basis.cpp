#include "ladderflow/basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "ladderflow/errors.hpp"

namespace ladderflow {

namespace {

void check_rungs(int rungs) {
    if (rungs < 1 || rungs > max_rungs)
        throw InvalidArgumentError("number of rungs must be in [1, " + std::to_string(max_rungs) +
                                   "], got " + std::to_string(rungs));
}

// Emits all SO(4) codes with the given total projection in increasing
// integer order: the most significant rung is chosen first.
void enumerate_rungs(int rung, int remaining, StateCode prefix, std::vector<StateCode>& out) {
    if (rung < 0) {
        if (remaining == 0) out.push_back(prefix);
        return;
    }
    if (std::abs(remaining) > rung + 1) return;
    for (StateCode label = 0; label < 4; ++label) {
        const int m = rung_projection(static_cast<RungState>(label));
        enumerate_rungs(rung - 1, remaining - m, prefix | (label << (2 * rung)), out);
    }
}

} // namespace

std::string_view to_string(Scheme scheme) { return scheme == Scheme::SU2 ? "su2" : "so4"; }

Scheme parse_scheme(std::string_view text) {
    if (text == "su2" || text == "SU2") return Scheme::SU2;
    if (text == "so4" || text == "SO4") return Scheme::SO4;
    throw InvalidArgumentError("unknown scheme '" + std::string(text) + "' (expected su2|so4)");
}

SpinConfig::SpinConfig(StateCode bits, int rungs) : bits_(bits), rungs_(rungs) {
    check_rungs(rungs);
    if (2 * rungs < 64 && (bits >> (2 * rungs)) != 0)
        throw InvalidArgumentError("spin pattern has bits beyond site 2L");
}

SpinConfig SpinConfig::from_occupancy(std::span<const int> up) {
    if (up.size() % 2 != 0) throw InvalidArgumentError("occupancy length must be 2L");
    StateCode bits = 0;
    for (std::size_t s = 0; s < up.size(); ++s) {
        if (up[s] != 0 && up[s] != 1) throw InvalidArgumentError("occupancy values must be 0 or 1");
        if (up[s]) bits |= StateCode{1} << s;
    }
    return {bits, static_cast<int>(up.size() / 2)};
}

int SpinConfig::magnetization() const noexcept { return std::popcount(bits_) - rungs_; }

std::string SpinConfig::to_string() const {
    std::string out;
    for (int i = 0; i < rungs_; ++i) {
        if (i) out += ' ';
        out += up(i, 0) ? 'u' : 'd';
        out += up(i, 1) ? 'u' : 'd';
    }
    return out;
}

int rung_spin(RungState s) noexcept { return s == RungState::Singlet ? 0 : 1; }

int rung_projection(RungState s) noexcept {
    switch (s) {
    case RungState::TripletDown: return -1;
    case RungState::TripletUp: return 1;
    default: return 0;
    }
}

RungConfig::RungConfig(StateCode code, int rungs) : code_(code), rungs_(rungs) {
    check_rungs(rungs);
    if (2 * rungs < 64 && (code >> (2 * rungs)) != 0)
        throw InvalidArgumentError("rung pattern has labels beyond rung L");
}

RungConfig RungConfig::from_rungs(std::span<const RungState> rungs) {
    StateCode code = 0;
    for (std::size_t i = 0; i < rungs.size(); ++i)
        code |= static_cast<StateCode>(rungs[i]) << (2 * i);
    return {code, static_cast<int>(rungs.size())};
}

int RungConfig::magnetization() const noexcept {
    int m = 0;
    for (int i = 0; i < rungs_; ++i) m += rung_projection(rung(i));
    return m;
}

std::string RungConfig::to_string() const {
    static constexpr const char* names[] = {"00", "1-", "10", "1+"};
    std::string out;
    for (int i = 0; i < rungs_; ++i) {
        if (i) out += ' ';
        out += names[static_cast<int>(rung(i))];
    }
    return out;
}

bool SectorBasis::contains(StateCode code) const noexcept {
    return std::binary_search(states_.begin(), states_.end(), code);
}

Index SectorBasis::index_of(StateCode code) const {
    const auto it = std::lower_bound(states_.begin(), states_.end(), code);
    if (it == states_.end() || *it != code)
        throw NotInSectorError("state " + std::to_string(code) + " is not in the " +
                               std::string(to_string(scheme_)) + " sector L=" +
                               std::to_string(rungs_) + " M=" + std::to_string(magnetization_));
    return static_cast<Index>(it - states_.begin());
}

Index SectorBasis::index_of(const SpinConfig& config) const {
    if (scheme_ != Scheme::SU2) throw SchemeMismatchError("SpinConfig lookup in an SO(4) basis");
    if (config.rungs() != rungs_) throw NotInSectorError("SpinConfig has a different rung count");
    return index_of(config.code());
}

Index SectorBasis::index_of(const RungConfig& config) const {
    if (scheme_ != Scheme::SO4) throw SchemeMismatchError("RungConfig lookup in an SU(2) basis");
    if (config.rungs() != rungs_) throw NotInSectorError("RungConfig has a different rung count");
    return index_of(config.code());
}

std::string SectorBasis::describe(Index k) const {
    if (scheme_ == Scheme::SU2) return SpinConfig(state(k), rungs_).to_string();
    return RungConfig(state(k), rungs_).to_string();
}

Index sector_dimension(int rungs, int magnetization) {
    check_rungs(rungs);
    if (std::abs(magnetization) > rungs) return 0;
    const int n = 2 * rungs;
    const int k = rungs + magnetization;
    Index c = 1;
    for (int i = 1; i <= k; ++i) c = c * static_cast<Index>(n - k + i) / static_cast<Index>(i);
    return c;
}

SectorBasis enumerate_basis(Scheme scheme, int rungs, int magnetization) {
    check_rungs(rungs);
    if (std::abs(magnetization) > rungs)
        throw EmptySectorError("no states with M_tot=" + std::to_string(magnetization) + " for L=" +
                               std::to_string(rungs));
    SectorBasis basis;
    basis.scheme_ = scheme;
    basis.rungs_ = rungs;
    basis.magnetization_ = magnetization;
    basis.states_.reserve(sector_dimension(rungs, magnetization));

    if (scheme == Scheme::SU2) {
        const int ups = rungs + magnetization;
        const int sites = 2 * rungs;
        if (ups == 0) {
            basis.states_.push_back(0);
        } else {
            // Gosper's hack: next larger integer with the same popcount.
            StateCode v = (StateCode{1} << ups) - 1;
            const StateCode limit = StateCode{1} << sites;
            while (v < limit) {
                basis.states_.push_back(v);
                const StateCode t = v | (v - 1);
                v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
            }
        }
    } else {
        enumerate_rungs(rungs - 1, magnetization, 0, basis.states_);
    }
    return basis;
}

SparseMatrix basis_transform_matrix(int rungs, int magnetization) {
    const SectorBasis su2 = enumerate_basis(Scheme::SU2, rungs, magnetization);
    const SectorBasis so4 = enumerate_basis(Scheme::SO4, rungs, magnetization);
    const double r = 1.0 / std::sqrt(2.0);

    // Site pattern (leg1, leg2) as two bits; 1 = up.
    struct Component {
        StateCode sites;
        double amplitude;
    };
    auto rung_expansion = [r](RungState s) -> std::vector<Component> {
        switch (s) {
        case RungState::TripletUp: return {{0b11, 1.0}};
        case RungState::TripletDown: return {{0b00, 1.0}};
        case RungState::TripletZero: return {{0b01, r}, {0b10, r}};
        case RungState::Singlet: return {{0b01, r}, {0b10, -r}};
        }
        return {};
    };

    std::vector<std::vector<Entry>> rows(so4.dimension());
    for (Index k = 0; k < so4.dimension(); ++k) {
        const RungConfig config(so4.state(k), rungs);
        std::vector<Component> expansion{{0, 1.0}};
        for (int i = 0; i < rungs; ++i) {
            std::vector<Component> next;
            for (const auto& partial : expansion)
                for (const auto& c : rung_expansion(config.rung(i)))
                    next.push_back({partial.sites | (c.sites << (2 * i)),
                                    partial.amplitude * c.amplitude});
            expansion = std::move(next);
        }
        for (const auto& c : expansion) rows[k].push_back({su2.index_of(c.sites), c.amplitude});
    }
    return {so4.dimension(), su2.dimension(), std::move(rows)};
}

} // namespace ladderflow
