#pragma once
// Classical black-hole state space: exact grid-unit no-hair vectors,
// irreducible mass, entropy models, and the linear daughter rule.
//
// All conserved quantities live on an integer grid so that conservation
// ledgers stay exact over arbitrarily long cascades: mass/energy as
// multiples of delta, charge as multiples of the charge quantum, angular
// momentum as multiples of 1/2.

#include <cstdint>
#include <functional>
#include <optional>

#include "horizonlab/common.hpp"

namespace horizonlab {

/// Physical scale of the integer grid.
struct UnitSystem {
    double delta = 0.1;           ///< mass/energy per grid unit (Planck units)
    double charge_quantum = 1.0;  ///< charge per grid unit
    friend bool operator==(const UnitSystem&, const UnitSystem&) = default;
};

/// Emission quantum x = (eps, q, j), in the mother's grid units. The j
/// component is the angular momentum along the mother's axis, in half units.
struct ParticleTriple {
    std::int64_t eps_units = 0;
    std::int64_t q_units = 0;
    std::int64_t j_half_units = 0;

    bool is_null() const { return eps_units == 0 && q_units == 0 && j_half_units == 0; }
    friend bool operator==(const ParticleTriple&, const ParticleTriple&) = default;
};

/// True when (M, Q, J) in real units satisfies M^2 >= Q^2 + (J/M)^2,
/// with the degenerate case M = 0 requiring Q = J = 0.
bool subextremal(double mass, double charge, double spin);

/// Irreducible mass I = 1/2 (2M^2 - Q^2 + 2M sqrt(M^2 - Q^2 - a^2))^(1/2),
/// a = J/M. Throws InvalidState on super-extremal input.
double irreducible_mass(double mass, double charge, double spin);

/// Black-hole label X = (M, Q, J) with orientation, on the integer grid.
/// Immutable after construction; construction enforces the invariants.
class NoHairVector {
  public:
    NoHairVector(std::int64_t m_units, std::int64_t q_units, std::int64_t j_half_units,
                 UnitSystem units, double theta = 0.0, double phi = 0.0);

    /// Validating factory used for channel pruning; no exception on failure.
    static std::optional<NoHairVector> try_make(std::int64_t m_units, std::int64_t q_units,
                                                std::int64_t j_half_units, UnitSystem units,
                                                double theta = 0.0, double phi = 0.0);

    static NoHairVector zero(UnitSystem units) { return NoHairVector(0, 0, 0, units); }

    std::int64_t m_units() const { return m_units_; }
    std::int64_t q_units() const { return q_units_; }
    std::int64_t j_half_units() const { return j_half_units_; }
    const UnitSystem& units() const { return units_; }
    double theta() const { return theta_; }
    double phi() const { return phi_; }

    double mass() const { return static_cast<double>(m_units_) * units_.delta; }
    double charge() const { return static_cast<double>(q_units_) * units_.charge_quantum; }
    double spin() const { return 0.5 * static_cast<double>(j_half_units_); }

    bool is_zero() const { return m_units_ == 0 && q_units_ == 0 && j_half_units_ == 0; }

    friend bool operator==(const NoHairVector& a, const NoHairVector& b)
    {
        return a.m_units_ == b.m_units_ && a.q_units_ == b.q_units_ &&
               a.j_half_units_ == b.j_half_units_ && a.units_ == b.units_;
    }

  private:
    NoHairVector() = default;

    std::int64_t m_units_ = 0;
    std::int64_t q_units_ = 0;
    std::int64_t j_half_units_ = 0;
    UnitSystem units_;
    double theta_ = 0.0;
    double phi_ = 0.0;
};

double irreducible_mass(const NoHairVector& state);

/// Daughter rule: X -> X - x along the same axis, exact in grid units.
/// Empty result marks a forbidden channel (invariant-violating daughter).
std::optional<NoHairVector> daughter(const NoHairVector& state, const ParticleTriple& x);

/// Entropy S(X) = u(I(X)). The built-in kinds use u(I) = 4 pi I^2; a custom
/// monotone u is shifted so that u(0) = 0 (an additive constant cancels in
/// every entropy difference).
struct EntropyModel {
    enum class Kind { Schwarzschild, KerrNewman, CustomU };

    Kind kind = Kind::Schwarzschild;

    static EntropyModel schwarzschild() { return EntropyModel{Kind::Schwarzschild, {}, 0.0}; }
    static EntropyModel kerr_newman() { return EntropyModel{Kind::KerrNewman, {}, 0.0}; }
    static EntropyModel custom(std::function<double(double)> u);

    double u(double irreducible) const;
    double entropy(const NoHairVector& state) const { return u(irreducible_mass(state)); }
    double entropy(double mass, double charge, double spin) const
    {
        return u(irreducible_mass(mass, charge, spin));
    }

    std::function<double(double)> custom_u;  ///< CustomU only
    double custom_u0 = 0.0;                  ///< gauge shift, u(0)
};

}  // namespace horizonlab
