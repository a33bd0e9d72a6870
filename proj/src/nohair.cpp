#include "horizonlab/nohair.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace horizonlab {

namespace {

std::string describe(double mass, double charge, double spin)
{
    return "(M=" + std::to_string(mass) + ", Q=" + std::to_string(charge) +
           ", J=" + std::to_string(spin) + ")";
}

bool valid_units(std::int64_t m_units, std::int64_t q_units, std::int64_t j_half_units,
                 const UnitSystem& units)
{
    if (m_units < 0 || j_half_units < 0)
        return false;
    if (units.delta <= 0.0 || units.charge_quantum <= 0.0)
        return false;
    const double mass = static_cast<double>(m_units) * units.delta;
    const double charge = static_cast<double>(q_units) * units.charge_quantum;
    const double spin = 0.5 * static_cast<double>(j_half_units);
    if (m_units == 0)
        return q_units == 0 && j_half_units == 0;
    return subextremal(mass, charge, spin);
}

}  // namespace

bool subextremal(double mass, double charge, double spin)
{
    if (mass < 0.0 || spin < 0.0)
        return false;
    if (mass == 0.0)
        return charge == 0.0 && spin == 0.0;
    const double a = spin / mass;
    return mass * mass >= charge * charge + a * a;
}

double irreducible_mass(double mass, double charge, double spin)
{
    if (!subextremal(mass, charge, spin))
        throw InvalidState("super-extremal state " + describe(mass, charge, spin));
    if (mass == 0.0)
        return 0.0;
    const double a = spin / mass;
    // Same expression order as the subextremality check, so disc >= 0 is
    // guaranteed in floating point as well.
    const double disc = mass * mass - (charge * charge + a * a);
    return 0.5 * std::sqrt(2.0 * mass * mass - charge * charge + 2.0 * mass * std::sqrt(disc));
}

double irreducible_mass(const NoHairVector& state)
{
    return irreducible_mass(state.mass(), state.charge(), state.spin());
}

NoHairVector::NoHairVector(std::int64_t m_units, std::int64_t q_units, std::int64_t j_half_units,
                           UnitSystem units, double theta, double phi)
{
    if (!valid_units(m_units, q_units, j_half_units, units))
        throw InvalidState("invalid no-hair vector " +
                           describe(static_cast<double>(m_units) * units.delta,
                                    static_cast<double>(q_units) * units.charge_quantum,
                                    0.5 * static_cast<double>(j_half_units)));
    m_units_ = m_units;
    q_units_ = q_units;
    j_half_units_ = j_half_units;
    units_ = units;
    theta_ = theta;
    phi_ = phi;
}

std::optional<NoHairVector> NoHairVector::try_make(std::int64_t m_units, std::int64_t q_units,
                                                   std::int64_t j_half_units, UnitSystem units,
                                                   double theta, double phi)
{
    if (!valid_units(m_units, q_units, j_half_units, units))
        return std::nullopt;
    NoHairVector out;
    out.m_units_ = m_units;
    out.q_units_ = q_units;
    out.j_half_units_ = j_half_units;
    out.units_ = units;
    out.theta_ = theta;
    out.phi_ = phi;
    return out;
}

std::optional<NoHairVector> daughter(const NoHairVector& state, const ParticleTriple& x)
{
    return NoHairVector::try_make(state.m_units() - x.eps_units, state.q_units() - x.q_units,
                                  state.j_half_units() - x.j_half_units, state.units(),
                                  state.theta(), state.phi());
}

EntropyModel EntropyModel::custom(std::function<double(double)> u)
{
    EntropyModel model;
    model.kind = Kind::CustomU;
    model.custom_u0 = u(0.0);
    model.custom_u = std::move(u);
    return model;
}

double EntropyModel::u(double irreducible) const
{
    if (kind == Kind::CustomU)
        return custom_u(irreducible) - custom_u0;
    return 4.0 * std::numbers::pi * irreducible * irreducible;
}

}  // namespace horizonlab
