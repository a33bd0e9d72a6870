#pragma once
// File-format surface: JSON schemas for states, triples, grids and reports,
// CSV writers for spectra and verifier tables. One grid declaration
// ("delta", "charge_quantum") per document; states and triples carry bare
// integer units.

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "horizonlab/cascade.hpp"
#include "horizonlab/nohair.hpp"
#include "horizonlab/spin.hpp"
#include "horizonlab/tunneling.hpp"

namespace horizonlab {

nlohmann::json units_to_json(const UnitSystem& units);
UnitSystem units_from_json(const nlohmann::json& doc);

nlohmann::json triple_to_json(const ParticleTriple& x);
ParticleTriple triple_from_json(const nlohmann::json& doc);

nlohmann::json state_to_json(const NoHairVector& state);
NoHairVector state_from_json(const nlohmann::json& doc, const UnitSystem& units);

nlohmann::json grid_to_json(const ChannelGrid& grid);
ChannelGrid grid_from_json(const nlohmann::json& doc);

/// Full-precision decimal form that round-trips through strtod.
std::string csv_double(double value);

/// Header `eps,q,j_half,log_weight,probability`, one row per channel in
/// enumeration order.
void write_spectrum_csv(std::ostream& out, const EmissionSpectrum& spec);
nlohmann::json spectrum_to_json(const EmissionSpectrum& spec);

/// One cascade trajectory as a JSON-lines object.
nlohmann::json trajectory_to_json(std::int64_t trajectory, const RadiationStream& stream,
                                  double log_weight);

/// Header `I1,I1_prime,residual`.
void write_penrose_csv(std::ostream& out, const PenroseReport& report);

/// Header `j_p,j,class,eigenvalue,residual,conserved`.
void write_spin_csv(std::ostream& out,
                    const std::vector<EvaporationClassification>& classifications);

/// FNV-1a hash of the canonical (sorted-key) dump, as fixed-width hex.
std::string config_hash(const nlohmann::json& config);

}  // namespace horizonlab
