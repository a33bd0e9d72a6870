#include "horizonlab/serialize.hpp"

#include <cstdio>
#include <ostream>

namespace horizonlab {

nlohmann::json units_to_json(const UnitSystem& units)
{
    return {{"delta", units.delta}, {"charge_quantum", units.charge_quantum}};
}

UnitSystem units_from_json(const nlohmann::json& doc)
{
    UnitSystem units;
    units.delta = doc.at("delta").get<double>();
    units.charge_quantum = doc.value("charge_quantum", 1.0);
    return units;
}

nlohmann::json triple_to_json(const ParticleTriple& x)
{
    return {{"eps_units", x.eps_units}, {"q_units", x.q_units}, {"j_half_units", x.j_half_units}};
}

ParticleTriple triple_from_json(const nlohmann::json& doc)
{
    return ParticleTriple{doc.at("eps_units").get<std::int64_t>(),
                          doc.at("q_units").get<std::int64_t>(),
                          doc.at("j_half_units").get<std::int64_t>()};
}

nlohmann::json state_to_json(const NoHairVector& state)
{
    return {{"m_units", state.m_units()},
            {"q_units", state.q_units()},
            {"j_half_units", state.j_half_units()},
            {"theta", state.theta()},
            {"phi", state.phi()}};
}

NoHairVector state_from_json(const nlohmann::json& doc, const UnitSystem& units)
{
    return NoHairVector(doc.at("m_units").get<std::int64_t>(),
                        doc.at("q_units").get<std::int64_t>(),
                        doc.at("j_half_units").get<std::int64_t>(), units,
                        doc.value("theta", 0.0), doc.value("phi", 0.0));
}

nlohmann::json grid_to_json(const ChannelGrid& grid)
{
    return {{"delta", grid.delta},
            {"enable_charge", grid.enable_charge},
            {"enable_spin", grid.enable_spin},
            {"q_max", grid.q_max},
            {"j_max", grid.j_max}};
}

ChannelGrid grid_from_json(const nlohmann::json& doc)
{
    ChannelGrid grid;
    grid.delta = doc.at("delta").get<double>();
    grid.enable_charge = doc.value("enable_charge", false);
    grid.enable_spin = doc.value("enable_spin", false);
    grid.q_max = doc.value("q_max", std::int64_t{0});
    grid.j_max = doc.value("j_max", std::int64_t{0});
    grid.validate();
    return grid;
}

std::string csv_double(double value)
{
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_spectrum_csv(std::ostream& out, const EmissionSpectrum& spec)
{
    const double delta = spec.state.units().delta;
    out << "eps,q,j_half,log_weight,probability\n";
    for (const auto& entry : spec.entries) {
        out << csv_double(static_cast<double>(entry.x.eps_units) * delta) << ','
            << entry.x.q_units << ',' << entry.x.j_half_units << ','
            << csv_double(entry.log_weight) << ',' << csv_double(entry.probability) << '\n';
    }
}

nlohmann::json spectrum_to_json(const EmissionSpectrum& spec)
{
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& entry : spec.entries)
        entries.push_back({{"x", triple_to_json(entry.x)},
                           {"log_weight", entry.log_weight},
                           {"probability", entry.probability}});
    nlohmann::json doc = units_to_json(spec.state.units());
    doc["state"] = state_to_json(spec.state);
    doc["log_norm"] = spec.log_norm;
    doc["entries"] = std::move(entries);
    return doc;
}

nlohmann::json trajectory_to_json(std::int64_t trajectory, const RadiationStream& stream,
                                  double log_weight)
{
    nlohmann::json emissions = nlohmann::json::array();
    for (const ParticleTriple& x : stream.emissions())
        emissions.push_back(triple_to_json(x));
    return {{"trajectory", trajectory},
            {"emissions", std::move(emissions)},
            {"log_weight", log_weight},
            {"steps", stream.size()}};
}

void write_penrose_csv(std::ostream& out, const PenroseReport& report)
{
    out << "I1,I1_prime,residual\n";
    for (const PenroseRow& row : report.rows)
        out << csv_double(row.i_mother) << ',' << csv_double(row.i_daughter) << ','
            << csv_double(row.residual) << '\n';
}

void write_spin_csv(std::ostream& out,
                    const std::vector<EvaporationClassification>& classifications)
{
    out << "j_p,j,class,eigenvalue,residual,conserved\n";
    for (const auto& classification : classifications)
        for (const auto& entry : classification.entries)
            out << csv_double(classification.particle_j.value()) << ','
                << csv_double(classification.hole_j.value()) << ',' << to_string(entry.cls)
                << ',' << csv_double(entry.eigenvalue) << ',' << csv_double(entry.residual)
                << ',' << (entry.conserved ? 1 : 0) << '\n';
}

std::string config_hash(const nlohmann::json& config)
{
    const std::string canonical = config.dump();
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (unsigned char c : canonical) {
        hash ^= c;
        hash *= 0x100000001B3ull;
    }
    char buffer[20];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

}  // namespace horizonlab
