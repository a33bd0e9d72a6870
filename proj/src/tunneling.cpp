#include "horizonlab/tunneling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace horizonlab {

void ChannelGrid::validate() const
{
    if (delta <= 0.0)
        throw InvalidState("channel grid requires delta > 0");
    if (q_max < 0 || j_max < 0)
        throw InvalidState("channel grid caps must be non-negative");
}

EvaporationStuck::EvaporationStuck(NoHairVector stuck)
    : std::runtime_error("no allowed emission channel at M = " + std::to_string(stuck.mass())),
      state(std::move(stuck))
{
}

ChannelForbidden::ChannelForbidden(int which)
    : std::runtime_error(which == 1 ? "order (x1, x2) is channel-forbidden"
                                    : "order (x2, x1) is channel-forbidden"),
      order(which)
{
}

double logsumexp(std::span<const double> log_terms)
{
    if (log_terms.empty())
        return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(log_terms.begin(), log_terms.end());
    double sum = 0.0;
    for (double t : log_terms)
        sum += std::exp(t - m);
    return m + std::log(sum);
}

std::optional<double> log_tunneling_weight(const EntropyModel& model, const NoHairVector& state,
                                           const ParticleTriple& x)
{
    const auto next = daughter(state, x);
    if (!next)
        return std::nullopt;
    return model.entropy(*next) - model.entropy(state);
}

std::vector<ParticleTriple> enumerate_channels(const NoHairVector& state, const ChannelGrid& grid)
{
    grid.validate();
    if (grid.delta != state.units().delta)
        throw InvalidState("channel grid delta does not match the state's grid");

    std::vector<ParticleTriple> channels;
    const std::int64_t q_span = grid.enable_charge ? grid.q_max : 0;
    const std::int64_t j_span = grid.enable_spin ? grid.j_max : 0;
    for (std::int64_t eps = 1; eps <= state.m_units(); ++eps)
        for (std::int64_t q = -q_span; q <= q_span; ++q)
            for (std::int64_t j = -j_span; j <= j_span; ++j) {
                const ParticleTriple x{eps, q, j};
                if (daughter(state, x))
                    channels.push_back(x);
            }
    return channels;
}

EmissionSpectrum spectrum(const EntropyModel& model, const NoHairVector& state,
                          const ChannelGrid& grid)
{
    if (state.m_units() <= 0)
        throw InvalidState("spectrum requires M > 0");

    EmissionSpectrum spec{state, {}, 0.0};
    const double s_state = model.entropy(state);
    for (const ParticleTriple& x : enumerate_channels(state, grid)) {
        const auto next = daughter(state, x);
        spec.entries.push_back({x, model.entropy(*next) - s_state, 0.0});
    }
    if (spec.entries.empty())
        throw EvaporationStuck(state);

    std::vector<double> log_weights;
    log_weights.reserve(spec.entries.size());
    for (const auto& e : spec.entries)
        log_weights.push_back(e.log_weight);
    spec.log_norm = logsumexp(log_weights);
    for (auto& e : spec.entries)
        e.probability = std::exp(e.log_weight - spec.log_norm);
    return spec;
}

const ParticleTriple& sample_emission(const EmissionSpectrum& spec, RandomStream& rng)
{
    const double u = rng.next_double();
    double cum = 0.0;
    for (const auto& e : spec.entries) {
        cum += e.probability;
        if (u < cum)
            return e.x;
    }
    return spec.entries.back().x;  // rounding fell past the last bin
}

double exchange_residual(const LogWeightKernel& kernel, const NoHairVector& state,
                         const ParticleTriple& x1, const ParticleTriple& x2)
{
    const auto after1 = daughter(state, x1);
    const auto w1 = kernel(state, x1);
    const auto w12 = after1 ? kernel(*after1, x2) : std::nullopt;
    if (!after1 || !w1 || !w12)
        throw ChannelForbidden(1);

    const auto after2 = daughter(state, x2);
    const auto w2 = kernel(state, x2);
    const auto w21 = after2 ? kernel(*after2, x1) : std::nullopt;
    if (!after2 || !w2 || !w21)
        throw ChannelForbidden(2);

    return (*w1 + *w12) - (*w2 + *w21);
}

double exchange_residual(const EntropyModel& model, const NoHairVector& state,
                         const ParticleTriple& x1, const ParticleTriple& x2)
{
    return exchange_residual(
        [&model](const NoHairVector& s, const ParticleTriple& x) {
            return log_tunneling_weight(model, s, x);
        },
        state, x1, x2);
}

std::array<double, 3> entropy_gradient(const EntropyModel& model, const NoHairVector& state,
                                       bool* used_one_sided)
{
    const double m = state.mass();
    const double q = state.charge();
    const double j = state.spin();
    const double h = 1e-5 * std::max(m, 1.0);
    bool one_sided = false;

    const auto eval = [&](double dm, double dq, double dj, bool* ok) -> double {
        const double mm = m + dm;
        const double qq = q + dq;
        // S is even in the spin magnitude (it enters through a^2), so steps
        // past J = 0 use the even extension.
        const double jj = std::abs(j + dj);
        if (!subextremal(mm, qq, jj)) {
            *ok = false;
            return 0.0;
        }
        *ok = true;
        return model.entropy(mm, qq, jj);
    };

    std::array<double, 3> grad{};
    for (int axis = 0; axis < 3; ++axis) {
        const auto shifted = [&](double step, bool* ok) {
            return eval(axis == 0 ? step : 0.0, axis == 1 ? step : 0.0, axis == 2 ? step : 0.0,
                        ok);
        };
        bool plus_ok = false;
        bool minus_ok = false;
        const double fp = shifted(+h, &plus_ok);
        const double fm = shifted(-h, &minus_ok);
        if (plus_ok && minus_ok) {
            grad[axis] = (fp - fm) / (2.0 * h);
        } else if (plus_ok) {
            bool ok2 = false;
            const double fpp = shifted(+2.0 * h, &ok2);
            const double f0 = model.entropy(state);
            grad[axis] = ok2 ? (-3.0 * f0 + 4.0 * fp - fpp) / (2.0 * h) : (fp - f0) / h;
            one_sided = true;
        } else if (minus_ok) {
            bool ok2 = false;
            const double fmm = shifted(-2.0 * h, &ok2);
            const double f0 = model.entropy(state);
            grad[axis] = ok2 ? (3.0 * f0 - 4.0 * fm + fmm) / (2.0 * h) : (f0 - fm) / h;
            one_sided = true;
        } else {
            // The admissible set pinches to a point along this axis (an
            // exactly extremal state); emissions along it are forbidden, so
            // the reference weight is insensitive to this component.
            grad[axis] = 0.0;
            one_sided = true;
        }
    }
    if (used_one_sided)
        *used_one_sided = one_sided;
    return grad;
}

ThermalReference thermal_reference(const EntropyModel& model, const NoHairVector& state,
                                   const ParticleTriple& x)
{
    bool one_sided = false;
    const auto grad = entropy_gradient(model, state, &one_sided);
    const double eps = static_cast<double>(x.eps_units) * state.units().delta;
    const double q = static_cast<double>(x.q_units) * state.units().charge_quantum;
    const double j = 0.5 * static_cast<double>(x.j_half_units);
    return {-(grad[0] * eps + grad[1] * q + grad[2] * j), one_sided};
}

}  // namespace horizonlab
