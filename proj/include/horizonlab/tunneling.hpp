#pragma once
// Log-space tunneling weights and normalized emission spectra.
//
// Every weight is an entropy difference S(X - x) - S(X); the only
// exponentiation happens inside the log-sum-exp normalization, so the
// engine stays finite for entropy differences far beyond double overflow.

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "horizonlab/nohair.hpp"
#include "horizonlab/rng.hpp"

namespace horizonlab {

/// Discretization of the emission spectrum around a given state.
struct ChannelGrid {
    double delta = 0.1;
    bool enable_charge = false;
    bool enable_spin = false;
    std::int64_t q_max = 0;  ///< max |q| per emission, in charge quanta
    std::int64_t j_max = 0;  ///< max |j| per emission, in half units

    void validate() const;
};

struct EmissionSpectrum {
    struct Entry {
        ParticleTriple x;
        double log_weight;
        double probability;
    };

    NoHairVector state;
    std::vector<Entry> entries;
    double log_norm = 0.0;
};

/// State with positive mass but no allowed emission channel on its grid.
struct EvaporationStuck : std::runtime_error {
    NoHairVector state;
    explicit EvaporationStuck(NoHairVector stuck);
};

/// One of the two orders of a would-be exchanged emission pair is forbidden.
struct ChannelForbidden : std::runtime_error {
    int order;  ///< 1 = (x1 then x2), 2 = (x2 then x1)
    explicit ChannelForbidden(int which);
};

double logsumexp(std::span<const double> log_terms);

/// S(X - x) - S(X); empty when the daughter is invariant-violating.
std::optional<double> log_tunneling_weight(const EntropyModel& model, const NoHairVector& state,
                                           const ParticleTriple& x);

/// All allowed emissions with eps in {delta, ..., M} and |q|, |j| within the
/// grid caps, in lexicographic (eps, q, j) order. Empty for M = 0.
std::vector<ParticleTriple> enumerate_channels(const NoHairVector& state, const ChannelGrid& grid);

/// Normalized single-emission spectrum. Throws EvaporationStuck when a
/// positive-mass state has no allowed channel.
EmissionSpectrum spectrum(const EntropyModel& model, const NoHairVector& state,
                          const ChannelGrid& grid);

const ParticleTriple& sample_emission(const EmissionSpectrum& spec, RandomStream& rng);

/// Any candidate log-weight kernel; empty result marks a forbidden channel.
using LogWeightKernel =
    std::function<std::optional<double>(const NoHairVector&, const ParticleTriple&)>;

/// [g(x1|X) + g(x2|X-x1)] - [g(x2|X) + g(x1|X-x2)] with unnormalized
/// log-weights; identically zero (up to rounding) for entropy-difference
/// kernels. Throws ChannelForbidden naming the failing order.
double exchange_residual(const LogWeightKernel& kernel, const NoHairVector& state,
                         const ParticleTriple& x1, const ParticleTriple& x2);
double exchange_residual(const EntropyModel& model, const NoHairVector& state,
                         const ParticleTriple& x1, const ParticleTriple& x2);

struct ThermalReference {
    double value;    ///< -grad S(X) . x
    bool one_sided;  ///< true when any axis needed a one-sided difference
};

/// Backreaction-free reference weight -grad S(X) . x, with the gradient taken
/// by central differences of step 1e-5 * max(M, 1); axes that would step over
/// the extremal boundary fall back to one-sided differences and set the flag.
ThermalReference thermal_reference(const EntropyModel& model, const NoHairVector& state,
                                   const ParticleTriple& x);

/// Entropy gradient at X in real (M, Q, J) coordinates, finite differences.
std::array<double, 3> entropy_gradient(const EntropyModel& model, const NoHairVector& state,
                                       bool* used_one_sided = nullptr);

}  // namespace horizonlab
