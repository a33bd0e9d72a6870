#pragma once
// Evaporation cascades to X = 0 with exact conservation ledgers, stream
// weight telescoping, exhaustive stream enumeration, radiation-entropy
// accounting, and the equal-irreducible-mass invariance check.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "horizonlab/nohair.hpp"
#include "horizonlab/rng.hpp"
#include "horizonlab/tunneling.hpp"

namespace horizonlab {

struct Ledger {
    std::int64_t eps_units = 0;
    std::int64_t q_units = 0;
    std::int64_t j_half_units = 0;
    friend bool operator==(const Ledger&, const Ledger&) = default;
};

/// Ordered emission record. Every push re-validates the running daughter, so
/// any constructed stream is prefix-valid by construction.
class RadiationStream {
  public:
    explicit RadiationStream(NoHairVector initial)
        : initial_(initial), current_(initial)
    {
    }

    /// Appends an emission; throws InvalidState if the prefix would break.
    void push(const ParticleTriple& x);

    /// Builds a stream from a fixed emission order; empty if any prefix is
    /// invalid (used by permutation checks, which must not throw).
    static std::optional<RadiationStream> try_build(const NoHairVector& initial,
                                                    std::span<const ParticleTriple> emissions);

    const NoHairVector& initial() const { return initial_; }
    const NoHairVector& final_state() const { return current_; }
    const std::vector<ParticleTriple>& emissions() const { return emissions_; }
    const Ledger& ledger() const { return ledger_; }
    bool complete() const { return current_.is_zero(); }
    std::size_t size() const { return emissions_.size(); }

  private:
    NoHairVector initial_;
    NoHairVector current_;
    std::vector<ParticleTriple> emissions_;
    Ledger ledger_;
};

struct CascadeConfig {
    enum class Mode { Sampling, ConstantN };

    Mode mode = Mode::Sampling;
    double log_n = 0.0;  ///< constant-N accounting only
    std::int64_t trajectories = 1;
    std::uint64_t seed = 0;
    ChannelGrid grid;

    /// log N actually applied to stream weights under this mode.
    double effective_log_n() const { return mode == Mode::ConstantN ? log_n : 0.0; }
};

/// Samples one complete cascade X0 -> 0. Throws EvaporationStuck (carrying
/// the stuck state) if some intermediate state has no allowed channel.
RadiationStream run_cascade(const EntropyModel& model, const NoHairVector& x0,
                            const ChannelGrid& grid, RandomStream& rng);

/// Ensemble of independent cascades; trajectory t uses stream (seed, t).
/// Results are identical for every worker count.
std::vector<RadiationStream> run_cascade_ensemble(const EntropyModel& model,
                                                  const NoHairVector& x0,
                                                  const CascadeConfig& cfg, int workers);

/// Sum of per-step entropy differences plus k log N (k = emission count).
/// The entropy part telescopes to S(final) - S(initial) regardless of order.
double stream_log_weight(const EntropyModel& model, const RadiationStream& stream,
                         double log_n = 0.0);

/// Chain log-probability under per-state normalization (sampling mode);
/// order-dependent, used for the sampled stream distribution.
double stream_log_probability(const EntropyModel& model, const RadiationStream& stream,
                              const ChannelGrid& grid);

struct PermutationReport {
    double max_residual = 0.0;
    int tested = 0;
    int skipped = 0;  ///< permutations with an invalid prefix
};

/// Max |stream_log_weight(pi(stream)) - stream_log_weight(stream)| over
/// random emission-order permutations, skipping prefix-invalid orders.
PermutationReport permutation_check(const EntropyModel& model, const RadiationStream& stream,
                                    int permutations, RandomStream& rng);

/// Exhaustive variant over all len! orders (intended for short streams).
PermutationReport permutation_check_exhaustive(const EntropyModel& model,
                                               const RadiationStream& stream);

/// All complete streams from x0 in deterministic depth-first order, with
/// their log-weights at the given log N. Throws SizeBudgetExceeded.
std::vector<std::pair<RadiationStream, double>> enumerate_streams(
    const EntropyModel& model, const NoHairVector& x0, const ChannelGrid& grid,
    std::size_t budget = 1'000'000, double log_n = 0.0);

struct RadiationEntropyReport {
    double s_rad = 0.0;       ///< Shannon entropy of the stream distribution
    double ln_nprime = 0.0;   ///< implied ln N' = S(X0) - S_rad
    std::size_t stream_count = 0;
};

/// Entropy of the complete-stream distribution: equiweighted-by-k-log-N in
/// constant-N mode, per-state-normalized chain probabilities in sampling
/// mode. Feasible only when enumerate_streams is.
RadiationEntropyReport radiation_entropy(const EntropyModel& model, const NoHairVector& x0,
                                         const ChannelGrid& grid, const CascadeConfig& cfg);

/// Transition log-weights log Theta(X, X') = S(X') - S(X) for recorded
/// mother/daughter pairs; defined only when X - X' is an allowed emission.
struct TransitionTable {
    struct Entry {
        NoHairVector from;
        NoHairVector to;
        double log_theta;
    };
    std::vector<Entry> entries;

    static TransitionTable build(const EntropyModel& model,
                                 std::span<const std::pair<NoHairVector, NoHairVector>> pairs);
};

/// Arbitrary entropy functional of the real-valued no-hair triple; lets the
/// invariance check run against non-u(I) control models.
using EntropyFn = std::function<double(double mass, double charge, double spin)>;

struct PenrosePair {
    NoHairVector x1, x1p;  ///< first transition (mother, daughter)
    NoHairVector x2, x2p;  ///< equal-I partner transition
};

struct PenroseRow {
    double i_mother;
    double i_daughter;
    double residual;
};

struct PenroseReport {
    double max_residual = 0.0;
    int evaluated = 0;
    int skipped = 0;
    std::vector<PenroseRow> rows;
};

/// Max |log Theta(X1,X1') - log Theta(X2,X2')| over pairs with matching
/// irreducible masses (checked to 1e-12). Pairs whose transition is not an
/// allowed emission are skipped and counted.
PenroseReport penrose_invariance_check(const EntropyFn& entropy,
                                       std::span<const PenrosePair> pairs);
PenroseReport penrose_invariance_check(const EntropyModel& model,
                                       std::span<const PenrosePair> pairs);

/// Schwarzschild state of mass exactly I (one grid unit of size I).
NoHairVector schwarzschild_of_mass(double mass);

/// theta(I, I') tabulated on a uniform grid from Schwarzschild probes, with
/// bilinear interpolation; the independent route for the factorization
/// check Theta(X, X') = theta(I(X), I(X')).
class ThetaTable {
  public:
    ThetaTable(const EntropyModel& model, double i_min, double i_max, double step);

    double operator()(double i_mother, double i_daughter) const;
    double i_min() const { return i_min_; }
    double i_max() const { return i_min_ + step_ * static_cast<double>(n_ - 1); }

  private:
    double i_min_;
    double step_;
    int n_;
    std::vector<double> values_;  // row-major over (i_mother, i_daughter)
};

}  // namespace horizonlab
