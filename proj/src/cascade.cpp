#include "horizonlab/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "horizonlab/parallel.hpp"

namespace horizonlab {

void RadiationStream::push(const ParticleTriple& x)
{
    const auto next = daughter(current_, x);
    if (!next)
        throw InvalidState("emission " + std::to_string(emissions_.size()) +
                           " breaks the stream prefix");
    current_ = *next;
    emissions_.push_back(x);
    ledger_.eps_units += x.eps_units;
    ledger_.q_units += x.q_units;
    ledger_.j_half_units += x.j_half_units;
}

std::optional<RadiationStream> RadiationStream::try_build(
    const NoHairVector& initial, std::span<const ParticleTriple> emissions)
{
    RadiationStream stream(initial);
    for (const ParticleTriple& x : emissions) {
        const auto next = daughter(stream.current_, x);
        if (!next)
            return std::nullopt;
        stream.current_ = *next;
        stream.emissions_.push_back(x);
        stream.ledger_.eps_units += x.eps_units;
        stream.ledger_.q_units += x.q_units;
        stream.ledger_.j_half_units += x.j_half_units;
    }
    return stream;
}

RadiationStream run_cascade(const EntropyModel& model, const NoHairVector& x0,
                            const ChannelGrid& grid, RandomStream& rng)
{
    RadiationStream stream(x0);
    while (!stream.final_state().is_zero()) {
        const EmissionSpectrum spec = spectrum(model, stream.final_state(), grid);
        stream.push(sample_emission(spec, rng));
    }
    return stream;
}

std::vector<RadiationStream> run_cascade_ensemble(const EntropyModel& model,
                                                  const NoHairVector& x0,
                                                  const CascadeConfig& cfg, int workers)
{
    if (cfg.trajectories < 1)
        throw InvalidState("cascade ensemble requires trajectories >= 1");
    std::vector<std::optional<RadiationStream>> slots(
        static_cast<std::size_t>(cfg.trajectories));
    parallel_for(cfg.trajectories, workers, [&](std::int64_t t) {
        RandomStream rng(cfg.seed, static_cast<std::uint64_t>(t));
        slots[static_cast<std::size_t>(t)] = run_cascade(model, x0, cfg.grid, rng);
    });
    std::vector<RadiationStream> out;
    out.reserve(slots.size());
    for (auto& s : slots)
        out.push_back(std::move(*s));
    return out;
}

double stream_log_weight(const EntropyModel& model, const RadiationStream& stream, double log_n)
{
    NoHairVector state = stream.initial();
    double total = 0.0;
    std::size_t index = 0;
    for (const ParticleTriple& x : stream.emissions()) {
        const auto next = daughter(state, x);
        if (!next)
            throw InvalidState("invalid stream prefix at emission " + std::to_string(index));
        total += model.entropy(*next) - model.entropy(state);
        state = *next;
        ++index;
    }
    return total + static_cast<double>(stream.size()) * log_n;
}

double stream_log_probability(const EntropyModel& model, const RadiationStream& stream,
                              const ChannelGrid& grid)
{
    NoHairVector state = stream.initial();
    double total = 0.0;
    for (const ParticleTriple& x : stream.emissions()) {
        const EmissionSpectrum spec = spectrum(model, state, grid);
        const auto w = log_tunneling_weight(model, state, x);
        if (!w)
            throw InvalidState("stream emission not a channel of its state");
        total += *w - spec.log_norm;
        state = *daughter(state, x);
    }
    return total;
}

namespace {

PermutationReport check_orders(const EntropyModel& model, const RadiationStream& stream,
                               const std::function<bool(std::vector<ParticleTriple>&)>& next_order)
{
    PermutationReport report;
    const double reference = stream_log_weight(model, stream);
    std::vector<ParticleTriple> order = stream.emissions();
    while (next_order(order)) {
        const auto permuted = RadiationStream::try_build(stream.initial(), order);
        if (!permuted) {
            ++report.skipped;
            continue;
        }
        const double w = stream_log_weight(model, *permuted);
        report.max_residual = std::max(report.max_residual, std::abs(w - reference));
        ++report.tested;
    }
    return report;
}

}  // namespace

PermutationReport permutation_check(const EntropyModel& model, const RadiationStream& stream,
                                    int permutations, RandomStream& rng)
{
    if (stream.size() < 2)
        return {};
    int remaining = permutations;
    return check_orders(model, stream, [&](std::vector<ParticleTriple>& order) {
        if (remaining-- <= 0)
            return false;
        // Fisher-Yates on a fresh copy of the recorded order
        order = stream.emissions();
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            const std::size_t k = rng.next_below(i + 1);
            std::swap(order[i], order[k]);
        }
        return true;
    });
}

PermutationReport permutation_check_exhaustive(const EntropyModel& model,
                                               const RadiationStream& stream)
{
    if (stream.size() < 2)
        return {};
    std::vector<std::size_t> idx(stream.size());
    std::iota(idx.begin(), idx.end(), 0);
    bool first = true;
    return check_orders(model, stream, [&](std::vector<ParticleTriple>& order) {
        if (!first && !std::next_permutation(idx.begin(), idx.end()))
            return false;
        first = false;
        for (std::size_t i = 0; i < idx.size(); ++i)
            order[i] = stream.emissions()[idx[i]];
        return true;
    });
}

namespace {

void enumerate_recursive(const EntropyModel& model, const ChannelGrid& grid,
                         RadiationStream& stream, double log_weight, double log_n,
                         std::size_t budget,
                         std::vector<std::pair<RadiationStream, double>>& out)
{
    const NoHairVector& state = stream.final_state();
    if (state.is_zero()) {
        if (out.size() >= budget)
            throw SizeBudgetExceeded(out.size() + 1);
        out.emplace_back(stream, log_weight);
        return;
    }
    const double s_state = model.entropy(state);
    for (const ParticleTriple& x : enumerate_channels(state, grid)) {
        RadiationStream extended = stream;
        extended.push(x);
        const double step = model.entropy(extended.final_state()) - s_state + log_n;
        enumerate_recursive(model, grid, extended, log_weight + step, log_n, budget, out);
    }
}

}  // namespace

std::vector<std::pair<RadiationStream, double>> enumerate_streams(const EntropyModel& model,
                                                                  const NoHairVector& x0,
                                                                  const ChannelGrid& grid,
                                                                  std::size_t budget,
                                                                  double log_n)
{
    std::vector<std::pair<RadiationStream, double>> out;
    RadiationStream root(x0);
    enumerate_recursive(model, grid, root, 0.0, log_n, budget, out);
    return out;
}

RadiationEntropyReport radiation_entropy(const EntropyModel& model, const NoHairVector& x0,
                                         const ChannelGrid& grid, const CascadeConfig& cfg)
{
    const auto streams = enumerate_streams(model, x0, grid);

    std::vector<double> log_weights;
    log_weights.reserve(streams.size());
    if (cfg.mode == CascadeConfig::Mode::ConstantN) {
        // The entropy part telescopes identically for every complete stream;
        // only the k log N term distinguishes them.
        for (const auto& [stream, w] : streams)
            log_weights.push_back(static_cast<double>(stream.size()) * cfg.log_n);
    } else {
        for (const auto& [stream, w] : streams)
            log_weights.push_back(stream_log_probability(model, stream, grid));
    }

    const double log_norm = logsumexp(log_weights);
    double s_rad = 0.0;
    for (double lw : log_weights) {
        const double p = std::exp(lw - log_norm);
        if (p > 0.0)
            s_rad -= p * (lw - log_norm);
    }

    RadiationEntropyReport report;
    report.s_rad = s_rad;
    report.ln_nprime = model.entropy(x0) - s_rad;
    report.stream_count = streams.size();
    return report;
}

TransitionTable TransitionTable::build(
    const EntropyModel& model, std::span<const std::pair<NoHairVector, NoHairVector>> pairs)
{
    TransitionTable table;
    for (const auto& [from, to] : pairs) {
        if (to.mass() > from.mass())
            continue;  // not an emission
        table.entries.push_back({from, to, model.entropy(to) - model.entropy(from)});
    }
    return table;
}

namespace {

bool allowed_transition(const NoHairVector& from, const NoHairVector& to)
{
    // Real-unit reading of the daughter rule: the daughter must be lighter
    // (or equal, for the identity transition) and is valid by construction.
    return to.mass() <= from.mass();
}

}  // namespace

PenroseReport penrose_invariance_check(const EntropyFn& entropy,
                                       std::span<const PenrosePair> pairs)
{
    PenroseReport report;
    const auto s_of = [&entropy](const NoHairVector& x) {
        return entropy(x.mass(), x.charge(), x.spin());
    };
    for (const PenrosePair& pair : pairs) {
        const double i1 = irreducible_mass(pair.x1);
        const double i2 = irreducible_mass(pair.x2);
        const double i1p = irreducible_mass(pair.x1p);
        const double i2p = irreducible_mass(pair.x2p);
        if (std::abs(i1 - i2) > 1e-12 || std::abs(i1p - i2p) > 1e-12)
            throw InvalidState("pair does not match irreducible masses to 1e-12");
        if (!allowed_transition(pair.x1, pair.x1p) || !allowed_transition(pair.x2, pair.x2p)) {
            ++report.skipped;
            continue;
        }
        const double theta1 = s_of(pair.x1p) - s_of(pair.x1);
        const double theta2 = s_of(pair.x2p) - s_of(pair.x2);
        const double residual = std::abs(theta1 - theta2);
        report.max_residual = std::max(report.max_residual, residual);
        ++report.evaluated;
        report.rows.push_back({i1, i1p, residual});
    }
    return report;
}

PenroseReport penrose_invariance_check(const EntropyModel& model,
                                       std::span<const PenrosePair> pairs)
{
    return penrose_invariance_check(
        [&model](double m, double q, double j) { return model.entropy(m, q, j); }, pairs);
}

NoHairVector schwarzschild_of_mass(double mass)
{
    if (mass <= 0.0)
        throw InvalidState("Schwarzschild partner requires positive mass");
    return NoHairVector(1, 0, 0, UnitSystem{mass, 1.0});
}

ThetaTable::ThetaTable(const EntropyModel& model, double i_min, double i_max, double step)
    : i_min_(i_min), step_(step)
{
    if (step <= 0.0 || i_max <= i_min || i_min <= 0.0)
        throw InvalidState("theta table requires 0 < i_min < i_max and step > 0");
    n_ = static_cast<int>(std::floor((i_max - i_min) / step)) + 2;
    values_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
    std::vector<double> entropies(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) {
        const double i = i_min_ + step_ * static_cast<double>(k);
        entropies[static_cast<std::size_t>(k)] =
            model.entropy(schwarzschild_of_mass(i));
    }
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c)
            values_[static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) +
                    static_cast<std::size_t>(c)] =
                entropies[static_cast<std::size_t>(c)] - entropies[static_cast<std::size_t>(r)];
}

double ThetaTable::operator()(double i_mother, double i_daughter) const
{
    const auto locate = [this](double v) {
        const double t = (v - i_min_) / step_;
        int cell = static_cast<int>(std::floor(t));
        cell = std::clamp(cell, 0, n_ - 2);
        return std::pair<int, double>(cell, t - static_cast<double>(cell));
    };
    const auto [r, fr] = locate(i_mother);
    const auto [c, fc] = locate(i_daughter);
    const auto at = [this](int rr, int cc) {
        return values_[static_cast<std::size_t>(rr) * static_cast<std::size_t>(n_) +
                       static_cast<std::size_t>(cc)];
    };
    const double top = at(r, c) * (1.0 - fc) + at(r, c + 1) * fc;
    const double bottom = at(r + 1, c) * (1.0 - fc) + at(r + 1, c + 1) * fc;
    return top * (1.0 - fr) + bottom * fr;
}

}  // namespace horizonlab
