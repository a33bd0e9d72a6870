#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "horizonlab/cascade.hpp"
#include "horizonlab/nohair.hpp"
#include "horizonlab/parallel.hpp"
#include "horizonlab/rng.hpp"

using namespace horizonlab;

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

const UnitSystem kUnits{0.1, 1.0};
const ChannelGrid kNeutralGrid{0.1, false, false, 0, 0};
const EntropyModel kModel = EntropyModel::schwarzschild();

RadiationStream build_stream(const NoHairVector& initial,
                             const std::vector<ParticleTriple>& emissions)
{
    auto stream = RadiationStream::try_build(initial, emissions);
    REQUIRE(stream.has_value());
    return *stream;
}

}  // namespace

TEST_CASE("a one-unit hole evaporates in exactly one step")
{
    RandomStream rng(31);
    const RadiationStream stream =
        run_cascade(kModel, NoHairVector(1, 0, 0, kUnits), kNeutralGrid, rng);
    REQUIRE(stream.size() == 1);
    CHECK(stream.emissions()[0] == ParticleTriple{1, 0, 0});
    CHECK(stream.complete());
}

TEST_CASE("two-unit cascade frequencies match the two-chain oracle")
{
    // From M = 2 delta the chain either emits (2d) at once or (d) twice.
    // p(one step) = softmax of the two entropy differences.
    const double s1 = kFourPi * 0.01;  // S(0.1)
    const double s2 = kFourPi * 0.04;  // S(0.2)
    const double w_small = s1 - s2;
    const double w_all = -s2;
    const double p_one =
        std::exp(w_all) / (std::exp(w_small) + std::exp(w_all));

    const NoHairVector x0(2, 0, 0, kUnits);
    const int n = 100000;
    int one_step = 0;
    for (int t = 0; t < n; ++t) {
        RandomStream rng(32, static_cast<std::uint64_t>(t));
        const RadiationStream stream = run_cascade(kModel, x0, kNeutralGrid, rng);
        REQUIRE(stream.complete());
        if (stream.size() == 1)
            ++one_step;
    }
    const double sigma = std::sqrt(p_one * (1.0 - p_one) / n);
    CHECK(std::abs(static_cast<double>(one_step) / n - p_one) < 4.0 * sigma);
}

TEST_CASE("cascade ledgers conserve all three charges exactly")
{
    const UnitSystem units{0.1, 0.1};
    const NoHairVector x0(10, 2, 1, units);
    const ChannelGrid grid{0.1, true, true, 1, 1};
    const EntropyModel model = EntropyModel::kerr_newman();

    for (int t = 0; t < 100; ++t) {
        RandomStream rng(33, static_cast<std::uint64_t>(t));
        const RadiationStream stream = run_cascade(model, x0, grid, rng);
        CHECK(stream.complete());
        CHECK(stream.ledger() == Ledger{10, 2, 1});
    }
}

TEST_CASE("a stuck state is reported with its state")
{
    const NoHairVector charged(2, 3, 0, UnitSystem{0.1, 0.05});
    RandomStream rng(34);
    try {
        (void)run_cascade(EntropyModel::kerr_newman(), charged, kNeutralGrid, rng);
        FAIL("expected EvaporationStuck");
    } catch (const EvaporationStuck& stuck) {
        CHECK(stuck.state.q_units() == 3);
    }
}

TEST_CASE("stream log weight telescopes")
{
    SUBCASE("complete unit-mass stream has weight -S(X0)")
    {
        const NoHairVector x0(10, 0, 0, kUnits);
        RandomStream rng(35);
        const RadiationStream stream = run_cascade(kModel, x0, kNeutralGrid, rng);
        CHECK(stream_log_weight(kModel, stream) == doctest::Approx(-kFourPi).epsilon(1e-12));
    }

    SUBCASE("weight is independent of the stream content")
    {
        const NoHairVector x0(10, 0, 0, kUnits);
        const auto a = build_stream(x0, {{1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}});
        const auto b = build_stream(x0, {{10, 0, 0}});
        CHECK(stream_log_weight(kModel, a) ==
              doctest::Approx(stream_log_weight(kModel, b)).epsilon(1e-12));
    }

    SUBCASE("constant-N accounting adds k log N")
    {
        const NoHairVector x0(2, 0, 0, kUnits);
        const auto two = build_stream(x0, {{1, 0, 0}, {1, 0, 0}});
        const auto one = build_stream(x0, {{2, 0, 0}});
        const double log_n = -1.0;
        CHECK(stream_log_weight(kModel, two, log_n) - stream_log_weight(kModel, one, log_n) ==
              doctest::Approx(log_n).epsilon(1e-12));
    }

    SUBCASE("an invalid prefix is rejected at its index")
    {
        const NoHairVector x0(10, 0, 0, kUnits);
        RadiationStream stream(x0);
        stream.push({9, 0, 0});
        CHECK_THROWS_AS(stream.push({2, 0, 0}), InvalidState);
        CHECK(!RadiationStream::try_build(x0, std::vector<ParticleTriple>{{9, 0, 0}, {2, 0, 0}})
                   .has_value());
    }
}

TEST_CASE("permutation symmetry of stream weights")
{
    SUBCASE("two neutral emissions")
    {
        const auto stream =
            build_stream(NoHairVector(10, 0, 0, kUnits), {{1, 0, 0}, {2, 0, 0}});
        RandomStream rng(36);
        const PermutationReport report = permutation_check(kModel, stream, 100, rng);
        CHECK(report.max_residual < 1e-12);
        CHECK(report.tested > 0);
    }

    SUBCASE("charged stream, exhaustive oracle over all orders")
    {
        const UnitSystem units{0.1, 0.1};
        const NoHairVector x0(12, 2, 1, units);
        const auto stream =
            build_stream(x0, {{2, 1, 1}, {3, -1, 0}, {4, 2, 0}, {3, 0, 0}});
        const EntropyModel model = EntropyModel::kerr_newman();

        const PermutationReport exhaustive = permutation_check_exhaustive(model, stream);
        CHECK(exhaustive.tested + exhaustive.skipped == 24);
        CHECK(exhaustive.tested > 1);
        CHECK(exhaustive.max_residual < 1e-9);

        RandomStream rng(37);
        const PermutationReport sampled = permutation_check(model, stream, 100, rng);
        CHECK(sampled.max_residual < 1e-9);
    }

    SUBCASE("single-emission streams have nothing to permute")
    {
        const auto stream = build_stream(NoHairVector(1, 0, 0, kUnits), {{1, 0, 0}});
        RandomStream rng(38);
        const PermutationReport report = permutation_check(kModel, stream, 100, rng);
        CHECK(report.tested == 0);
        CHECK(report.max_residual == 0.0);
    }
}

TEST_CASE("exhaustive stream enumeration")
{
    SUBCASE("compositions of three grid units")
    {
        const auto streams =
            enumerate_streams(kModel, NoHairVector(3, 0, 0, kUnits), kNeutralGrid);
        REQUIRE(streams.size() == 4);
        const std::vector<std::vector<std::int64_t>> expected = {
            {1, 1, 1}, {1, 2}, {2, 1}, {3}};
        for (std::size_t s = 0; s < streams.size(); ++s) {
            const auto& emissions = streams[s].first.emissions();
            REQUIRE(emissions.size() == expected[s].size());
            for (std::size_t k = 0; k < emissions.size(); ++k)
                CHECK(emissions[k].eps_units == expected[s][k]);
        }
    }

    SUBCASE("16 compositions of five units, all with equal weight")
    {
        const auto streams =
            enumerate_streams(kModel, NoHairVector(5, 0, 0, kUnits), kNeutralGrid);
        REQUIRE(streams.size() == 16);  // 2^(5-1)
        const double expected = -kModel.entropy(NoHairVector(5, 0, 0, kUnits));
        for (const auto& [stream, log_weight] : streams) {
            CHECK(stream.complete());
            CHECK(log_weight == doctest::Approx(expected).epsilon(1e-12));
        }
    }

    SUBCASE("equal-length streams share their constant-N weight")
    {
        const auto streams = enumerate_streams(kModel, NoHairVector(5, 0, 0, kUnits),
                                               kNeutralGrid, 1000000, -0.7);
        for (const auto& [stream_a, weight_a] : streams)
            for (const auto& [stream_b, weight_b] : streams)
                if (stream_a.size() == stream_b.size())
                    CHECK(std::abs(weight_a - weight_b) < 1e-9);
    }

    SUBCASE("budget overrun raises the explicit size error")
    {
        CHECK_THROWS_AS(
            (void)enumerate_streams(kModel, NoHairVector(5, 0, 0, kUnits), kNeutralGrid, 10),
            SizeBudgetExceeded);
    }
}

TEST_CASE("radiation entropy accounting")
{
    CascadeConfig constant_n;
    constant_n.mode = CascadeConfig::Mode::ConstantN;
    constant_n.log_n = 0.0;
    constant_n.grid = kNeutralGrid;

    SUBCASE("constant-N enumeration is equiprobable")
    {
        const auto report =
            radiation_entropy(kModel, NoHairVector(5, 0, 0, kUnits), kNeutralGrid, constant_n);
        CHECK(report.stream_count == 16);
        CHECK(report.s_rad == doctest::Approx(std::log(16.0)).epsilon(1e-12));
        CHECK(report.ln_nprime ==
              doctest::Approx(kModel.entropy(NoHairVector(5, 0, 0, kUnits)) - std::log(16.0))
                  .epsilon(1e-12));
    }

    SUBCASE("a single stream carries no entropy")
    {
        const auto report =
            radiation_entropy(kModel, NoHairVector(1, 0, 0, kUnits), kNeutralGrid, constant_n);
        CHECK(report.stream_count == 1);
        CHECK(report.s_rad == 0.0);
    }

    SUBCASE("sampling mode reproduces the two-chain entropy")
    {
        CascadeConfig sampling;
        sampling.grid = kNeutralGrid;
        const auto report =
            radiation_entropy(kModel, NoHairVector(2, 0, 0, kUnits), kNeutralGrid, sampling);

        const double s1 = kFourPi * 0.01;
        const double w_small = std::exp(s1);  // relative weight of the (d, d) chain
        const double p_two = w_small / (w_small + 1.0);
        const double oracle = -(p_two * std::log(p_two) +
                                (1.0 - p_two) * std::log(1.0 - p_two));
        CHECK(report.stream_count == 2);
        CHECK(report.s_rad == doctest::Approx(oracle).epsilon(1e-12));
    }

    SUBCASE("nonzero log N reweights by stream length")
    {
        CascadeConfig weighted = constant_n;
        weighted.log_n = -1.0;
        const auto report =
            radiation_entropy(kModel, NoHairVector(2, 0, 0, kUnits), kNeutralGrid, weighted);
        // two streams, lengths 1 and 2, weights proportional to e^{k log N}
        const double p_long = std::exp(-2.0) / (std::exp(-2.0) + std::exp(-1.0));
        const double oracle = -(p_long * std::log(p_long) +
                                (1.0 - p_long) * std::log(1.0 - p_long));
        CHECK(report.s_rad == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("ensemble runs are reproducible across worker counts")
{
    const NoHairVector x0(10, 0, 0, kUnits);
    CascadeConfig cfg;
    cfg.grid = kNeutralGrid;
    cfg.trajectories = 64;
    cfg.seed = 99;

    const auto serial = run_cascade_ensemble(kModel, x0, cfg, 1);
    const auto parallel = run_cascade_ensemble(kModel, x0, cfg, 8);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t t = 0; t < serial.size(); ++t) {
        REQUIRE(serial[t].size() == parallel[t].size());
        for (std::size_t k = 0; k < serial[t].size(); ++k)
            CHECK(serial[t].emissions()[k] == parallel[t].emissions()[k]);
    }
}

TEST_CASE("equal-irreducible-mass transitions have equal log weights")
{
    const EntropyModel model = EntropyModel::kerr_newman();

    SUBCASE("charged hole against its neutral partner")
    {
        const NoHairVector x1(10, 6, 0, UnitSystem{0.1, 0.1});  // M = 1, Q = 0.6
        const auto x1p = daughter(x1, {1, 0, 0});
        REQUIRE(x1p.has_value());
        const std::vector<PenrosePair> pairs = {
            {x1, *x1p, schwarzschild_of_mass(irreducible_mass(x1)),
             schwarzschild_of_mass(irreducible_mass(*x1p))}};
        const PenroseReport report = penrose_invariance_check(model, pairs);
        CHECK(report.evaluated == 1);
        CHECK(report.max_residual < 1e-9);
        CHECK(std::abs(report.rows[0].i_mother - 0.9) < 1e-12);
    }

    SUBCASE("identical transitions are exactly invariant")
    {
        const NoHairVector x(10, 0, 0, kUnits);
        const auto xp = daughter(x, {1, 0, 0});
        const std::vector<PenrosePair> pairs = {{x, *xp, x, *xp}};
        CHECK(penrose_invariance_check(model, pairs).max_residual == 0.0);
    }

    SUBCASE("a non-u(I) control model breaks the invariance")
    {
        const NoHairVector x1(10, 6, 0, UnitSystem{0.1, 0.1});
        const auto x1p = daughter(x1, {1, 0, 0});
        const std::vector<PenrosePair> pairs = {
            {x1, *x1p, schwarzschild_of_mass(irreducible_mass(x1)),
             schwarzschild_of_mass(irreducible_mass(*x1p))}};
        const EntropyFn control = [](double m, double q, double) {
            return kFourPi * m * m + q * q * q * q;
        };
        CHECK(penrose_invariance_check(control, pairs).max_residual > 1e-3);
    }

    SUBCASE("mismatched irreducible masses violate the precondition")
    {
        const NoHairVector x(10, 0, 0, kUnits);
        const auto xp = daughter(x, {1, 0, 0});
        const NoHairVector other(9, 0, 0, kUnits);
        const std::vector<PenrosePair> pairs = {{x, *xp, other, *xp}};
        CHECK_THROWS_AS((void)penrose_invariance_check(kModel, pairs), InvalidState);
    }
}

TEST_CASE("transition table stores only allowed emissions")
{
    const NoHairVector heavy(10, 0, 0, kUnits);
    const NoHairVector light(9, 0, 0, kUnits);
    const std::vector<std::pair<NoHairVector, NoHairVector>> pairs = {{heavy, light},
                                                                      {light, heavy}};
    const TransitionTable table = TransitionTable::build(kModel, pairs);
    REQUIRE(table.entries.size() == 1);
    CHECK(table.entries[0].log_theta ==
          doctest::Approx(kModel.entropy(light) - kModel.entropy(heavy)).epsilon(1e-12));
}

TEST_CASE("transition weights factor through the irreducible masses")
{
    // Independent route: theta(I, I') tabulated from neutral probes with
    // bilinear interpolation, compared against direct charged transitions.
    const EntropyModel model = EntropyModel::kerr_newman();
    const ThetaTable table(model, 0.85, 1.0, 2.5e-4);

    const UnitSystem units{0.01, 0.01};
    RandomStream rng(39);
    int tested = 0;
    double max_mismatch = 0.0;
    while (tested < 200) {
        const auto m = static_cast<std::int64_t>(88 + rng.next_below(25));
        const auto q = static_cast<std::int64_t>(rng.next_below(61)) - 30;
        const auto j = static_cast<std::int64_t>(rng.next_below(4));
        const auto state = NoHairVector::try_make(m, q, j, units);
        if (!state)
            continue;
        const double i_mother = irreducible_mass(*state);
        if (i_mother < 0.86 || i_mother > 0.99)
            continue;
        const ParticleTriple x{static_cast<std::int64_t>(1 + rng.next_below(3)),
                               static_cast<std::int64_t>(rng.next_below(3)) - 1, 0};
        const auto next = daughter(*state, x);
        if (!next || next->m_units() == 0)
            continue;
        const double i_daughter = irreducible_mass(*next);
        if (i_daughter < 0.86 || i_daughter > 0.99)
            continue;
        const double direct = model.entropy(*next) - model.entropy(*state);
        max_mismatch = std::max(max_mismatch, std::abs(direct - table(i_mother, i_daughter)));
        ++tested;
    }
    CHECK(max_mismatch < 1e-6);
}
