#include "horizonlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "horizonlab/cascade.hpp"
#include "horizonlab/funceq.hpp"
#include "horizonlab/haar.hpp"
#include "horizonlab/nohair.hpp"
#include "horizonlab/rng.hpp"
#include "horizonlab/spin.hpp"
#include "horizonlab/tunneling.hpp"

namespace horizonlab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Random subextremal charged/spinning state on the given grid.
NoHairVector random_admissible_state(const UnitSystem& units, RandomStream& rng)
{
    for (;;) {
        const auto m = static_cast<std::int64_t>(20 + rng.next_below(41));   // M in [1, 3]
        const auto q = static_cast<std::int64_t>(rng.next_below(21)) - 10;   // |Q| <= 0.5
        const auto j = static_cast<std::int64_t>(rng.next_below(5));         // J <= 1
        if (auto state = NoHairVector::try_make(m, q, j, units))
            return *state;
    }
}

ParticleTriple random_emission(RandomStream& rng, bool charged)
{
    const auto eps = static_cast<std::int64_t>(1 + rng.next_below(3));
    if (!charged)
        return {eps, 0, 0};
    const auto q = static_cast<std::int64_t>(rng.next_below(3)) - 1;
    const auto j = static_cast<std::int64_t>(rng.next_below(3)) - 1;
    return {eps, q, j};
}

bool both_orders_allowed(const NoHairVector& state, const ParticleTriple& x1,
                         const ParticleTriple& x2)
{
    const auto a = daughter(state, x1);
    const auto b = daughter(state, x2);
    return a && b && daughter(*a, x2) && daughter(*b, x1);
}

}  // namespace

CheckResult check_spectrum_ratio_law()
{
    const UnitSystem units{0.1, 1.0};
    const NoHairVector state(10, 0, 0, units);
    const EntropyModel model = EntropyModel::schwarzschild();
    const ChannelGrid grid{0.1, false, false, 0, 0};
    const EmissionSpectrum spec = spectrum(model, state, grid);

    const double mass = state.mass();
    double max_residual = 0.0;
    for (const auto& a : spec.entries)
        for (const auto& b : spec.entries) {
            const double eps_a = static_cast<double>(a.x.eps_units) * units.delta;
            const double eps_b = static_cast<double>(b.x.eps_units) * units.delta;
            const double lhs = (a.log_weight - spec.log_norm) - (b.log_weight - spec.log_norm);
            const double rhs = kFourPi * ((mass - eps_a) * (mass - eps_a) -
                                          (mass - eps_b) * (mass - eps_b));
            max_residual = std::max(max_residual, std::abs(lhs - rhs));
        }

    double prob_sum = 0.0;
    for (const auto& entry : spec.entries)
        prob_sum += entry.probability;

    CheckResult result;
    result.name = "spectrum_ratio_law";
    result.details = {{"channels", spec.entries.size()},
                      {"max_residual", max_residual},
                      {"probability_sum_error", std::abs(prob_sum - 1.0)},
                      {"tolerance", 1e-12}};
    result.pass = spec.entries.size() == 10 && max_residual <= 1e-12 &&
                  std::abs(prob_sum - 1.0) <= 1e-12;
    return result;
}

CheckResult check_exchange_symmetry(std::uint64_t seed)
{
    constexpr int kProbes = 10000;
    const UnitSystem units{0.05, 0.05};

    double max_residual = 0.0;
    for (const bool charged : {false, true}) {
        const EntropyModel model =
            charged ? EntropyModel::kerr_newman() : EntropyModel::schwarzschild();
        RandomStream rng(seed, charged ? 1 : 0);
        int accepted = 0;
        while (accepted < kProbes) {
            const NoHairVector state =
                charged ? random_admissible_state(units, rng)
                        : NoHairVector(static_cast<std::int64_t>(20 + rng.next_below(41)), 0, 0,
                                       units);
            const ParticleTriple x1 = random_emission(rng, charged);
            const ParticleTriple x2 = random_emission(rng, charged);
            if (!both_orders_allowed(state, x1, x2))
                continue;
            max_residual =
                std::max(max_residual, std::abs(exchange_residual(model, state, x1, x2)));
            ++accepted;
        }
    }

    RandomStream broken_rng(seed, 2);
    const ResidualReport broken =
        functional_residual(broken_kernel_eps_m2(0.0, 1.0), kProbes, broken_rng);

    CheckResult result;
    result.name = "exchange_symmetry";
    result.details = {{"probes_per_model", kProbes},
                      {"max_residual", max_residual},
                      {"tolerance", 1e-12},
                      {"broken_kernel_residual", broken.max_residual},
                      {"broken_kernel_threshold", 1e-3}};
    result.pass = max_residual <= 1e-12 && broken.max_residual >= 1e-3;
    return result;
}

CheckResult check_thermal_limit()
{
    const EntropyModel model = EntropyModel::schwarzschild();
    const double delta = 1e-4;

    double worst_slope_error = 0.0;
    double worst_gradient_error = 0.0;
    for (const double mass : {0.5, 1.0, 2.0}) {
        const auto m_units = static_cast<std::int64_t>(std::llround(mass / delta));
        const NoHairVector state(m_units, 0, 0, UnitSystem{delta, 1.0});
        const double expected = -8.0 * std::numbers::pi * state.mass();

        const double w1 = *log_tunneling_weight(model, state, {1, 0, 0});
        const double w2 = *log_tunneling_weight(model, state, {2, 0, 0});
        const double slope = (w2 - w1) / delta;
        worst_slope_error =
            std::max(worst_slope_error, std::abs(slope - expected) / std::abs(expected));

        const ThermalReference reference = thermal_reference(model, state, {1, 0, 0});
        const double gradient_slope = reference.value / delta;
        worst_gradient_error = std::max(worst_gradient_error,
                                        std::abs(gradient_slope - expected) / std::abs(expected));
    }

    CheckResult result;
    result.name = "thermal_limit";
    result.details = {{"eps", delta},
                      {"max_relative_slope_error", worst_slope_error},
                      {"max_relative_gradient_error", worst_gradient_error},
                      {"tolerance", 0.005}};
    result.pass = worst_slope_error <= 0.005 && worst_gradient_error <= 0.005;
    return result;
}

CheckResult check_cascade_telescoping(std::uint64_t seed, int workers)
{
    const UnitSystem units{0.05, 1.0};
    const NoHairVector x0(20, 0, 0, units);
    const EntropyModel model = EntropyModel::schwarzschild();

    CascadeConfig cfg;
    cfg.grid = ChannelGrid{0.05, false, false, 0, 0};
    cfg.trajectories = 1000;
    cfg.seed = seed;

    const auto streams = run_cascade_ensemble(model, x0, cfg, workers);
    const double s0 = model.entropy(x0);

    double max_residual = 0.0;
    bool ledgers_exact = true;
    std::int64_t total_steps = 0;
    for (const RadiationStream& stream : streams) {
        max_residual =
            std::max(max_residual, std::abs(stream_log_weight(model, stream) + s0));
        const Ledger expected{x0.m_units(), x0.q_units(), x0.j_half_units()};
        ledgers_exact = ledgers_exact && stream.ledger() == expected && stream.complete();
        total_steps += static_cast<std::int64_t>(stream.size());
    }

    CheckResult result;
    result.name = "cascade_telescoping";
    result.details = {{"trajectories", cfg.trajectories},
                      {"max_residual", max_residual},
                      {"tolerance", 1e-9},
                      {"ledgers_exact", ledgers_exact},
                      {"total_steps", total_steps}};
    result.pass = max_residual <= 1e-9 && ledgers_exact;
    return result;
}

CheckResult check_radiation_entropy()
{
    const UnitSystem units{0.1, 1.0};
    const NoHairVector x0(5, 0, 0, units);
    const EntropyModel model = EntropyModel::schwarzschild();
    const ChannelGrid grid{0.1, false, false, 0, 0};

    const auto streams = enumerate_streams(model, x0, grid);
    const double s0 = model.entropy(x0);
    double max_weight_residual = 0.0;
    for (const auto& [stream, log_weight] : streams)
        max_weight_residual = std::max(max_weight_residual, std::abs(log_weight + s0));

    CascadeConfig cfg;
    cfg.mode = CascadeConfig::Mode::ConstantN;
    cfg.log_n = 0.0;
    cfg.grid = grid;
    const RadiationEntropyReport report = radiation_entropy(model, x0, grid, cfg);

    const double expected_entropy = std::log(16.0);
    const double identity_residual = std::abs(report.s_rad - (s0 - report.ln_nprime));

    CheckResult result;
    result.name = "radiation_entropy";
    result.details = {{"stream_count", report.stream_count},
                      {"expected_streams", 16},
                      {"s_rad", report.s_rad},
                      {"expected_s_rad", expected_entropy},
                      {"equal_weight_residual", max_weight_residual},
                      {"ln_nprime", report.ln_nprime},
                      {"identity_residual", identity_residual},
                      {"tolerance", 1e-9}};
    result.pass = report.stream_count == 16 &&
                  std::abs(report.s_rad - expected_entropy) <= 1e-9 &&
                  max_weight_residual <= 1e-9 && identity_residual <= 1e-9;
    return result;
}

CheckResult check_funceq_reconstruction()
{
    const double quad_step = 1e-3;

    // Quadratic-entropy kernel: f must come back as 4 pi M^2, h as zero.
    const CandidateKernel reference = schwarzschild_kernel(0.0, 1.0);
    const SolutionDecomposition decomp = reconstruct_f(reference, quad_step);
    double f_error = 0.0;
    double h_error = 0.0;
    for (std::size_t k = 0; k < decomp.f_values.size(); ++k) {
        const double m = decomp.m_min + decomp.step * static_cast<double>(k);
        f_error = std::max(f_error, std::abs(decomp.f_values[k] - kFourPi * m * m));
        h_error = std::max(h_error, std::abs(decomp.h_values[k]));
    }

    // Planted (f, h) round trip; the gauge pins f(m_min) = 0 and h'(0) = 0.
    const auto planted_f = [](double m) { return std::sin(2.0 * m) + m * m; };
    const auto planted_h = [](double eps) { return 0.3 * eps * eps; };
    const CandidateKernel planted = planted_kernel(planted_f, planted_h, 0.0, 1.0);
    const SolutionDecomposition round_trip = reconstruct_f(planted, quad_step);
    double planted_f_error = 0.0;
    double planted_h_error = 0.0;
    for (std::size_t k = 0; k < round_trip.f_values.size(); ++k) {
        const double m = round_trip.m_min + round_trip.step * static_cast<double>(k);
        planted_f_error =
            std::max(planted_f_error, std::abs(round_trip.f_values[k] -
                                               (planted_f(m) - planted_f(round_trip.m_min))));
        planted_h_error =
            std::max(planted_h_error, std::abs(round_trip.h_values[k] -
                                               planted_h(round_trip.step *
                                                         static_cast<double>(k))));
    }

    RandomStream rng(0x07ac1e);
    const ResidualReport fit = verify_decomposition(planted, round_trip, 2000, rng);
    const double pde = pde_residual(reference, 1e-4);

    CheckResult result;
    result.name = "funceq_reconstruction";
    result.details = {{"quad_step", quad_step},
                      {"f_sup_error", f_error},
                      {"h_sup_error", h_error},
                      {"planted_f_sup_error", planted_f_error},
                      {"planted_h_sup_error", planted_h_error},
                      {"decomposition_residual", fit.max_residual},
                      {"reconstruction_tolerance", 1e-5},
                      {"pde_residual", pde},
                      {"pde_tolerance", 1e-6}};
    result.pass = f_error <= 1e-5 && h_error <= 1e-5 && planted_f_error <= 1e-5 &&
                  planted_h_error <= 1e-5 && fit.max_residual <= 1e-5 && pde <= 1e-6;
    return result;
}

std::vector<PenrosePair> make_equal_i_pairs(std::uint64_t seed, int count)
{
    const UnitSystem units{0.01, 0.01};
    RandomStream rng(seed, 7);

    std::vector<PenrosePair> pairs;
    // The reference pair: a charged hole and its equal-I neutral partner.
    {
        const NoHairVector x1(10, 6, 0, UnitSystem{0.1, 0.1});
        const NoHairVector x1p = *daughter(x1, {1, 0, 0});
        pairs.push_back({x1, x1p, schwarzschild_of_mass(irreducible_mass(x1)),
                         schwarzschild_of_mass(irreducible_mass(x1p))});
    }
    while (pairs.size() < static_cast<std::size_t>(count)) {
        const auto m = static_cast<std::int64_t>(80 + rng.next_below(41));
        const auto q = static_cast<std::int64_t>(rng.next_below(81)) - 40;
        const auto j = static_cast<std::int64_t>(rng.next_below(4));
        const auto x1 = NoHairVector::try_make(m, q, j, units);
        if (!x1)
            continue;
        const ParticleTriple x{static_cast<std::int64_t>(1 + rng.next_below(5)),
                               static_cast<std::int64_t>(rng.next_below(5)) - 2,
                               static_cast<std::int64_t>(rng.next_below(2))};
        const auto x1p = daughter(*x1, x);
        if (!x1p || x1p->m_units() == 0)
            continue;
        // charge-shedding emissions can raise I; the neutral partner side
        // must itself be an emission, so keep I-decreasing transitions only
        if (irreducible_mass(*x1p) >= irreducible_mass(*x1))
            continue;
        pairs.push_back({*x1, *x1p, schwarzschild_of_mass(irreducible_mass(*x1)),
                         schwarzschild_of_mass(irreducible_mass(*x1p))});
    }
    return pairs;
}

CheckResult check_penrose_invariance(std::uint64_t seed)
{
    const EntropyModel model = EntropyModel::kerr_newman();
    const auto pairs = make_equal_i_pairs(seed, 100);
    const PenroseReport invariant = penrose_invariance_check(model, pairs);

    // Control: an entropy that is not a function of I alone must break it.
    const EntropyFn control = [](double mass, double charge, double) {
        return kFourPi * mass * mass + charge * charge * charge * charge;
    };
    const PenroseReport broken = penrose_invariance_check(control, pairs);

    CheckResult result;
    result.name = "penrose_invariance";
    result.details = {{"pairs", pairs.size()},
                      {"evaluated", invariant.evaluated},
                      {"skipped", invariant.skipped},
                      {"max_residual", invariant.max_residual},
                      {"tolerance", 1e-9},
                      {"control_residual", broken.max_residual},
                      {"control_threshold", 1e-3}};
    result.pass = invariant.evaluated == 100 && invariant.max_residual <= 1e-9 &&
                  broken.max_residual >= 1e-3;
    return result;
}

CheckResult check_haar_permutation(std::uint64_t seed)
{
    constexpr int kDim = 16;
    constexpr int kR1 = 2;
    constexpr int kR2 = 4;
    constexpr std::int64_t kSamples = 100000;

    RandomStream rng(seed, 8);
    const PureState input = PureState::basis(kDim, 0);
    const PermutationSymmetryReport report =
        permutation_symmetry_test(input, kR1, kR2, kSamples, rng);

    const double uniform = 1.0 / static_cast<double>(kR1 * kR2);
    const double cell_sigma =
        std::sqrt(uniform * (1.0 - uniform) / static_cast<double>(kSamples));
    double max_cell_deviation = 0.0;
    for (const auto* joint : {&report.forward, &report.swapped})
        for (int r = 0; r < joint->probability.rows(); ++r)
            for (int c = 0; c < joint->probability.cols(); ++c)
                max_cell_deviation =
                    std::max(max_cell_deviation, std::abs(joint->probability(r, c) - uniform));

    const double max_unitarity = std::max(report.forward.max_unitarity_residual,
                                          report.swapped.max_unitarity_residual);

    CheckResult result;
    result.name = "haar_permutation_symmetry";
    result.details = {{"dim", kDim},
                      {"d_r1", kR1},
                      {"d_r2", kR2},
                      {"samples", kSamples},
                      {"tv_distance", report.tv_distance},
                      {"tv_tolerance", 0.01},
                      {"max_cell_deviation", max_cell_deviation},
                      {"cell_tolerance_4sigma", 4.0 * cell_sigma},
                      {"max_unitarity_residual", max_unitarity},
                      {"unitarity_tolerance", 1e-12}};
    result.pass = report.tv_distance <= 0.01 && max_cell_deviation <= 4.0 * cell_sigma &&
                  max_unitarity <= 1e-12;
    return result;
}

CheckResult check_spin_classification()
{
    double max_residual = 0.0;
    double max_half_eigenvalue_error = 0.0;
    bool class_counts_ok = true;
    bool anomalous_found = false;
    bool anomalous_all_excluded = true;

    for (int twice_jp = 0; twice_jp <= 6; ++twice_jp) {
        for (int twice_j = 0; twice_j <= 6; ++twice_j) {
            const auto classification =
                classify_eigenstates(HalfInt(twice_jp), HalfInt(twice_j));
            for (const auto& entry : classification.entries)
                max_residual = std::max(max_residual, entry.residual);

            if (twice_j > 2) {
                const bool two_standard =
                    classification.entries.size() == 2 &&
                    classification.entries[0].cls == StateClass::StandardUp &&
                    classification.entries[1].cls == StateClass::StandardDown &&
                    classification.genuine_dimension == 2;
                class_counts_ok = class_counts_ok && two_standard;
            }
            if (twice_j == 1) {
                const double jp = 0.5 * static_cast<double>(twice_jp);
                for (const auto& entry : classification.entries) {
                    const double expected =
                        entry.cls == StateClass::HalfIntegerPlus ? jp : -1.0 - jp;
                    max_half_eigenvalue_error = std::max(
                        max_half_eigenvalue_error, std::abs(entry.eigenvalue - expected));
                }
                const std::size_t expected_families = twice_jp >= 1 ? 2 : 1;
                class_counts_ok = class_counts_ok &&
                                  classification.entries.size() == expected_families &&
                                  classification.genuine_dimension == 2 * (twice_jp + 1);
            }
            if (twice_j == 2) {
                const bool expect_anomalous = twice_jp >= 2 && twice_jp % 2 == 0;
                const auto filtered = conservation_filter(
                    classification, HalfInt(twice_jp + twice_j), 0.4, 1.1);
                bool found = false;
                for (const auto& entry : filtered.entries) {
                    max_residual = std::max(max_residual, entry.axis_residual);
                    if (entry.cls == StateClass::AnomalousJ1) {
                        found = true;
                        anomalous_all_excluded = anomalous_all_excluded && !entry.conserved;
                    }
                }
                anomalous_found = anomalous_found || found;
                class_counts_ok = class_counts_ok && found == expect_anomalous &&
                                  classification.genuine_dimension ==
                                      (expect_anomalous ? 3 : 2);
            }
        }
    }

    CheckResult result;
    result.name = "spin_classification";
    result.details = {{"max_eigen_residual", max_residual},
                      {"residual_tolerance", 1e-10},
                      {"max_half_integer_eigenvalue_error", max_half_eigenvalue_error},
                      {"class_counts_ok", class_counts_ok},
                      {"anomalous_found", anomalous_found},
                      {"anomalous_excluded", anomalous_all_excluded}};
    result.pass = max_residual <= 1e-10 && max_half_eigenvalue_error <= 1e-10 &&
                  class_counts_ok && anomalous_found && anomalous_all_excluded;
    return result;
}

CheckResult check_irreducible_mass()
{
    struct Case {
        NoHairVector state;
        double expected;
    };
    const UnitSystem units{0.1, 1.0};
    const std::vector<Case> cases = {
        {NoHairVector(10, 0, 0, units), 1.0},
        {NoHairVector(10, 1, 0, units), 0.5},
        {NoHairVector(10, 0, 2, units), 1.0 / std::sqrt(2.0)},
    };

    double max_error = 0.0;
    double max_oracle_error = 0.0;
    for (const Case& c : cases) {
        const double i = irreducible_mass(c.state);
        max_error = std::max(max_error, std::abs(i - c.expected));

        const double mass = c.state.mass();
        const double charge = c.state.charge();
        const double a = c.state.spin() / mass;
        const double r_plus =
            mass + std::sqrt(mass * mass - charge * charge - a * a);
        const double oracle = 0.5 * std::sqrt(r_plus * r_plus + a * a);
        max_oracle_error = std::max(max_oracle_error, std::abs(i - oracle));
    }

    CheckResult result;
    result.name = "irreducible_mass";
    result.details = {{"max_error", max_error},
                      {"max_oracle_error", max_oracle_error},
                      {"tolerance", 1e-12}};
    result.pass = max_error <= 1e-12 && max_oracle_error <= 1e-12;
    return result;
}

std::vector<CheckResult> run_all_checks(std::uint64_t seed, int workers)
{
    std::vector<CheckResult> results;
    results.push_back(check_spectrum_ratio_law());
    results.push_back(check_exchange_symmetry(seed));
    results.push_back(check_thermal_limit());
    results.push_back(check_cascade_telescoping(seed, workers));
    results.push_back(check_radiation_entropy());
    results.push_back(check_funceq_reconstruction());
    results.push_back(check_penrose_invariance(seed));
    results.push_back(check_haar_permutation(seed));
    results.push_back(check_spin_classification());
    results.push_back(check_irreducible_mass());
    return results;
}

}  // namespace horizonlab
