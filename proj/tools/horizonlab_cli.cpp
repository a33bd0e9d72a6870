// horizonlab command-line front end: emission spectra, evaporation cascade
// ensembles, and the verification suite, with reproducible seeded output.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage/config error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "horizonlab/cascade.hpp"
#include "horizonlab/funceq.hpp"
#include "horizonlab/haar.hpp"
#include "horizonlab/nohair.hpp"
#include "horizonlab/parallel.hpp"
#include "horizonlab/serialize.hpp"
#include "horizonlab/spin.hpp"
#include "horizonlab/tunneling.hpp"
#include "horizonlab/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using horizonlab::NoHairVector;
using horizonlab::UnitSystem;
using nlohmann::json;

struct StateArgs {
    std::string model = "schwarzschild";
    double mass = 1.0;
    double delta = 0.1;
    std::int64_t charge_units = 0;
    double charge_quantum = 1.0;
    std::int64_t spin_half_units = 0;
    double theta = 0.0;
    double phi = 0.0;
    bool enable_charge = false;
    bool enable_spin = false;
    std::int64_t q_max = 1;
    std::int64_t j_max = 1;
};

void add_state_options(CLI::App* cmd, StateArgs* args)
{
    cmd->add_option("--model", args->model, "entropy model: schwarzschild | kerr-newman")
        ->check(CLI::IsMember({"schwarzschild", "kerr-newman"}));
    cmd->add_option("--mass", args->mass, "initial mass in Planck units");
    cmd->add_option("--delta", args->delta, "energy grid unit");
    cmd->add_option("--charge-units", args->charge_units, "initial charge in quanta");
    cmd->add_option("--charge-quantum", args->charge_quantum, "charge per quantum");
    cmd->add_option("--spin-half-units", args->spin_half_units,
                    "initial angular momentum in half units");
    cmd->add_option("--theta", args->theta, "axis polar angle");
    cmd->add_option("--phi", args->phi, "axis azimuthal angle");
    cmd->add_flag("--enable-charge", args->enable_charge, "enumerate charged channels");
    cmd->add_flag("--enable-spin", args->enable_spin, "enumerate spinning channels");
    cmd->add_option("--qmax", args->q_max, "max |q| per emission");
    cmd->add_option("--jmax", args->j_max, "max |j| per emission, half units");
}

json state_args_to_json(const StateArgs& args)
{
    return {{"model", args.model},
            {"mass", args.mass},
            {"delta", args.delta},
            {"charge_units", args.charge_units},
            {"charge_quantum", args.charge_quantum},
            {"spin_half_units", args.spin_half_units},
            {"theta", args.theta},
            {"phi", args.phi},
            {"enable_charge", args.enable_charge},
            {"enable_spin", args.enable_spin},
            {"qmax", args.q_max},
            {"jmax", args.j_max}};
}

void state_args_from_json(const json& doc, StateArgs* args)
{
    args->model = doc.value("model", args->model);
    args->mass = doc.value("mass", args->mass);
    args->delta = doc.value("delta", args->delta);
    args->charge_units = doc.value("charge_units", args->charge_units);
    args->charge_quantum = doc.value("charge_quantum", args->charge_quantum);
    args->spin_half_units = doc.value("spin_half_units", args->spin_half_units);
    args->theta = doc.value("theta", args->theta);
    args->phi = doc.value("phi", args->phi);
    args->enable_charge = doc.value("enable_charge", args->enable_charge);
    args->enable_spin = doc.value("enable_spin", args->enable_spin);
    args->q_max = doc.value("qmax", args->q_max);
    args->j_max = doc.value("jmax", args->j_max);
}

json load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw CLI::ValidationError("--config", "cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& err) {
        throw CLI::ValidationError("--config", err.what());
    }
    return doc;
}

horizonlab::EntropyModel make_model(const std::string& name)
{
    if (name == "kerr-newman" || name == "kerr_newman")
        return horizonlab::EntropyModel::kerr_newman();
    if (name == "schwarzschild")
        return horizonlab::EntropyModel::schwarzschild();
    throw CLI::ValidationError("--model", "unknown model " + name);
}

NoHairVector make_state(const StateArgs& args)
{
    if (args.delta <= 0.0)
        throw CLI::ValidationError("--delta", "must be positive");
    const auto m_units = static_cast<std::int64_t>(std::llround(args.mass / args.delta));
    if (std::abs(static_cast<double>(m_units) * args.delta - args.mass) >
        1e-9 * std::max(1.0, std::abs(args.mass)))
        throw CLI::ValidationError("--mass", "mass must be an integer multiple of delta");
    try {
        return NoHairVector(m_units, args.charge_units, args.spin_half_units,
                            UnitSystem{args.delta, args.charge_quantum}, args.theta, args.phi);
    } catch (const horizonlab::InvalidState& err) {
        throw CLI::ValidationError("state", err.what());
    }
}

horizonlab::ChannelGrid make_grid(const StateArgs& args)
{
    return horizonlab::ChannelGrid{args.delta, args.enable_charge, args.enable_spin, args.q_max,
                                   args.j_max};
}

std::unique_ptr<std::ofstream> open_output(const std::string& path)
{
    if (path.empty())
        return nullptr;
    auto out = std::make_unique<std::ofstream>(path);
    if (!*out)
        throw CLI::ValidationError("--output", "cannot open " + path);
    return out;
}

std::ostream& select(std::unique_ptr<std::ofstream>& file)
{
    return file ? static_cast<std::ostream&>(*file) : std::cout;
}

json report_header(const json& config, std::uint64_t seed)
{
    return {{"version", kVersion},
            {"seed", seed},
            {"config", config},
            {"config_hash", horizonlab::config_hash(config)}};
}

// ---------------------------------------------------------------- spectrum

int run_spectrum(const StateArgs& args, const std::string& output, const std::string& format)
{
    const auto model = make_model(args.model);
    const auto state = make_state(args);
    const auto spec = horizonlab::spectrum(model, state, make_grid(args));

    auto file = open_output(output);
    if (format == "json")
        select(file) << horizonlab::spectrum_to_json(spec).dump(2) << '\n';
    else
        horizonlab::write_spectrum_csv(select(file), spec);
    return 0;
}

// ----------------------------------------------------------------- cascade

int run_cascade_cmd(const StateArgs& args, std::uint64_t seed, std::int64_t trajectories,
                    const std::string& mode, double log_n, const std::string& output,
                    const std::string& histogram)
{
    const auto model = make_model(args.model);
    const auto x0 = make_state(args);

    horizonlab::CascadeConfig cfg;
    cfg.mode = mode == "constant-n" ? horizonlab::CascadeConfig::Mode::ConstantN
                                    : horizonlab::CascadeConfig::Mode::Sampling;
    cfg.log_n = log_n;
    cfg.trajectories = trajectories;
    cfg.seed = seed;
    cfg.grid = make_grid(args);

    const auto streams =
        horizonlab::run_cascade_ensemble(model, x0, cfg, horizonlab::worker_count());

    if (!output.empty()) {
        // sidecar manifest so the ensemble can be reproduced exactly
        json manifest = state_args_to_json(args);
        manifest["seed"] = seed;
        manifest["trajectories"] = trajectories;
        manifest["mode"] = mode;
        manifest["log_n"] = log_n;
        json wrapped = report_header(manifest, seed);
        std::ofstream mf(output + ".config.json");
        if (mf)
            mf << wrapped.dump(2) << '\n';
    }

    auto file = open_output(output);
    std::ostream& out = select(file);
    std::map<std::size_t, std::int64_t> lengths;
    for (std::size_t t = 0; t < streams.size(); ++t) {
        const double w =
            horizonlab::stream_log_weight(model, streams[t], cfg.effective_log_n());
        out << horizonlab::trajectory_to_json(static_cast<std::int64_t>(t), streams[t], w).dump()
            << '\n';
        ++lengths[streams[t].size()];
    }

    if (!histogram.empty()) {
        std::ofstream hist(histogram);
        if (!hist)
            throw CLI::ValidationError("--histogram", "cannot open " + histogram);
        hist << "length,count\n";
        for (const auto& [length, count] : lengths)
            hist << length << ',' << count << '\n';
    }
    return 0;
}

// ------------------------------------------------------------ verify-funceq

horizonlab::CandidateKernel kernel_from_spec(const json& spec)
{
    const std::string family = spec.value("family", "schwarzschild");
    const double m_min = spec.value("m_min", 0.0);
    const double m_max = spec.value("m_max", 1.0);
    if (family == "schwarzschild")
        return horizonlab::schwarzschild_kernel(m_min, m_max);
    if (family == "broken") {
        const std::string form = spec.value("form", "eps_m2");
        if (form != "eps_m2")
            throw CLI::ValidationError("--kernel", "unknown broken form " + form);
        return horizonlab::broken_kernel_eps_m2(m_min, m_max);
    }
    if (family == "planted") {
        const std::string f_name = spec.value("f", "schwarzschild");
        const std::string h_name = spec.value("h", "zero");
        const double h_coeff = spec.value("h_coeff", 0.3);
        std::function<double(double)> f;
        if (f_name == "schwarzschild")
            f = [](double m) { return 4.0 * 3.14159265358979323846 * m * m; };
        else if (f_name == "sin")
            f = [](double m) { return std::sin(2.0 * m) + m * m; };
        else
            throw CLI::ValidationError("--kernel", "unknown planted f " + f_name);
        std::function<double(double)> h;
        if (h_name == "zero")
            h = [](double) { return 0.0; };
        else if (h_name == "linear")
            h = [h_coeff](double eps) { return h_coeff * eps; };
        else if (h_name == "quadratic")
            h = [h_coeff](double eps) { return h_coeff * eps * eps; };
        else
            throw CLI::ValidationError("--kernel", "unknown planted h " + h_name);
        return horizonlab::planted_kernel(std::move(f), std::move(h), m_min, m_max);
    }
    throw CLI::ValidationError("--kernel", "unknown kernel family " + family);
}

int run_verify_funceq(const json& kernel_spec, std::int64_t probes, double quad_step,
                      double pde_step, std::uint64_t seed, const std::string& output)
{
    const auto kernel = kernel_from_spec(kernel_spec);

    horizonlab::RandomStream rng(seed, 0);
    const auto exchange = horizonlab::functional_residual(kernel, probes, rng);
    const double pde = horizonlab::pde_residual(kernel, pde_step);
    horizonlab::RandomStream cauchy_rng(seed, 1);
    const auto cauchy = horizonlab::cauchy_special_case(kernel, probes, cauchy_rng);

    double reconstruction_error = -1.0;
    bool reconstructed = false;
    try {
        const auto decomp = horizonlab::reconstruct_f(kernel, quad_step);
        horizonlab::RandomStream verify_rng(seed, 2);
        reconstruction_error =
            horizonlab::verify_decomposition(kernel, decomp, probes, verify_rng).max_residual;
        reconstructed = true;
    } catch (const horizonlab::KernelRejected&) {
        reconstructed = false;
    }

    const bool pass = exchange.max_residual <= 1e-10 && pde <= 1e-6 && reconstructed &&
                      reconstruction_error <= 1e-5;

    json report = report_header(
        {{"kernel", kernel_spec}, {"probes", probes}, {"quad_step", quad_step},
         {"pde_step", pde_step}},
        seed);
    report["functional_residual"] = exchange.max_residual;
    report["pde_residual"] = pde;
    report["reconstruction_error"] = reconstruction_error;
    report["reconstructed"] = reconstructed;
    report["cauchy_residual"] = cauchy.max_residual;
    report["pass"] = pass;

    auto file = open_output(output);
    select(file) << report.dump(2) << '\n';
    return pass ? 0 : 1;
}

// -------------------------------------------------------------- verify-haar

int run_verify_haar(int dim, int d_r1, int d_r2, std::int64_t samples, std::uint64_t seed,
                    bool haar_input, const std::string& output)
{
    horizonlab::RandomStream rng(seed, 0);
    const auto input = haar_input ? horizonlab::PureState::haar_random(dim, rng)
                                  : horizonlab::PureState::basis(dim, 0);
    const auto report =
        horizonlab::permutation_symmetry_test(input, d_r1, d_r2, samples, rng);

    json mean = json::array();
    for (int r = 0; r < report.forward.probability.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < report.forward.probability.cols(); ++c)
            row.push_back(report.forward.probability(r, c));
        mean.push_back(std::move(row));
    }

    json out = report_header({{"dim", dim},
                              {"dr1", d_r1},
                              {"dr2", d_r2},
                              {"samples", samples},
                              {"haar_input", haar_input}},
                             seed);
    out["tv_distance"] = report.tv_distance;
    out["threshold"] = report.threshold;
    out["verdict"] = report.pass ? "pass" : "fail";
    out["mean_distribution"] = std::move(mean);
    out["max_unitarity_residual"] = std::max(report.forward.max_unitarity_residual,
                                             report.swapped.max_unitarity_residual);

    auto file = open_output(output);
    select(file) << out.dump(2) << '\n';
    return report.pass ? 0 : 1;
}

// -------------------------------------------------------------- verify-spin

int run_verify_spin(double jp_max, double j_max, const std::string& output,
                    const std::string& summary_path)
{
    const auto jp_cap = horizonlab::HalfInt::from_double(jp_max);
    const auto j_cap = horizonlab::HalfInt::from_double(j_max);

    std::vector<horizonlab::EvaporationClassification> table;
    bool all_residuals_ok = true;
    bool anomalous_excluded = true;
    for (int twice_jp = 0; twice_jp <= jp_cap.twice; ++twice_jp)
        for (int twice_j = 0; twice_j <= j_cap.twice; ++twice_j) {
            auto classification = horizonlab::classify_eigenstates(
                horizonlab::HalfInt(twice_jp), horizonlab::HalfInt(twice_j));
            classification = horizonlab::conservation_filter(
                classification, horizonlab::HalfInt(twice_jp + twice_j));
            for (const auto& entry : classification.entries) {
                all_residuals_ok = all_residuals_ok && entry.residual <= 1e-10;
                if (entry.cls == horizonlab::StateClass::AnomalousJ1)
                    anomalous_excluded = anomalous_excluded && !entry.conserved;
            }
            table.push_back(std::move(classification));
        }

    auto file = open_output(output);
    horizonlab::write_spin_csv(select(file), table);

    json summary =
        report_header({{"jp_max", jp_max}, {"j_max", j_max}}, 0);
    summary.erase("seed");  // the sweep is deterministic
    summary["cases"] = table.size();
    summary["all_residuals_ok"] = all_residuals_ok;
    summary["anomalous_excluded"] = anomalous_excluded;
    if (!summary_path.empty()) {
        std::ofstream s(summary_path);
        if (!s)
            throw CLI::ValidationError("--summary", "cannot open " + summary_path);
        s << summary.dump(2) << '\n';
    } else if (!output.empty()) {
        std::cout << summary.dump(2) << '\n';
    }
    return all_residuals_ok && anomalous_excluded ? 0 : 1;
}

// ----------------------------------------------------------- verify-penrose

int run_verify_penrose(int count, std::uint64_t seed, const std::string& output)
{
    const auto pairs = horizonlab::make_equal_i_pairs(seed, count);
    const auto report =
        horizonlab::penrose_invariance_check(horizonlab::EntropyModel::kerr_newman(), pairs);

    auto file = open_output(output);
    horizonlab::write_penrose_csv(select(file), report);
    const bool pass = report.max_residual <= 1e-9 && report.evaluated == count;
    if (!pass)
        std::cerr << "verify-penrose: max residual " << report.max_residual << '\n';
    return pass ? 0 : 1;
}

// --------------------------------------------------------------- verify-all

int run_verify_all(std::uint64_t seed, const std::string& output)
{
    const int workers = horizonlab::worker_count();
    const auto results = horizonlab::run_all_checks(seed, workers);

    bool all_pass = true;
    json checks = json::array();
    for (const auto& check : results) {
        std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << '\n';
        all_pass = all_pass && check.pass;
        checks.push_back({{"name", check.name}, {"pass", check.pass}, {"details", check.details}});
    }

    json report = report_header({{"command", "verify-all"}}, seed);
    report["checks"] = std::move(checks);
    report["all_pass"] = all_pass;

    if (!output.empty()) {
        std::ofstream out(output);
        if (!out)
            throw CLI::ValidationError("--output", "cannot open " + output);
        out << report.dump(2) << '\n';
    }
    std::cout << (all_pass ? "all checks passed" : "CHECK FAILURES PRESENT") << '\n';
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"horizonlab: discrete black-hole evaporation simulator and verifier"};
    app.require_subcommand(1);

    StateArgs state_args;
    std::string config_path;
    std::string output;
    std::string format = "csv";
    std::uint64_t seed = 42;

    // spectrum
    auto* spectrum_cmd = app.add_subcommand("spectrum", "emission spectrum of one state");
    add_state_options(spectrum_cmd, &state_args);
    spectrum_cmd->add_option("--config", config_path, "JSON config overriding flags");
    spectrum_cmd->add_option("--output", output, "output path (default stdout)");
    spectrum_cmd->add_option("--format", format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    // cascade
    StateArgs cascade_args;
    cascade_args.mass = 0.2;
    std::int64_t trajectories = 1000;
    std::string mode = "sampling";
    double log_n = 0.0;
    std::string histogram;
    auto* cascade_cmd = app.add_subcommand("cascade", "evaporation cascade ensemble");
    add_state_options(cascade_cmd, &cascade_args);
    cascade_cmd->add_option("--config", config_path, "JSON config overriding flags");
    cascade_cmd->add_option("--seed", seed, "random seed");
    cascade_cmd->add_option("--trajectories", trajectories, "trajectory count");
    cascade_cmd->add_option("--mode", mode, "sampling | constant-n")
        ->check(CLI::IsMember({"sampling", "constant-n"}));
    cascade_cmd->add_option("--log-n", log_n, "log N in constant-n accounting");
    cascade_cmd->add_option("--output", output, "JSON-lines output path (default stdout)");
    cascade_cmd->add_option("--histogram", histogram, "stream-length histogram CSV path");

    // verify-funceq
    std::string kernel_path;
    std::string family = "schwarzschild";
    std::string planted_h = "zero";
    double h_coeff = 0.3;
    std::int64_t probes = 10000;
    double quad_step = 1e-3;
    double pde_step = 1e-4;
    auto* funceq_cmd = app.add_subcommand("verify-funceq", "functional-equation laboratory");
    funceq_cmd->add_option("--kernel", kernel_path, "kernel spec JSON path");
    funceq_cmd->add_option("--family", family, "schwarzschild | planted | broken");
    funceq_cmd->add_option("--h-form", planted_h, "planted h: zero | linear | quadratic");
    funceq_cmd->add_option("--h-coeff", h_coeff, "planted h coefficient");
    funceq_cmd->add_option("--probes", probes, "probe count");
    funceq_cmd->add_option("--quad-step", quad_step, "quadrature step");
    funceq_cmd->add_option("--pde-step", pde_step, "finite-difference step");
    funceq_cmd->add_option("--seed", seed, "random seed");
    funceq_cmd->add_option("--output", output, "report path (default stdout)");

    // verify-haar
    int dim = 16;
    int d_r1 = 2;
    int d_r2 = 4;
    std::int64_t samples = 100000;
    bool haar_input = false;
    auto* haar_cmd = app.add_subcommand("verify-haar", "order-swap symmetry test");
    haar_cmd->add_option("--dim", dim, "Hilbert dimension");
    haar_cmd->add_option("--dr1", d_r1, "first emission dimension");
    haar_cmd->add_option("--dr2", d_r2, "second emission dimension");
    haar_cmd->add_option("--samples", samples, "Monte Carlo samples");
    haar_cmd->add_option("--seed", seed, "random seed");
    haar_cmd->add_flag("--haar-input", haar_input, "Haar-random input state");
    haar_cmd->add_option("--output", output, "report path (default stdout)");

    // verify-spin
    double jp_max = 3.0;
    double j_max = 3.0;
    std::string summary_path;
    auto* spin_cmd = app.add_subcommand("verify-spin", "coupled-spin classification sweep");
    spin_cmd->add_option("--jp-max", jp_max, "max particle spin");
    spin_cmd->add_option("--j-max", j_max, "max hole spin");
    spin_cmd->add_option("--output", output, "CSV table path (default stdout)");
    spin_cmd->add_option("--summary", summary_path, "JSON summary path");

    // verify-penrose
    int pair_count = 100;
    auto* penrose_cmd =
        app.add_subcommand("verify-penrose", "equal-irreducible-mass invariance");
    penrose_cmd->add_option("--pairs", pair_count, "pair count");
    penrose_cmd->add_option("--seed", seed, "random seed");
    penrose_cmd->add_option("--output", output, "CSV output path (default stdout)");

    // verify-all
    auto* all_cmd = app.add_subcommand("verify-all", "run the full verification suite");
    all_cmd->add_option("--seed", seed, "random seed");
    all_cmd->add_option("--output", output, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (spectrum_cmd->parsed()) {
            if (!config_path.empty())
                state_args_from_json(load_config(config_path), &state_args);
            return run_spectrum(state_args, output, format);
        }
        if (cascade_cmd->parsed()) {
            if (!config_path.empty()) {
                const json doc = load_config(config_path);
                state_args_from_json(doc, &cascade_args);
                seed = doc.value("seed", seed);
                trajectories = doc.value("trajectories", trajectories);
                mode = doc.value("mode", mode);
                log_n = doc.value("log_n", log_n);
            }
            return run_cascade_cmd(cascade_args, seed, trajectories, mode, log_n, output,
                                   histogram);
        }
        if (funceq_cmd->parsed()) {
            json spec;
            if (!kernel_path.empty()) {
                spec = load_config(kernel_path);
            } else {
                spec = {{"family", family}};
                if (family == "planted") {
                    spec["f"] = "sin";
                    spec["h"] = planted_h;
                    spec["h_coeff"] = h_coeff;
                }
            }
            return run_verify_funceq(spec, probes, quad_step, pde_step, seed, output);
        }
        if (haar_cmd->parsed())
            return run_verify_haar(dim, d_r1, d_r2, samples, seed, haar_input, output);
        if (spin_cmd->parsed())
            return run_verify_spin(jp_max, j_max, output, summary_path);
        if (penrose_cmd->parsed())
            return run_verify_penrose(pair_count, seed, output);
        if (all_cmd->parsed())
            return run_verify_all(seed, output);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const horizonlab::InvalidState& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
