#pragma once
// Built-in verification suite. Each check pins its tolerances in code and
// returns a deterministic machine-readable verdict; the CLI's verify-all
// and the acceptance runner share these implementations.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "horizonlab/cascade.hpp"

namespace horizonlab {

struct CheckResult {
    std::string name;
    bool pass = false;
    nlohmann::json details;
};

/// Transition pairs with matching irreducible masses: a random charged or
/// spinning transition and its equal-I neutral partner, the first pair being
/// the extremal-charge reference case.
std::vector<PenrosePair> make_equal_i_pairs(std::uint64_t seed, int count);

/// Pairwise spectrum ratio law for the quadratic-entropy model at M = 1,
/// delta = 0.1: log p(e) - log p(e') matches the entropy-difference form
/// to 1e-12.
CheckResult check_spectrum_ratio_law();

/// Exchange symmetry over 1e4 random admissible (X, x1, x2) for both
/// built-in models (residual <= 1e-12), plus rejection of the planted
/// eps M^2 kernel (residual >= 1e-3).
CheckResult check_exchange_symmetry(std::uint64_t seed);

/// Slope of the log-weight at eps = 1e-4 equals -8 pi M within 0.5% for
/// M in {0.5, 1, 2}; the gradient-based reference agrees.
CheckResult check_thermal_limit();

/// 1e3 complete cascades from M = 1, delta = 0.05: per-stream telescoping
/// |sum dS + S(X0)| <= 1e-9 and exact integer ledgers.
CheckResult check_cascade_telescoping(std::uint64_t seed, int workers);

/// M0 = 5 delta constant-N enumeration: exactly 16 equiprobable streams,
/// S_rad = ln 16 and the ln N' identity to 1e-9.
CheckResult check_radiation_entropy();

/// Reconstruction on the quadratic-entropy kernel (sup error <= 1e-5 at
/// quad step 1e-3), planted round trip, and PDE residual <= 1e-6.
CheckResult check_funceq_reconstruction();

/// 100 equal-irreducible-mass transition pairs match to 1e-9 under u(I)
/// models; the non-u(I) control model fails by >= 1e-3.
CheckResult check_penrose_invariance(std::uint64_t seed);

/// d = 16, (2 then 4) vs (4 then 2) at 1e5 samples: TV distance <= 0.01,
/// per-cell uniformity within 4 sigma, unitarity residual <= 1e-12.
CheckResult check_haar_permutation(std::uint64_t seed);

/// Coupled-spin classification sweep for j_p, j <= 3: residuals <= 1e-10,
/// expected class counts, anomalous exclusion, exact spin-1/2 eigenvalues.
CheckResult check_spin_classification();

/// Irreducible-mass reference values to 1e-12 against the horizon-radius
/// oracle I = 1/2 sqrt(r+^2 + a^2).
CheckResult check_irreducible_mass();

/// All checks above, in order, with per-check seeds derived from `seed`.
std::vector<CheckResult> run_all_checks(std::uint64_t seed, int workers);

}  // namespace horizonlab
