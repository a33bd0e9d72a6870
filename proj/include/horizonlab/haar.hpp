#pragma once
// Hilbert-space evaporation at small dimension: an interior state has a
// subsystem selected by a random unitary and reassigned as radiation. Haar
// sampling, bipartite measurement statistics, and the order-swap test.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "horizonlab/common.hpp"
#include "horizonlab/rng.hpp"

namespace horizonlab {

inline constexpr int kMaxHilbertDim = 1024;  // desk-scale hard cap

struct PureState {
    Eigen::VectorXcd amplitudes;

    int dim() const { return static_cast<int>(amplitudes.size()); }
    double norm_error() const { return std::abs(amplitudes.squaredNorm() - 1.0); }

    static PureState basis(int dim, int index);
    static PureState haar_random(int dim, RandomStream& rng);
};

/// Interior remainder (B) times radiation (R) factorization of a dimension.
struct BipartiteSplit {
    int d_b = 1;
    int d_r = 1;
    int dim() const { return d_b * d_r; }
};

struct UnitaryMatrix {
    Eigen::MatrixXcd m;

    int dim() const { return static_cast<int>(m.rows()); }
    /// max-norm of U^dagger U - 1.
    double unitarity_residual() const;
};

/// Haar-distributed unitary: complex Ginibre matrix, QR, then column phases
/// fixed so the triangular factor has positive real diagonal.
UnitaryMatrix haar_unitary(int dim, RandomStream& rng);
UnitaryMatrix identity_unitary(int dim);

struct EvaporationStep {
    Eigen::VectorXd probabilities;        ///< outcome distribution over d_r
    std::vector<PureState> conditionals;  ///< post-measurement interior states
};

/// Applies U, reshapes to B x R (amplitude index b * d_r + r), and measures
/// the radiation factor. Throws InvalidState on dimension mismatch.
EvaporationStep evaporation_step(const PureState& state, const BipartiteSplit& split,
                                 const UnitaryMatrix& unitary);

/// Supplies the unitary for emission event `step` at the given dimension.
using UnitarySource = std::function<UnitaryMatrix(int dim, int step, RandomStream&)>;
UnitarySource haar_source();

struct JointDistribution {
    Eigen::MatrixXd probability;     ///< d_r1 x d_r2 empirical cell masses
    Eigen::MatrixXd standard_error;  ///< per-cell binomial standard errors
    std::int64_t samples = 0;
    double max_unitarity_residual = 0.0;
};

/// Monte Carlo joint law of two consecutive emissions: a fresh unitary on
/// the full space, measure d_r1, then a fresh unitary on the remainder,
/// measure d_r2. Deterministic given the random stream.
JointDistribution sequential_emission_distribution(const PureState& state, int d_r1, int d_r2,
                                                   std::int64_t samples, RandomStream& rng,
                                                   const UnitarySource& source = haar_source());

struct PermutationSymmetryReport {
    double tv_distance = 0.0;
    double threshold = 0.0;
    bool pass = false;
    JointDistribution forward;  ///< (d_r1 then d_r2)
    JointDistribution swapped;  ///< (d_r2 then d_r1), before reindexing
};

/// Total-variation distance between the (d_r1, d_r2) joint law and the
/// reindexed (d_r2, d_r1) law; pass iff below c * sqrt(d_r1 d_r2 / samples).
PermutationSymmetryReport permutation_symmetry_test(const PureState& state, int d_r1, int d_r2,
                                                    std::int64_t samples, RandomStream& rng,
                                                    double c = 3.0,
                                                    const UnitarySource& source = haar_source());

}  // namespace horizonlab
