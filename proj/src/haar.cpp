#include "horizonlab/haar.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace horizonlab {

namespace {

void require_dim(int dim)
{
    if (dim < 1 || dim > kMaxHilbertDim)
        throw InvalidState("Hilbert dimension " + std::to_string(dim) + " outside [1, " +
                           std::to_string(kMaxHilbertDim) + "]");
}

Eigen::MatrixXcd ginibre(int dim, RandomStream& rng)
{
    Eigen::MatrixXcd a(dim, dim);
    const double scale = 1.0 / std::sqrt(2.0);
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r)
            a(r, c) = std::complex<double>(rng.next_normal(), rng.next_normal()) * scale;
    return a;
}

}  // namespace

PureState PureState::basis(int dim, int index)
{
    require_dim(dim);
    if (index < 0 || index >= dim)
        throw InvalidState("basis index out of range");
    PureState state{Eigen::VectorXcd::Zero(dim)};
    state.amplitudes(index) = 1.0;
    return state;
}

PureState PureState::haar_random(int dim, RandomStream& rng)
{
    require_dim(dim);
    Eigen::VectorXcd v(dim);
    const double scale = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < dim; ++i)
        v(i) = std::complex<double>(rng.next_normal(), rng.next_normal()) * scale;
    v.normalize();
    return PureState{v};
}

double UnitaryMatrix::unitarity_residual() const
{
    const Eigen::MatrixXcd gram = m.adjoint() * m;
    return (gram - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

UnitaryMatrix haar_unitary(int dim, RandomStream& rng)
{
    require_dim(dim);
    const Eigen::MatrixXcd a = ginibre(dim, rng);
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < dim; ++c) {
        const std::complex<double> diag = r(c, c);
        const double mag = std::abs(diag);
        if (mag > 0.0)
            q.col(c) *= diag / mag;
    }
    return UnitaryMatrix{std::move(q)};
}

UnitaryMatrix identity_unitary(int dim)
{
    require_dim(dim);
    return UnitaryMatrix{Eigen::MatrixXcd::Identity(dim, dim)};
}

EvaporationStep evaporation_step(const PureState& state, const BipartiteSplit& split,
                                 const UnitaryMatrix& unitary)
{
    if (split.d_b < 1 || split.d_r < 1 || split.dim() != state.dim() ||
        unitary.dim() != state.dim())
        throw InvalidState("bipartite split does not match the state dimension");

    const Eigen::VectorXcd rotated = unitary.m * state.amplitudes;

    EvaporationStep step;
    step.probabilities = Eigen::VectorXd::Zero(split.d_r);
    for (int b = 0; b < split.d_b; ++b)
        for (int r = 0; r < split.d_r; ++r)
            step.probabilities(r) += std::norm(rotated(b * split.d_r + r));

    step.conditionals.reserve(static_cast<std::size_t>(split.d_r));
    for (int r = 0; r < split.d_r; ++r) {
        Eigen::VectorXcd conditional(split.d_b);
        for (int b = 0; b < split.d_b; ++b)
            conditional(b) = rotated(b * split.d_r + r);
        const double p = step.probabilities(r);
        if (p > 0.0)
            conditional /= std::sqrt(p);
        step.conditionals.push_back(PureState{std::move(conditional)});
    }
    return step;
}

UnitarySource haar_source()
{
    return [](int dim, int /*step*/, RandomStream& rng) { return haar_unitary(dim, rng); };
}

namespace {

/// Samples an outcome and returns the matching conditional without building
/// the full per-outcome table.
int measure(const Eigen::VectorXcd& rotated, int d_b, int d_r, RandomStream& rng,
            Eigen::VectorXcd* conditional)
{
    Eigen::VectorXd probs = Eigen::VectorXd::Zero(d_r);
    for (int b = 0; b < d_b; ++b)
        for (int r = 0; r < d_r; ++r)
            probs(r) += std::norm(rotated(b * d_r + r));

    const double u = rng.next_double();
    double cum = 0.0;
    int outcome = d_r - 1;
    for (int r = 0; r < d_r; ++r) {
        cum += probs(r);
        if (u < cum) {
            outcome = r;
            break;
        }
    }

    conditional->resize(d_b);
    for (int b = 0; b < d_b; ++b)
        (*conditional)(b) = rotated(b * d_r + outcome);
    const double p = probs(outcome);
    if (p > 0.0)
        *conditional /= std::sqrt(p);
    return outcome;
}

}  // namespace

JointDistribution sequential_emission_distribution(const PureState& state, int d_r1, int d_r2,
                                                   std::int64_t samples, RandomStream& rng,
                                                   const UnitarySource& source)
{
    const int d = state.dim();
    if (d_r1 < 1 || d_r2 < 1 || d % (d_r1 * d_r2) != 0)
        throw InvalidState("dimension not divisible by the emission sizes");
    if (samples < 1)
        throw InvalidState("sampling requires samples >= 1");
    if (state.norm_error() > 1e-12)
        throw InvalidState("input state is not normalized");

    const int d_after1 = d / d_r1;
    const int d_after2 = d_after1 / d_r2;

    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(d_r1, d_r2);
    double max_residual = 0.0;

    for (std::int64_t s = 0; s < samples; ++s) {
        const UnitaryMatrix u1 = source(d, 0, rng);
        max_residual = std::max(max_residual, u1.unitarity_residual());
        Eigen::VectorXcd conditional;
        const int r1 =
            measure(u1.m * state.amplitudes, d_after1, d_r1, rng, &conditional);

        const UnitaryMatrix u2 = source(d_after1, 1, rng);
        max_residual = std::max(max_residual, u2.unitarity_residual());
        Eigen::VectorXcd conditional2;
        const int r2 = measure(u2.m * conditional, d_after2, d_r2, rng, &conditional2);

        counts(r1, r2) += 1.0;
    }

    JointDistribution joint;
    joint.samples = samples;
    joint.max_unitarity_residual = max_residual;
    joint.probability = counts / static_cast<double>(samples);
    joint.standard_error.resize(d_r1, d_r2);
    for (int i = 0; i < d_r1; ++i)
        for (int k = 0; k < d_r2; ++k) {
            const double p = joint.probability(i, k);
            joint.standard_error(i, k) =
                std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(samples));
        }
    return joint;
}

PermutationSymmetryReport permutation_symmetry_test(const PureState& state, int d_r1, int d_r2,
                                                    std::int64_t samples, RandomStream& rng,
                                                    double c, const UnitarySource& source)
{
    RandomStream forward_rng = rng.fork(1);
    RandomStream swapped_rng = rng.fork(2);

    PermutationSymmetryReport report;
    report.forward = sequential_emission_distribution(state, d_r1, d_r2, samples, forward_rng,
                                                      source);
    report.swapped = sequential_emission_distribution(state, d_r2, d_r1, samples, swapped_rng,
                                                      source);

    double l1 = 0.0;
    for (int i = 0; i < d_r1; ++i)
        for (int k = 0; k < d_r2; ++k)
            l1 += std::abs(report.forward.probability(i, k) - report.swapped.probability(k, i));
    report.tv_distance = 0.5 * l1;
    report.threshold =
        c * std::sqrt(static_cast<double>(d_r1) * static_cast<double>(d_r2) /
                      static_cast<double>(samples));
    report.pass = report.tv_distance <= report.threshold;
    return report;
}

}  // namespace horizonlab
