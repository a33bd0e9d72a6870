#pragma once
// Functional-equation laboratory: exchange-residual certification for
// black-box log-weight kernels, the associated first-order PDE, quadrature
// reconstruction of the (f, h) decomposition, and the additive special case.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "horizonlab/common.hpp"
#include "horizonlab/rng.hpp"

namespace horizonlab {

/// Black-box log Gamma(x | X) on a rectangular domain. For arity n, X lives
/// in the box [lower, upper]; emissions x are componentwise non-negative and
/// probes keep X - x - x' inside the box.
struct CandidateKernel {
    int arity = 1;
    std::function<double(std::span<const double> x, std::span<const double> state)> log_gamma;
    std::vector<double> lower;
    std::vector<double> upper;

    double eval(std::span<const double> x, std::span<const double> state) const
    {
        return log_gamma(x, state);
    }
    double eval_scalar(double eps, double m) const;

    static CandidateKernel scalar(std::function<double(double eps, double m)> fn, double m_min,
                                  double m_max);
};

/// gamma = 4 pi (M - eps)^2 - 4 pi M^2 on [m_min, m_max].
CandidateKernel schwarzschild_kernel(double m_min = 0.0, double m_max = 1.0);

/// gamma = f(M - eps) - f(M) + h(eps): an exact solution-family member.
CandidateKernel planted_kernel(std::function<double(double)> f, std::function<double(double)> h,
                               double m_min = 0.0, double m_max = 1.0);

/// gamma = eps M^2: violates the exchange identity.
CandidateKernel broken_kernel_eps_m2(double m_min = 0.0, double m_max = 1.0);

struct ResidualReport {
    double max_residual = 0.0;
    std::int64_t evaluated = 0;
    std::int64_t skipped = 0;  ///< probes with non-finite kernel values
};

/// Max |g(x,X) + g(x',X-x) - g(x',X) - g(x,X-x')| over random probes.
ResidualReport functional_residual(const CandidateKernel& kernel, std::int64_t probes,
                                   RandomStream& rng);

/// Max |g2(eps,M) - g1(0,M) + g1(0,M-eps)| over a probe grid, with g1, g2
/// the partial derivatives by finite differences of the given step.
/// Scalar kernels only; throws InvalidState when the step cannot fit.
double pde_residual(const CandidateKernel& kernel, double grid_step);

/// Tabulated (f, h) on uniform grids, gauge f(m_min) = 0 and h'(0) = 0
/// (any linear part of h is assigned to f).
struct SolutionDecomposition {
    double m_min = 0.0;
    double step = 0.0;
    double m_ref = 0.0;
    std::vector<double> f_values;  ///< f on m_min + k step
    std::vector<double> h_values;  ///< h on k step, up to m_ref - m_min

    double m_max() const { return m_min + step * static_cast<double>(f_values.size() - 1); }
    double f_at(double m) const;
    double h_at(double eps) const;
};

/// The kernel failed its functional-equation precondition.
struct KernelRejected : std::runtime_error {
    double residual;
    explicit KernelRejected(double measured);
};

/// Rebuilds f by trapezoid quadrature of the eps-derivative at eps = 0, then
/// h from the reference slice M = m_max. Refuses (KernelRejected) kernels
/// whose functional residual exceeds `funceq_tolerance`.
SolutionDecomposition reconstruct_f(const CandidateKernel& kernel, double quad_step,
                                    double funceq_tolerance = 1e-8);

/// Max |g(x,X) - [f(X-x) - f(X) + h(x)]| over random probes, with linear
/// interpolation of the tables.
ResidualReport verify_decomposition(const CandidateKernel& kernel,
                                    const SolutionDecomposition& decomp, std::int64_t probes,
                                    RandomStream& rng);

/// Max |g(e1,M) + g(e2,M-e1) - g(e1+e2,M)|: zero exactly for the h-free
/// (additive) subfamily, nonzero otherwise.
ResidualReport cauchy_special_case(const CandidateKernel& kernel, std::int64_t probes,
                                   RandomStream& rng);

}  // namespace horizonlab
