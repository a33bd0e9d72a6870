#include "horizonlab/funceq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace horizonlab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

void require_domain(const CandidateKernel& kernel)
{
    if (kernel.arity < 1 || kernel.lower.size() != static_cast<std::size_t>(kernel.arity) ||
        kernel.upper.size() != static_cast<std::size_t>(kernel.arity))
        throw InvalidState("kernel domain bounds do not match its arity");
    for (int i = 0; i < kernel.arity; ++i)
        if (!(kernel.lower[static_cast<std::size_t>(i)] <
              kernel.upper[static_cast<std::size_t>(i)]))
            throw InvalidState("kernel domain has empty interior");
}

void require_scalar(const CandidateKernel& kernel)
{
    require_domain(kernel);
    if (kernel.arity != 1)
        throw InvalidState("operation is defined for scalar kernels only");
}

}  // namespace

double CandidateKernel::eval_scalar(double eps, double m) const
{
    const double x[1] = {eps};
    const double state[1] = {m};
    return log_gamma(std::span<const double>(x, 1), std::span<const double>(state, 1));
}

CandidateKernel CandidateKernel::scalar(std::function<double(double eps, double m)> fn,
                                        double m_min, double m_max)
{
    CandidateKernel kernel;
    kernel.arity = 1;
    kernel.lower = {m_min};
    kernel.upper = {m_max};
    kernel.log_gamma = [fn = std::move(fn)](std::span<const double> x,
                                            std::span<const double> state) {
        return fn(x[0], state[0]);
    };
    return kernel;
}

CandidateKernel schwarzschild_kernel(double m_min, double m_max)
{
    return CandidateKernel::scalar(
        [](double eps, double m) {
            return kFourPi * (m - eps) * (m - eps) - kFourPi * m * m;
        },
        m_min, m_max);
}

CandidateKernel planted_kernel(std::function<double(double)> f, std::function<double(double)> h,
                               double m_min, double m_max)
{
    return CandidateKernel::scalar(
        [f = std::move(f), h = std::move(h)](double eps, double m) {
            return f(m - eps) - f(m) + h(eps);
        },
        m_min, m_max);
}

CandidateKernel broken_kernel_eps_m2(double m_min, double m_max)
{
    return CandidateKernel::scalar([](double eps, double m) { return eps * m * m; }, m_min,
                                   m_max);
}

ResidualReport functional_residual(const CandidateKernel& kernel, std::int64_t probes,
                                   RandomStream& rng)
{
    require_domain(kernel);
    const auto n = static_cast<std::size_t>(kernel.arity);
    std::vector<double> state(n), x1(n), x2(n), tmp(n);

    ResidualReport report;
    for (std::int64_t p = 0; p < probes; ++p) {
        for (std::size_t i = 0; i < n; ++i) {
            state[i] = rng.uniform(kernel.lower[i], kernel.upper[i]);
            const double room = 0.5 * (state[i] - kernel.lower[i]);
            x1[i] = rng.uniform(0.0, room);
            x2[i] = rng.uniform(0.0, room);
        }
        const double a = kernel.eval(x1, state);
        const double b = kernel.eval(x2, state);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = state[i] - x1[i];
        const double a_then_b = kernel.eval(x2, tmp);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = state[i] - x2[i];
        const double b_then_a = kernel.eval(x1, tmp);

        const double residual = (a + a_then_b) - (b + b_then_a);
        if (!std::isfinite(residual)) {
            ++report.skipped;
            continue;
        }
        report.max_residual = std::max(report.max_residual, std::abs(residual));
        ++report.evaluated;
    }
    return report;
}

namespace {

/// d gamma / d eps at eps = 0 by a second-order forward stencil.
double eps_derivative_at_zero(const CandidateKernel& kernel, double m, double h)
{
    return (-3.0 * kernel.eval_scalar(0.0, m) + 4.0 * kernel.eval_scalar(h, m) -
            kernel.eval_scalar(2.0 * h, m)) /
           (2.0 * h);
}

}  // namespace

double pde_residual(const CandidateKernel& kernel, double grid_step)
{
    require_scalar(kernel);
    const double lo = kernel.lower[0];
    const double hi = kernel.upper[0];
    const double h = grid_step;
    if (h <= 0.0 || hi - lo <= 8.0 * h)
        throw InvalidState("pde_residual: step too large for the kernel domain");

    constexpr int kNodes = 25;
    const double m_lo = lo + 0.1 * (hi - lo);
    const double m_hi = hi - 2.0 * h;
    double max_residual = 0.0;
    for (int i = 0; i < kNodes; ++i) {
        const double m =
            m_lo + (m_hi - m_lo) * static_cast<double>(i) / static_cast<double>(kNodes - 1);
        const double eps_max = m - lo - 2.0 * h;
        if (eps_max <= 0.0)
            continue;
        for (int k = 0; k < kNodes; ++k) {
            const double eps =
                eps_max * static_cast<double>(k) / static_cast<double>(kNodes - 1);
            // g2 by central difference in M; the eps room shrinks by h.
            if (m - h - eps < lo || m + h > hi)
                continue;
            const double g2 =
                (kernel.eval_scalar(eps, m + h) - kernel.eval_scalar(eps, m - h)) / (2.0 * h);
            const double g1_m = eps_derivative_at_zero(kernel, m, h);
            const double g1_daughter = eps_derivative_at_zero(kernel, m - eps, h);
            max_residual = std::max(max_residual, std::abs(g2 - g1_m + g1_daughter));
        }
    }
    return max_residual;
}

KernelRejected::KernelRejected(double measured)
    : std::runtime_error("kernel fails the exchange functional equation, residual " +
                         std::to_string(measured)),
      residual(measured)
{
}

SolutionDecomposition reconstruct_f(const CandidateKernel& kernel, double quad_step,
                                    double funceq_tolerance)
{
    require_scalar(kernel);
    RandomStream precheck_rng(0x5eedf00d);
    const ResidualReport precheck = functional_residual(kernel, 2000, precheck_rng);
    if (precheck.max_residual > funceq_tolerance)
        throw KernelRejected(precheck.max_residual);

    const double lo = kernel.lower[0];
    const double hi = kernel.upper[0];
    const auto nodes = static_cast<std::size_t>(std::lround((hi - lo) / quad_step)) + 1;
    if (nodes < 8)
        throw InvalidState("reconstruct_f: quadrature step too large for the domain");
    const double step = (hi - lo) / static_cast<double>(nodes - 1);

    // Integrand g(M) = d gamma / d eps |_{eps=0}. The forward stencil needs
    // eps room 2*step, so the two bottom nodes are quadratically extrapolated.
    std::vector<double> g(nodes);
    for (std::size_t k = 2; k < nodes; ++k)
        g[k] = eps_derivative_at_zero(kernel, lo + step * static_cast<double>(k), step);
    g[1] = 3.0 * g[2] - 3.0 * g[3] + g[4];
    g[0] = 3.0 * g[1] - 3.0 * g[2] + g[3];

    SolutionDecomposition decomp;
    decomp.m_min = lo;
    decomp.step = step;
    decomp.m_ref = hi;
    decomp.f_values.resize(nodes);
    decomp.f_values[0] = 0.0;
    for (std::size_t k = 1; k < nodes; ++k)
        decomp.f_values[k] = decomp.f_values[k - 1] - 0.5 * (g[k - 1] + g[k]) * step;

    decomp.h_values.resize(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        const double eps = step * static_cast<double>(k);
        decomp.h_values[k] = kernel.eval_scalar(eps, hi) - decomp.f_values[nodes - 1 - k] +
                             decomp.f_values[nodes - 1];
    }
    return decomp;
}

namespace {

double interpolate(const std::vector<double>& table, double origin, double step, double at)
{
    const double t = (at - origin) / step;
    const auto last = static_cast<double>(table.size() - 1);
    if (t < 0.0 || t > last)
        return std::numeric_limits<double>::quiet_NaN();
    const auto cell = static_cast<std::size_t>(
        std::min(std::floor(t), last - 1.0));
    const double frac = t - static_cast<double>(cell);
    return table[cell] * (1.0 - frac) + table[cell + 1] * frac;
}

}  // namespace

double SolutionDecomposition::f_at(double m) const { return interpolate(f_values, m_min, step, m); }

double SolutionDecomposition::h_at(double eps) const
{
    return interpolate(h_values, 0.0, step, eps);
}

ResidualReport verify_decomposition(const CandidateKernel& kernel,
                                    const SolutionDecomposition& decomp, std::int64_t probes,
                                    RandomStream& rng)
{
    require_scalar(kernel);
    const double lo = kernel.lower[0];
    const double hi = kernel.upper[0];

    ResidualReport report;
    for (std::int64_t p = 0; p < probes; ++p) {
        const double m = rng.uniform(lo, hi);
        const double eps = rng.uniform(0.0, m - lo);
        const double fit = decomp.f_at(m - eps) - decomp.f_at(m) + decomp.h_at(eps);
        if (!std::isfinite(fit)) {
            ++report.skipped;
            continue;
        }
        const double residual = std::abs(kernel.eval_scalar(eps, m) - fit);
        report.max_residual = std::max(report.max_residual, residual);
        ++report.evaluated;
    }
    return report;
}

ResidualReport cauchy_special_case(const CandidateKernel& kernel, std::int64_t probes,
                                   RandomStream& rng)
{
    require_scalar(kernel);
    const double lo = kernel.lower[0];
    const double hi = kernel.upper[0];

    ResidualReport report;
    for (std::int64_t p = 0; p < probes; ++p) {
        const double m = rng.uniform(lo, hi);
        const double room = 0.5 * (m - lo);
        const double e1 = rng.uniform(0.0, room);
        const double e2 = rng.uniform(0.0, room);
        const double residual = kernel.eval_scalar(e1, m) + kernel.eval_scalar(e2, m - e1) -
                                kernel.eval_scalar(e1 + e2, m);
        if (!std::isfinite(residual)) {
            ++report.skipped;
            continue;
        }
        report.max_residual = std::max(report.max_residual, std::abs(residual));
        ++report.evaluated;
    }
    return report;
}

}  // namespace horizonlab
