#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "horizonlab/funceq.hpp"
#include "horizonlab/rng.hpp"

using namespace horizonlab;

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

}  // namespace

TEST_CASE("solution-family members pass the functional residual")
{
    RandomStream rng(41);

    SUBCASE("quadratic-entropy kernel")
    {
        const auto report = functional_residual(schwarzschild_kernel(0.0, 1.0), 10000, rng);
        CHECK(report.evaluated == 10000);
        CHECK(report.max_residual < 1e-10);
    }

    SUBCASE("planted smooth family")
    {
        const auto kernel = planted_kernel([](double m) { return std::sin(3.0 * m) + m * m; },
                                           [](double e) { return std::cos(e) - 1.0; }, 0.0, 2.0);
        CHECK(functional_residual(kernel, 10000, rng).max_residual < 1e-10);
    }

    SUBCASE("multivariate family member")
    {
        CandidateKernel kernel;
        kernel.arity = 3;
        kernel.lower = {0.0, 0.0, 0.0};
        kernel.upper = {1.0, 1.0, 1.0};
        const auto f = [](std::span<const double> v) {
            return std::sin(v[0]) + v[1] * v[1] + v[2];
        };
        kernel.log_gamma = [f](std::span<const double> x, std::span<const double> state) {
            const double shifted[3] = {state[0] - x[0], state[1] - x[1], state[2] - x[2]};
            return f(std::span<const double>(shifted, 3)) - f(state) + 0.2 * x[0] * x[1] -
                   std::cos(x[2]);
        };
        CHECK(functional_residual(kernel, 10000, rng).max_residual < 1e-10);
    }

    SUBCASE("arity-one multivariate path is the scalar path")
    {
        const auto scalar = schwarzschild_kernel(0.0, 1.0);
        CandidateKernel vector_form;
        vector_form.arity = 1;
        vector_form.lower = {0.0};
        vector_form.upper = {1.0};
        vector_form.log_gamma = [](std::span<const double> x, std::span<const double> state) {
            return kFourPi * (state[0] - x[0]) * (state[0] - x[0]) -
                   kFourPi * state[0] * state[0];
        };
        RandomStream a(42), b(42);
        CHECK(functional_residual(scalar, 1000, a).max_residual ==
              functional_residual(vector_form, 1000, b).max_residual);
    }
}

TEST_CASE("the broken kernel is rejected with its closed-form residual")
{
    RandomStream rng(43);
    const auto report = functional_residual(broken_kernel_eps_m2(0.0, 1.0), 10000, rng);
    CHECK(report.max_residual > 1e-3);
    // residual is eps1 eps2 |eps1 - eps2| <= 0.03125 on this domain
    CHECK(report.max_residual <= 0.03125 + 1e-12);
}

TEST_CASE("PDE residual separates the solution family")
{
    SUBCASE("quadratic-entropy kernel at truncation level")
    {
        CHECK(pde_residual(schwarzschild_kernel(0.0, 1.0), 1e-4) < 1e-6);
    }

    SUBCASE("generic family member at truncation level")
    {
        const auto kernel = planted_kernel([](double m) { return std::sin(2.0 * m); },
                                           [](double e) { return 0.5 * e * e; }, 0.0, 1.0);
        CHECK(pde_residual(kernel, 1e-4) < 1e-6);
    }

    SUBCASE("the broken kernel is far from the family")
    {
        CHECK(pde_residual(broken_kernel_eps_m2(0.0, 1.0), 1e-4) >= 0.1);
    }

    SUBCASE("too coarse a step is an error")
    {
        CHECK_THROWS_AS((void)pde_residual(schwarzschild_kernel(0.0, 0.5), 0.1), InvalidState);
    }
}

TEST_CASE("reconstruction recovers the decomposition")
{
    SUBCASE("quadratic entropy, zero h")
    {
        const auto decomp = reconstruct_f(schwarzschild_kernel(0.0, 1.0), 1e-3);
        double f_err = 0.0;
        double h_err = 0.0;
        for (std::size_t k = 0; k < decomp.f_values.size(); ++k) {
            const double m = decomp.m_min + decomp.step * static_cast<double>(k);
            f_err = std::max(f_err, std::abs(decomp.f_values[k] - kFourPi * m * m));
            h_err = std::max(h_err, std::abs(decomp.h_values[k]));
        }
        CHECK(f_err < 1e-5);
        CHECK(h_err < 1e-5);

        RandomStream rng(44);
        CHECK(verify_decomposition(schwarzschild_kernel(0.0, 1.0), decomp, 2000, rng)
                  .max_residual < 1e-5);
    }

    SUBCASE("planted quadratic h round trip")
    {
        const auto planted_f = [](double m) { return kFourPi * m * m; };
        const auto planted_h = [](double e) { return 0.3 * e * e; };
        const auto decomp = reconstruct_f(planted_kernel(planted_f, planted_h, 0.0, 1.0), 1e-3);
        double f_err = 0.0;
        double h_err = 0.0;
        for (std::size_t k = 0; k < decomp.f_values.size(); ++k) {
            const double m = decomp.m_min + decomp.step * static_cast<double>(k);
            const double eps = decomp.step * static_cast<double>(k);
            f_err = std::max(f_err, std::abs(decomp.f_values[k] - planted_f(m)));
            h_err = std::max(h_err, std::abs(decomp.h_values[k] - planted_h(eps)));
        }
        CHECK(f_err < 1e-5);
        CHECK(h_err < 1e-5);
    }

    SUBCASE("a planted linear h is absorbed into f")
    {
        // gauge: h carries no linear part, so f picks up -0.7 (m - m_min)
        const auto decomp = reconstruct_f(
            planted_kernel([](double m) { return m * m; },
                           [](double e) { return 0.7 * e; }, 0.0, 1.0),
            1e-3);
        double h_err = 0.0;
        double f_err = 0.0;
        for (std::size_t k = 0; k < decomp.f_values.size(); ++k) {
            const double m = decomp.m_min + decomp.step * static_cast<double>(k);
            f_err = std::max(f_err, std::abs(decomp.f_values[k] - (m * m - 0.7 * m)));
            h_err = std::max(h_err, std::abs(decomp.h_values[k]));
        }
        CHECK(f_err < 1e-5);
        CHECK(h_err < 1e-5);
    }

    SUBCASE("the constant kernel reconstructs to nothing")
    {
        const auto decomp = reconstruct_f(
            planted_kernel([](double) { return 0.0; }, [](double) { return 0.0; }, 0.0, 1.0),
            1e-3);
        for (double v : decomp.f_values)
            CHECK(std::abs(v) < 1e-12);
        for (double v : decomp.h_values)
            CHECK(std::abs(v) < 1e-12);
    }

    SUBCASE("kernels outside the family are refused with their residual")
    {
        try {
            (void)reconstruct_f(broken_kernel_eps_m2(0.0, 1.0), 1e-3);
            FAIL("expected KernelRejected");
        } catch (const KernelRejected& rejected) {
            CHECK(rejected.residual > 1e-3);
        }
    }
}

TEST_CASE("decomposition verification")
{
    SUBCASE("exact tables on a linear family are exact")
    {
        // linear f and h interpolate exactly, so the residual is rounding only
        const auto kernel = planted_kernel([](double m) { return 3.0 * m; },
                                           [](double e) { return 2.0 * e; }, 0.0, 1.0);
        SolutionDecomposition decomp;
        decomp.m_min = 0.0;
        decomp.step = 1e-3;
        decomp.m_ref = 1.0;
        const std::size_t nodes = 1001;
        decomp.f_values.resize(nodes);
        decomp.h_values.resize(nodes);
        for (std::size_t k = 0; k < nodes; ++k) {
            const double t = 1e-3 * static_cast<double>(k);
            decomp.f_values[k] = 3.0 * t;
            decomp.h_values[k] = 2.0 * t;
        }
        RandomStream rng(45);
        CHECK(verify_decomposition(kernel, decomp, 2000, rng).max_residual < 1e-12);
    }

    SUBCASE("a perturbed f is detected")
    {
        const auto kernel = schwarzschild_kernel(0.0, 1.0);
        auto decomp = reconstruct_f(kernel, 1e-3);
        for (std::size_t k = 0; k < decomp.f_values.size(); ++k)
            decomp.f_values[k] += 0.01 * (decomp.m_min + decomp.step * static_cast<double>(k));
        RandomStream rng(46);
        CHECK(verify_decomposition(kernel, decomp, 2000, rng).max_residual > 1e-3);
    }
}

TEST_CASE("gauge covariance of the reconstruction")
{
    const auto planted_f = [](double m) { return std::sin(2.0 * m) + m * m; };
    const auto planted_h = [](double e) { return 0.2 * e * e; };
    const auto wide = reconstruct_f(planted_kernel(planted_f, planted_h, 0.0, 1.0), 1e-3);
    const auto narrow = reconstruct_f(planted_kernel(planted_f, planted_h, 0.2, 1.0), 1e-3);

    // the two f tables agree up to an affine map fixed by two anchor points
    const double m_a = 0.3;
    const double m_b = 0.9;
    const double offset_a = wide.f_at(m_a) - narrow.f_at(m_a);
    const double offset_b = wide.f_at(m_b) - narrow.f_at(m_b);
    const double slope = (offset_b - offset_a) / (m_b - m_a);
    double max_affine_residual = 0.0;
    for (double m = 0.25; m <= 0.95; m += 0.01) {
        const double affine = offset_a + slope * (m - m_a);
        max_affine_residual =
            std::max(max_affine_residual, std::abs(wide.f_at(m) - narrow.f_at(m) - affine));
    }
    CHECK(max_affine_residual < 1e-4);

    RandomStream rng(47);
    CHECK(verify_decomposition(planted_kernel(planted_f, planted_h, 0.2, 1.0), narrow, 2000, rng)
              .max_residual < 1e-5);
}

TEST_CASE("the additive special case separates h-free kernels")
{
    RandomStream rng(48);

    SUBCASE("h = 0 telescopes exactly")
    {
        CHECK(cauchy_special_case(schwarzschild_kernel(0.0, 1.0), 10000, rng).max_residual <
              1e-10);
    }

    SUBCASE("linear h is absorbed")
    {
        const auto kernel = planted_kernel([](double m) { return kFourPi * m * m; },
                                           [](double e) { return 1.7 * e; }, 0.0, 1.0);
        CHECK(cauchy_special_case(kernel, 10000, rng).max_residual < 1e-10);
    }

    SUBCASE("quadratic h leaves 2 eps1 eps2")
    {
        const auto kernel = planted_kernel([](double m) { return kFourPi * m * m; },
                                           [](double e) { return e * e; }, 0.0, 1.0);
        const auto report = cauchy_special_case(kernel, 10000, rng);
        CHECK(report.max_residual > 0.01);
        CHECK(report.max_residual <= 0.5 + 1e-12);  // 2 eps1 eps2 <= 2 (1/2)(1/2)
    }
}

TEST_CASE("domain handling")
{
    SUBCASE("empty-interior domains are rejected")
    {
        CandidateKernel kernel = schwarzschild_kernel(1.0, 1.0);
        RandomStream rng(49);
        CHECK_THROWS_AS((void)functional_residual(kernel, 10, rng), InvalidState);
    }

    SUBCASE("scalar-only operations refuse multivariate kernels")
    {
        CandidateKernel kernel;
        kernel.arity = 2;
        kernel.lower = {0.0, 0.0};
        kernel.upper = {1.0, 1.0};
        kernel.log_gamma = [](std::span<const double>, std::span<const double>) { return 0.0; };
        CHECK_THROWS_AS((void)pde_residual(kernel, 1e-4), InvalidState);
        CHECK_THROWS_AS((void)reconstruct_f(kernel, 1e-3), InvalidState);
        RandomStream rng(50);
        CHECK_THROWS_AS((void)cauchy_special_case(kernel, 10, rng), InvalidState);
    }
}
