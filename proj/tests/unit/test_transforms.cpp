#include <doctest.h>

#include <cmath>
#include <complex>

#include "errors.hpp"
#include "kspecial.hpp"
#include "operators.hpp"
#include "support.hpp"
#include "transforms.hpp"

using namespace kprab;

namespace {
const PrabhakarParams A(1.5, 1.2, 0.9, 0.5, -0.3);
}

TEST_CASE("kernel transforms: closed-form special cases") {
    const PrabhakarParams w0(1.7, 0.8, 1.1, 0.6, 0.0);
    const PrabhakarParams g0(1.7, 0.8, 1.1, 0.0, 0.4);
    for (double u : {0.3, 1.0, 4.0}) {
        CHECK(kt::rel_err(laplace_kernel_closed(u, w0), std::pow(1.7 * u, -1.1 / 1.7)) < 1e-15);
        CHECK(kt::rel_err(laplace_kernel_closed(u, g0), std::pow(1.7 * u, -1.1 / 1.7)) < 1e-15);
        CHECK(kt::rel_err(sumudu_kernel_closed(u, w0), std::pow(u / 1.7, 1.1 / 1.7) / u) < 1e-15);
    }
    const PrabhakarParams ex(1, 1, 1, 1, -1);
    CHECK(kt::rel_err(laplace_kernel_closed(2.0, ex), 1.0 / 3.0) < 1e-15);
    // the spec's u = 1 sits on |omega k (u/k)^(alpha/k)| = 1, which is rejected
    CHECK(kt::rel_err(sumudu_kernel_closed(0.5, ex), 1.0 / 1.5) < 1e-15);
    CHECK_THROWS_AS(sumudu_kernel_closed(1.0, ex), DomainError);
}

TEST_CASE("convergence condition is enforced") {
    const PrabhakarParams p(1, 1, 1, 1, -2);
    CHECK_THROWS_WITH_AS(laplace_kernel_closed(0.5, p), doctest::Contains("convergence condition"), DomainError);
    CHECK_THROWS_AS(sumudu_kernel_closed(2.0, p), DomainError);
    CHECK_THROWS_AS(laplace_kernel_closed(-1.0, A), DomainError);
}

TEST_CASE("operator transforms: boundary-free forms") {
    const double u = 1.3, F = 0.37;
    const double mult = std::pow(1.5 * u, 0.9 / 1.5) * std::pow(laplace_factor(u, A), 0.5 / 1.5);
    BoundaryData zero;
    zero.initial_values = {0.0};
    CHECK(kt::rel_err(laplace_operator_closed(OperatorKind::RegHPDeriv, u, A, F, zero, 0.4), mult * F) < 1e-14);
    BoundaryData frozen0;
    frozen0.frozen_integral_terms = {0.0};
    CHECK(kt::rel_err(laplace_operator_closed(OperatorKind::PDeriv, u, A, F, frozen0), mult * F) < 1e-14);

    const PrabhakarParams plain(1.5, 1.2, 0.9, 0.0, 0.0);
    CHECK(kt::rel_err(sumudu_operator_closed(OperatorKind::PIntegral, u, plain, F, {}),
                      std::pow(u / 1.5, 0.9 / 1.5) * F) < 1e-14);
    BoundaryData f0;
    f0.initial_values = {0.25};
    const double s = std::pow(u / 1.5, -0.9 / 1.5) * std::pow(sumudu_factor(u, A), 0.5 / 1.5) * (F - 0.25);
    CHECK(kt::rel_err(sumudu_operator_closed(OperatorKind::RegHPDeriv, u, A, F, f0, 0.4), s) < 1e-14);
}

TEST_CASE("boundary data length is checked") {
    BoundaryData bad;
    bad.initial_values = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(laplace_operator_closed(OperatorKind::RegPDeriv, 1.0, A, 0.5, bad), ContractError);
    CHECK(boundary_arity(OperatorKind::PIntegral, A) == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(boundary_arity(OperatorKind::PDeriv, A.with_mu(1.6)).second == 2);
}

TEST_CASE("Sumudu closed forms equal Laplace at 1/u divided by u") {
    const PrabhakarParams B(0.8, 0.6, 0.5, 0.8, 0.2);
    for (const auto* p : {&A, &B})
        for (double u : {0.2, 0.5, 1.0, 2.0}) {
            const double FL = 0.37;  // Laplace transform of f at 1/u; Sumudu is then FL / u
            CHECK(kt::rel_err(sumudu_kernel_closed(u, *p), laplace_kernel_closed(1.0 / u, *p) / u) < 1e-12);
            for (auto kind : {OperatorKind::PIntegral, OperatorKind::PDeriv, OperatorKind::RegPDeriv,
                              OperatorKind::HPDeriv, OperatorKind::RegHPDeriv}) {
                BoundaryData b;
                const auto [ni, nf] = boundary_arity(kind, *p);
                b.initial_values.assign(ni, 0.3);
                b.frozen_integral_terms.assign(nf, -0.2);
                const double L = laplace_operator_closed(kind, 1.0 / u, *p, FL, b, 0.4);
                const double S = sumudu_operator_closed(kind, u, *p, FL / u, b, 0.4);
                CHECK(kt::rel_err(S, L / u) < 1e-12);
            }
        }
}

TEST_CASE("numerical_laplace") {
    CHECK(kt::rel_err(numerical_laplace([](double) { return 1.0; }, 2.0).value, 0.5) < 1e-10);
    CHECK(kt::rel_err(numerical_laplace([](double t) { return std::exp(-t); }, 1.0).value, 0.5) < 1e-10);
    const PrabhakarParams p(2, 1, 1, 1, 0.1);
    const PrabhakarKernel kern(p);
    // closed form also agrees with an mpmath quadrature, 0.42601037776311808...
    const double closed = laplace_kernel_closed(3.0, p);
    CHECK(kt::rel_err(closed, 0.42601037776311808297) < 1e-14);
    CHECK(kt::rel_err(numerical_laplace([&](double t) { return kern(t); }, 3.0).value, closed) < 1e-8);
    // overflows long before the horizon search gives up
    CHECK_THROWS_AS(numerical_laplace([](double t) { return std::exp(t); }, 0.5), EvaluationError);
}

TEST_CASE("numerical_sumudu") {
    for (double u : {0.3, 1.0, 2.0})
        CHECK(kt::rel_err(numerical_sumudu([](double) { return 1.0; }, u).value, 1.0) < 1e-10);
    CHECK(kt::rel_err(numerical_sumudu([](double t) { return t; }, 3.0).value, 3.0) < 1e-10);
    const PrabhakarParams p(2, 1, 1, 1, 0.1);
    const PrabhakarKernel kern(p);
    CHECK(kt::rel_err(numerical_sumudu([&](double t) { return kern(t); }, 0.5).value,
                      sumudu_kernel_closed(0.5, p)) < 1e-8);
}

TEST_CASE("sampled transforms") {
    auto errs = [](std::size_t n) {
        const auto f = SampledFunction::sample(Grid1D::span(0.0, 40.0, n + 1), [](double t) { return t * std::exp(-t); });
        return std::pair{kt::rel_err(numerical_laplace(f, 2.0).value, 1.0 / 9.0),
                         kt::rel_err(numerical_sumudu(f, 0.5).value, 0.5 / 2.25)};
    };
    const auto [l1, s1] = errs(8000);
    const auto [l2, s2] = errs(16000);
    CHECK(l1 < 2e-5);
    CHECK(s1 < 2e-5);
    // linear interpolation: second order
    CHECK(l2 < 0.3 * l1);
    CHECK(s2 < 0.3 * s1);
    const auto grow = SampledFunction::sample(Grid1D::span(0.0, 2.0, 101), [](double t) { return std::exp(t); });
    CHECK_THROWS_AS(numerical_laplace(grow, 0.5), HorizonError);
}

TEST_CASE("Talbot inversion") {
    CHECK(kt::rel_err(inverse_laplace_talbot([](std::complex<double> s) { return 1.0 / s; }, 1.0), 1.0) < 1e-10);
    CHECK(kt::rel_err(inverse_laplace_talbot([](std::complex<double> s) { return 1.0 / (s + 1.0); }, 1.0),
                      std::exp(-1.0)) < 1e-10);
    const PrabhakarParams p(1.5, 2.0, 1.2, 0.5, 0.3);
    const double v = inverse_laplace_talbot([&](std::complex<double> s) { return laplace_kernel_closed(s, p); },
                                            0.7, 32, laplace_kernel_abscissa(p));
    CHECK(kt::rel_err(v, prabhakar_kernel(0.7, p)) < 1e-6);
}
