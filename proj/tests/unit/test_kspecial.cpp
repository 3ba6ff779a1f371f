#include <doctest.h>

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "kspecial.hpp"
#include "ml_oracle.hpp"
#include "support.hpp"

using namespace kprab;

TEST_CASE("k_gamma: values and domain") {
    for (double k : {0.3, 1.0, 2.7})
        CHECK(k_gamma(k, k) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(k_gamma(4.0, 1.0) == doctest::Approx(6.0).epsilon(1e-15));
    // int_0^inf exp(-t^2/2) dt by quadrature (mpmath, 40 digits)
    CHECK(kt::rel_err(k_gamma(1.0, 2.0), 1.2533141373155002512) < 1e-14);
    CHECK_THROWS_AS(k_gamma(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(k_gamma(1.0, -1.0), DomainError);
}

TEST_CASE("k_gamma recurrence Gamma_k(z+k) = z Gamma_k(z)") {
    for (double z : {0.3, 1.1, 2.5})
        for (double k : {0.5, 1.0, 2.0}) {
            const double lhs = k_gamma(z + k, k);
            CHECK(std::fabs(lhs - z * k_gamma(z, k)) <= 1e-12 * lhs);
        }
}

TEST_CASE("k_pochhammer") {
    CHECK(k_pochhammer(7.3, 0, 2.0) == 1.0);
    CHECK(k_pochhammer(1.0, 3, 1.0) == 6.0);
    CHECK(k_pochhammer(3.0, 2, 2.0) == 15.0);
    CHECK(k_pochhammer(0.0, 4, 1.5) == 0.0);
    CHECK_THROWS_AS(k_pochhammer(1.0, -1, 1.0), DomainError);
}

TEST_CASE("ml_k: trivial values") {
    const PrabhakarParams p(1.7, 0.9, 1.3, 0.6, 0.0);
    CHECK(kt::rel_err(ml_k(0.0, p), 1.0 / k_gamma(1.3, 1.7)) < 1e-15);
    const PrabhakarParams g0(1.7, 0.9, 1.3, 0.0, 0.0);
    for (double z : {-4.0, 0.5, 3.0})
        CHECK(kt::rel_err(ml_k(z, g0), 1.0 / k_gamma(1.3, 1.7)) < 1e-15);
    const PrabhakarParams e(1.0, 1.0, 1.0, 1.0, 0.0);
    CHECK(kt::rel_err(ml_k(1.0, e), std::numbers::e) < 1e-15);
    for (double z = -5.0; z <= 5.0; z += 0.25)
        CHECK(kt::rel_err(ml_k(z, e), std::exp(z)) < 1e-12);
}

TEST_CASE("ml_k against 50-digit direct summation") {
    double worst = 0.0;
    for (const auto& q : kt::kMlGrid) {
        const PrabhakarParams p(q.k, q.alpha, q.mu, q.gamma, 0.0);
        const MittagLefflerK ml(p);
        for (int i = 0; i <= 40; ++i) {
            const double z = -5.0 + 0.25 * i;
            const double ref = kt::oracle_ml_k(z, q.k, q.alpha, q.mu, q.gamma);
            worst = std::max(worst, kt::rel_err(ml(z), ref));
        }
    }
    INFO("worst relative error " << worst);
    CHECK(worst <= 1e-12);
}

TEST_CASE("ml_k with k = 1 matches the classical three-parameter series") {
    // classical E^g_{a,b}(z) = sum (g)_n z^n / (n! Gamma(a n + b)), summed naively
    auto classical = [](double z, double a, double b, double g) {
        long double s = 0, term_poch = 1, zn = 1, fact = 1;
        for (int n = 0; n < 300; ++n) {
            s += term_poch * zn / (fact * std::tgamma(static_cast<long double>(a * n + b)));
            term_poch *= g + n;
            zn *= z;
            fact *= n + 1;
            if (!std::isfinite(static_cast<double>(fact)) || a * n + b > 170)
                break;
        }
        return static_cast<double>(s);
    };
    const PrabhakarParams p(1.0, 1.3, 0.8, 0.6, 0.0);
    for (double z = -3.0; z <= 3.0; z += 0.125)
        CHECK(kt::rel_err(ml_k(z, p), classical(z, 1.3, 0.8, 0.6)) < 1e-12);
}

TEST_CASE("series coefficients match per-term evaluation") {
    const PrabhakarParams p(1.5, 1.2, 0.9, 0.5, 0.0);
    const MittagLefflerK ml(p);
    double fact = 1.0;
    for (int n = 0; n <= 50; ++n) {
        if (n > 0)
            fact *= n;
        const double naive = k_pochhammer(0.5, n, 1.5) / (fact * k_gamma(1.2 * n + 0.9, 1.5));
        CHECK(kt::rel_err(static_cast<double>(ml.coefficient(n)), naive) < 1e-12);
    }
}

TEST_CASE("ml_k truncation error carries the partial sum") {
    const PrabhakarParams p(1.0, 1.0, 1.0, 1.0, 0.0);
    SeriesControl c;
    c.max_terms = 5;
    try {
        ml_k(10.0, p, c);
        FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
        CHECK(e.partial_sum() > 1.0);
        CHECK(e.last_term() > 0.0);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PrabhakarParams(0.0, 1, 1, 1, 0), DomainError);
    CHECK_THROWS_AS(PrabhakarParams(1, -1, 1, 1, 0), DomainError);
    CHECK_THROWS_WITH_AS(PrabhakarParams(1, 1, -1, 1, 0), doctest::Contains("mu must be > 0"), DomainError);
    const PrabhakarParams p(1, 1, 0.5, 1, 0);
    CHECK_THROWS_WITH_AS(HilferParams(p, 1.5), doctest::Contains("nu must be in [0,1]"), DomainError);
    CHECK_THROWS_AS(HilferParams(p.with_mu(1.5), 0.5), DomainError);
    SeriesControl c;
    c.rel_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("prabhakar_kernel") {
    const PrabhakarParams p(1.3, 0.8, 0.7, 0.4, -0.6);
    CHECK(prabhakar_kernel(-1.0, p) == 0.0);
    CHECK(prabhakar_kernel(0.0, p) == 0.0);
    const PrabhakarParams ex(1, 1, 1, 1, -1);
    CHECK(kt::rel_err(prabhakar_kernel(1.0, ex), std::exp(-1.0)) < 1e-13);
    for (double t : {0.1, 0.9, 2.5})
        CHECK(kt::rel_err(prabhakar_kernel(t, ex), std::exp(-t)) < 1e-13);
    const PrabhakarParams w0(2.2, 0.8, 0.7, 0.4, 0.0);
    CHECK(kt::rel_err(prabhakar_kernel(1.0, w0), 1.0 / (2.2 * k_gamma(0.7, 2.2))) < 1e-15);
}

TEST_CASE("kernel is positive for gamma, omega >= 0") {
    for (double k : {0.6, 1.0, 2.0})
        for (double g : {0.0, 0.5, 2.0}) {
            const PrabhakarParams p(k, 0.9, 0.4 * k, g, 0.7);
            for (double t = 1e-6; t < 0.5; t *= 3.0)
                CHECK(prabhakar_kernel(t, p) > 0.0);
        }
}
