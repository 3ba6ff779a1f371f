#pragma once

#include <cstddef>
#include <vector>

namespace kprab {

// Parameter tuple (k, alpha, mu, gamma, omega) shared by every kernel,
// operator and transform. Construction validates k, alpha, mu > 0.
class PrabhakarParams {
public:
    PrabhakarParams(double k, double alpha, double mu, double gamma, double omega);

    double k() const noexcept { return k_; }
    double alpha() const noexcept { return alpha_; }
    double mu() const noexcept { return mu_; }
    double gamma() const noexcept { return gamma_; }
    double omega() const noexcept { return omega_; }

    PrabhakarParams with_mu(double mu) const { return {k_, alpha_, mu, gamma_, omega_}; }
    PrabhakarParams with_gamma(double gamma) const { return {k_, alpha_, mu_, gamma, omega_}; }
    PrabhakarParams with_order(double mu, double gamma) const {
        return {k_, alpha_, mu, gamma, omega_};
    }

private:
    double k_, alpha_, mu_, gamma_, omega_;
};

// Adds the Hilfer interpolation weight nu. Requires 0 <= nu <= 1 and
// 0 < mu < k (the k-scaled form of mu in (0,1), so m = 1).
class HilferParams {
public:
    HilferParams(const PrabhakarParams& base, double nu);

    const PrabhakarParams& base() const noexcept { return base_; }
    double nu() const noexcept { return nu_; }

private:
    PrabhakarParams base_;
    double nu_;
};

struct SeriesControl {
    double rel_tol = 1e-14;
    int max_terms = 500;

    void validate() const;
};

double k_gamma(double z, double k);
long double k_gamma_ld(long double z, long double k);

// (g)_{n,k} = g (g+k) ... (g+(n-1)k); empty product for n = 0.
double k_pochhammer(double g, int n, double k);

// Evaluator for E^gamma_{k,alpha,mu}(z) = sum (gamma)_{n,k} z^n / (Gamma_k(alpha n+mu) n!).
//
// The coefficients a_n = (gamma)_{n,k} / (n! Gamma_k(alpha n + mu)) depend only on the
// parameters, so one evaluator is built per parameter set and then reused for
// every argument. Coefficients come from the ratio recurrence
//   a_{n+1} = a_n (gamma + n k) / (n + 1) * Gamma_k(alpha n + mu) / Gamma_k(alpha n + alpha + mu)
// in long double; the first kCachedTerms are cached, later ones are
// continued on the fly so evaluate() stays const and thread-safe.
class MittagLefflerK {
public:
    static constexpr std::size_t kCachedTerms = 96;

    explicit MittagLefflerK(const PrabhakarParams& p, SeriesControl ctrl = {});

    // Throws TruncationError if the tail cannot be certified within max_terms.
    double operator()(double z) const;
    long double evaluate_ld(long double z) const;

    long double coefficient(std::size_t n) const;
    // Power of t carried by term n of the kernel series: (alpha n + mu)/k.
    double term_exponent(std::size_t n) const;

    const PrabhakarParams& params() const noexcept { return params_; }
    const SeriesControl& control() const noexcept { return ctrl_; }
    // First index from which the Pochhammer factor has stopped shrinking
    // the terms; the truncation test is not trusted before it.
    std::size_t stable_index() const noexcept { return stable_index_; }

private:
    long double next_coefficient(long double a_n, std::size_t n) const;

    PrabhakarParams params_;
    SeriesControl ctrl_;
    std::vector<long double> coeff_;
    std::size_t stable_index_;
};

double ml_k(double z, const PrabhakarParams& p, const SeriesControl& ctrl = {});

// eps(t) = t^(mu/k - 1)/k * E^gamma_{k,alpha,mu}(omega t^(alpha/k)) for t > 0, 0 otherwise.
class PrabhakarKernel {
public:
    explicit PrabhakarKernel(const PrabhakarParams& p, SeriesControl ctrl = {});
    double operator()(double t) const;
    const MittagLefflerK& mittag_leffler() const noexcept { return ml_; }

private:
    MittagLefflerK ml_;
};

double prabhakar_kernel(double t, const PrabhakarParams& p, const SeriesControl& ctrl = {});

// Gamma(x)/Gamma(x+d) for x > 0, x + d > 0, without overflow.
long double gamma_ratio(long double x, long double d);

}  // namespace kprab
