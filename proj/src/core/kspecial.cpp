#include "kspecial.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace kprab {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be > 0 (got " << v << ")";
        throw DomainError(os.str());
    }
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be finite (got " << v << ")";
        throw DomainError(os.str());
    }
}

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
    long double sum = 0.0L;
    long double comp = 0.0L;

    void add(long double x) {
        const long double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    long double value() const { return sum + comp; }
};

}  // namespace

PrabhakarParams::PrabhakarParams(double k, double alpha, double mu, double gamma, double omega)
    : k_(k), alpha_(alpha), mu_(mu), gamma_(gamma), omega_(omega) {
    require_positive(k, "k");
    require_positive(alpha, "alpha");
    require_positive(mu, "mu");
    require_finite(gamma, "gamma");
    require_finite(omega, "omega");
}

HilferParams::HilferParams(const PrabhakarParams& base, double nu) : base_(base), nu_(nu) {
    if (!(nu >= 0.0 && nu <= 1.0)) {
        std::ostringstream os;
        os << "nu must be in [0,1] (got " << nu << ")";
        throw DomainError(os.str());
    }
    if (!(base.mu() < base.k())) {
        std::ostringstream os;
        os << "mu must be in (0,k) for the Hilfer-Prabhakar derivative (got mu=" << base.mu()
           << ", k=" << base.k() << ")";
        throw DomainError(os.str());
    }
}

void SeriesControl::validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw DomainError("rel_tol must be in (0,1)");
    if (max_terms < 1)
        throw DomainError("max_terms must be >= 1");
}

long double gamma_ratio(long double x, long double d) {
    if (x + d < 1500.0L && x < 1500.0L)
        return std::tgamma(x) / std::tgamma(x + d);
    return std::exp(std::lgamma(x) - std::lgamma(x + d));
}

long double k_gamma_ld(long double z, long double k) {
    const long double x = z / k;
    if (x < 1500.0L)
        return std::pow(k, x - 1.0L) * std::tgamma(x);
    return std::exp((x - 1.0L) * std::log(k) + std::lgamma(x));
}

double k_gamma(double z, double k) {
    require_positive(z, "z");
    require_positive(k, "k");
    return static_cast<double>(k_gamma_ld(z, k));
}

double k_pochhammer(double g, int n, double k) {
    if (n < 0)
        throw DomainError("n must be >= 0");
    double prod = 1.0;
    for (int i = 0; i < n; ++i)
        prod *= g + i * k;
    return prod;
}

MittagLefflerK::MittagLefflerK(const PrabhakarParams& p, SeriesControl ctrl)
    : params_(p), ctrl_(ctrl) {
    ctrl_.validate();
    const std::size_t n_cache =
        std::min<std::size_t>(kCachedTerms, static_cast<std::size_t>(ctrl_.max_terms) + 1);
    coeff_.reserve(n_cache);
    coeff_.push_back(1.0L / k_gamma_ld(p.mu(), p.k()));
    for (std::size_t n = 0; coeff_.size() < n_cache; ++n)
        coeff_.push_back(next_coefficient(coeff_.back(), n));
    stable_index_ = static_cast<std::size_t>(std::ceil(std::fabs(p.gamma()) / p.k())) + 1;
}

long double MittagLefflerK::next_coefficient(long double a_n, std::size_t n) const {
    if (a_n == 0.0L)
        return 0.0L;
    const long double k = params_.k();
    const long double step = static_cast<long double>(params_.alpha()) / k;
    const long double x = (static_cast<long double>(params_.alpha()) * n + params_.mu()) / k;
    const long double ratio = std::pow(k, -step) * gamma_ratio(x, step);
    return a_n * (params_.gamma() + static_cast<long double>(n) * k) / (n + 1.0L) * ratio;
}

long double MittagLefflerK::coefficient(std::size_t n) const {
    if (n < coeff_.size())
        return coeff_[n];
    long double a = coeff_.back();
    for (std::size_t i = coeff_.size() - 1; i < n; ++i)
        a = next_coefficient(a, i);
    return a;
}

double MittagLefflerK::term_exponent(std::size_t n) const {
    return (params_.alpha() * static_cast<double>(n) + params_.mu()) / params_.k();
}

long double MittagLefflerK::evaluate_ld(long double z) const {
    CompensatedSum acc;
    long double a = coeff_[0];
    long double zn = 1.0L;
    long double prev_term = a;
    acc.add(prev_term);
    if (z == 0.0L)
        return acc.value();

    long double prev_ratio = std::numeric_limits<long double>::infinity();
    const auto max_terms = static_cast<std::size_t>(ctrl_.max_terms);
    for (std::size_t n = 1; n < max_terms; ++n) {
        a = n < coeff_.size() ? coeff_[n] : next_coefficient(a, n - 1);
        zn *= z;
        const long double term = a * zn;
        acc.add(term);
        if (term == 0.0L)
            return acc.value();
        const long double ratio = std::fabs(term / prev_term);
        if (n >= stable_index_ && ratio < 1.0L && ratio <= prev_ratio) {
            const long double tail = std::fabs(term) * ratio / (1.0L - ratio);
            if (tail <= ctrl_.rel_tol * std::fabs(acc.value()))
                return acc.value();
        }
        prev_ratio = ratio;
        prev_term = term;
    }
    std::ostringstream os;
    os << "k-Mittag-Leffler series did not converge within " << ctrl_.max_terms
       << " terms at z=" << static_cast<double>(z);
    throw TruncationError(os.str(), static_cast<double>(acc.value()),
                          static_cast<double>(std::fabs(prev_term)));
}

double MittagLefflerK::operator()(double z) const {
    return static_cast<double>(evaluate_ld(z));
}

double ml_k(double z, const PrabhakarParams& p, const SeriesControl& ctrl) {
    return MittagLefflerK(p, ctrl)(z);
}

PrabhakarKernel::PrabhakarKernel(const PrabhakarParams& p, SeriesControl ctrl) : ml_(p, ctrl) {}

double PrabhakarKernel::operator()(double t) const {
    if (t <= 0.0)
        return 0.0;
    const auto& p = ml_.params();
    const long double tl = t;
    const long double z = p.omega() * std::pow(tl, static_cast<long double>(p.alpha()) / p.k());
    const long double pre = std::pow(tl, static_cast<long double>(p.mu()) / p.k() - 1.0L) / p.k();
    return static_cast<double>(pre * ml_.evaluate_ld(z));
}

double prabhakar_kernel(double t, const PrabhakarParams& p, const SeriesControl& ctrl) {
    return PrabhakarKernel(p, ctrl)(t);
}

}  // namespace kprab
