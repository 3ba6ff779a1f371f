#include "transforms.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "operators.hpp"
#include "quadrature.hpp"

namespace kprab {

namespace {

void require_positive_variable(double u) {
    if (!(u > 0.0) || !std::isfinite(u)) {
        std::ostringstream os;
        os << "transform variable must be > 0 (got " << u << ")";
        throw DomainError(os.str());
    }
}

void require_arity(OperatorKind kind, const PrabhakarParams& p, const BoundaryData& bd) {
    const auto [ni, nf] = boundary_arity(kind, p);
    if (bd.initial_values.size() != ni || bd.frozen_integral_terms.size() != nf) {
        std::ostringstream os;
        os << to_string(kind) << " needs " << ni << " initial value(s) and " << nf
           << " frozen integral term(s); got " << bd.initial_values.size() << " and "
           << bd.frozen_integral_terms.size();
        throw ContractError(os.str());
    }
}

bool is_hilfer(OperatorKind kind) {
    return kind == OperatorKind::HPDeriv || kind == OperatorKind::RegHPDeriv;
}

double finite_or_throw(double v, const char* what, double t) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << what << " is not finite at " << t;
        throw EvaluationError(os.str());
    }
    return v;
}

// int_0^1 e^(-x s) (1-s) ds and int_0^1 e^(-x s) s ds
void exp_linear_weights(double x, double& w0, double& w1) {
    if (std::fabs(x) < 0.1) {
        double term = 1.0;
        w0 = 0.0;
        w1 = 0.0;
        for (int n = 0; n < 10; ++n) {
            w0 += term / ((n + 1.0) * (n + 2.0));
            w1 += term / (n + 2.0);
            term *= -x / (n + 1.0);
        }
        return;
    }
    const double e = std::exp(-x);
    w0 = (x - 1.0 + e) / (x * x);
    w1 = (1.0 - (1.0 + x) * e) / (x * x);
}

}  // namespace

void TransformQuery::validate() const { require_positive_variable(variable); }

const char* to_string(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::PIntegral: return "PIntegral";
        case OperatorKind::PDeriv: return "PDeriv";
        case OperatorKind::RegPDeriv: return "RegPDeriv";
        case OperatorKind::HPDeriv: return "HPDeriv";
        case OperatorKind::RegHPDeriv: return "RegHPDeriv";
    }
    return "?";
}

double laplace_factor(double u, const PrabhakarParams& p) {
    require_positive_variable(u);
    const double k = p.k();
    const double z = p.omega() * k * std::pow(k * u, -p.alpha() / k);
    if (!(std::fabs(z) < 1.0)) {
        std::ostringstream os;
        os << "convergence condition |omega k (k u)^(-alpha/k)| < 1 violated (value " << std::fabs(z)
           << " at u=" << u << ")";
        throw DomainError(os.str());
    }
    return 1.0 - z;
}

double sumudu_factor(double u, const PrabhakarParams& p) {
    require_positive_variable(u);
    const double k = p.k();
    const double z = p.omega() * k * std::pow(u / k, p.alpha() / k);
    if (!(std::fabs(z) < 1.0)) {
        std::ostringstream os;
        os << "convergence condition |omega k (u/k)^(alpha/k)| < 1 violated (value " << std::fabs(z)
           << " at u=" << u << ")";
        throw DomainError(os.str());
    }
    return 1.0 - z;
}

double laplace_kernel_closed(double u, const PrabhakarParams& p) {
    const double a = laplace_factor(u, p);
    const double k = p.k();
    return std::pow(k * u, -p.mu() / k) * std::pow(a, -p.gamma() / k);
}

double sumudu_kernel_closed(double u, const PrabhakarParams& p) {
    const double a = sumudu_factor(u, p);
    const double k = p.k();
    return std::pow(u / k, p.mu() / k) * std::pow(a, -p.gamma() / k) / u;
}

double kernel_closed(const TransformQuery& q, const PrabhakarParams& p) {
    q.validate();
    return q.kind == TransformKind::Laplace ? laplace_kernel_closed(q.variable, p)
                                            : sumudu_kernel_closed(q.variable, p);
}

std::complex<double> laplace_kernel_closed(std::complex<double> s, const PrabhakarParams& p) {
    const double k = p.k();
    const std::complex<double> ks = k * s;
    const std::complex<double> a = 1.0 - p.omega() * k * std::pow(ks, -p.alpha() / k);
    return std::pow(ks, -p.mu() / k) * std::pow(a, -p.gamma() / k);
}

double laplace_kernel_abscissa(const PrabhakarParams& p) {
    if (p.omega() <= 0.0)
        return 0.0;
    const double k = p.k();
    return std::pow(p.omega() * k, k / p.alpha()) / k;
}

std::pair<std::size_t, std::size_t> boundary_arity(OperatorKind kind, const PrabhakarParams& p) {
    const auto m = static_cast<std::size_t>(derivative_order(p));
    switch (kind) {
        case OperatorKind::PIntegral: return {0, 0};
        case OperatorKind::PDeriv: return {0, m};
        case OperatorKind::RegPDeriv: return {m, 0};
        case OperatorKind::HPDeriv: return {0, 1};
        case OperatorKind::RegHPDeriv: return {1, 0};
    }
    return {0, 0};
}

double laplace_operator_closed(OperatorKind kind, double u, const PrabhakarParams& p, double F,
                               const BoundaryData& bd, double nu) {
    if (is_hilfer(kind))
        (void)HilferParams(p, nu);
    require_arity(kind, p, bd);
    const double a = laplace_factor(u, p);
    const double k = p.k(), mu = p.mu(), g = p.gamma();
    const double ku = k * u;
    if (kind == OperatorKind::PIntegral)
        return std::pow(ku, -mu / k) * std::pow(a, -g / k) * F;

    const double main = std::pow(ku, mu / k) * std::pow(a, g / k) * F;
    double sub = 0.0;
    switch (kind) {
        case OperatorKind::PDeriv:
            for (std::size_t n = 0; n < bd.frozen_integral_terms.size(); ++n)
                sub += k * std::pow(ku, static_cast<double>(n)) * bd.frozen_integral_terms[n];
            break;
        case OperatorKind::RegPDeriv:
            for (std::size_t n = 0; n < bd.initial_values.size(); ++n) {
                const double nn = static_cast<double>(n);
                sub += std::pow(k, nn + 1.0) * std::pow(ku, (mu - (nn + 1.0) * k) / k) *
                       std::pow(a, g / k) * bd.initial_values[n];
            }
            break;
        case OperatorKind::HPDeriv:
            sub = k * std::pow(ku, -nu * (k - mu) / k) * std::pow(a, g * nu / k) *
                  bd.frozen_integral_terms[0];
            break;
        case OperatorKind::RegHPDeriv:
            sub = k * std::pow(ku, -(k - mu) / k) * std::pow(a, g / k) * bd.initial_values[0];
            break;
        default: break;
    }
    return main - sub;
}

double sumudu_operator_closed(OperatorKind kind, double u, const PrabhakarParams& p, double F,
                              const BoundaryData& bd, double nu) {
    if (is_hilfer(kind))
        (void)HilferParams(p, nu);
    require_arity(kind, p, bd);
    const double a = sumudu_factor(u, p);
    const double k = p.k(), mu = p.mu(), g = p.gamma();
    const double uk = u / k;
    if (kind == OperatorKind::PIntegral)
        return std::pow(uk, mu / k) * std::pow(a, -g / k) * F;

    switch (kind) {
        case OperatorKind::PDeriv: {
            double sub = 0.0;
            for (std::size_t n = 0; n < bd.frozen_integral_terms.size(); ++n)
                sub += std::pow(k / u, static_cast<double>(n) + 1.0) * bd.frozen_integral_terms[n];
            return std::pow(uk, -mu / k) * std::pow(a, g / k) * F - sub;
        }
        case OperatorKind::RegPDeriv: {
            double sub = 0.0;
            for (std::size_t n = 0; n < bd.initial_values.size(); ++n) {
                const double nn = static_cast<double>(n);
                sub += std::pow(k, nn) * std::pow(uk, (nn * k - mu) / k) * bd.initial_values[n];
            }
            return std::pow(a, g / k) * (std::pow(uk, -mu / k) * F - sub);
        }
        case OperatorKind::HPDeriv:
            return std::pow(uk, -mu / k) * std::pow(a, g / k) * F -
                   std::pow(uk, nu * (k - mu) / k - 1.0) * std::pow(a, g * nu / k) *
                       bd.frozen_integral_terms[0];
        case OperatorKind::RegHPDeriv:
            return std::pow(uk, -mu / k) * std::pow(a, g / k) * (F - bd.initial_values[0]);
        default: break;
    }
    return 0.0;
}

double operator_closed(OperatorKind kind, const TransformQuery& q, const PrabhakarParams& p,
                       double F, const BoundaryData& bd, double nu) {
    q.validate();
    return q.kind == TransformKind::Laplace ? laplace_operator_closed(kind, q.variable, p, F, bd, nu)
                                            : sumudu_operator_closed(kind, q.variable, p, F, bd, nu);
}

NumericTransform numerical_laplace(const std::function<double(double)>& f, double s, double tol) {
    require_positive_variable(s);
    if (!(tol > 0.0))
        throw DomainError("tol must be > 0");

    double T = 1.0 / s;
    double fmax = 0.0;
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
        fmax = 0.0;
        for (int j = 1; j <= 256; ++j) {
            const double t = T * j / 256.0;
            fmax = std::max(fmax, std::fabs(finite_or_throw(f(t), "integrand", t)));
        }
        if (std::exp(-s * T) * fmax < tol / 10.0) {
            ok = true;
            break;
        }
        T *= 2.0;
    }
    if (!ok) {
        std::ostringstream os;
        os << "no horizon meets the Laplace tail bound at s=" << s;
        throw HorizonError(os.str());
    }

    boost::math::quadrature::tanh_sinh<double> ts;
    const double width = std::max(std::min(1.0, 4.0 / s), T / 200.0);
    const int panels = static_cast<int>(std::ceil(T / width));
    auto integrand = [&](double t) { return std::exp(-s * t) * f(t); };
    double total = 0.0;
    for (int j = 0; j < panels; ++j) {
        const double a = j * width;
        const double b = std::min(T, (j + 1) * width);
        total += ts.integrate(integrand, a, b, 1e-13);
    }
    finite_or_throw(total, "Laplace integral", s);
    return {total, std::exp(-s * T) * fmax / s, T};
}

NumericTransform numerical_laplace(const SampledFunction& f, double s, double tol) {
    require_positive_variable(s);
    f.check();
    if (f.grid.origin() != 0.0)
        throw DomainError("numerical Laplace needs a grid with origin 0");
    const double h = f.grid.step();
    const std::size_t n = f.grid.count();
    double w0, w1;
    exp_linear_weights(s * h, w0, w1);

    double total = 0.0;
    std::size_t first = 0;
    const double lead = f.leading_exponent;
    if (f.is_regular() && lead > -1.0 && std::fabs(lead - std::round(lead)) > 1e-10) {
        // x^e phi with phi linear per cell; node 0 is not used
        if (n < 3)
            throw DomainError("power-weighted transform needs at least 3 nodes");
        std::vector<double> phi(n);
        for (std::size_t j = 1; j < n; ++j)
            phi[j] = f.values[j] * std::pow(f.grid.node(j), -lead);
        phi[0] = 2.0 * phi[1] - phi[2];
        const auto jac = gauss_jacobi01(20, lead);
        double acc = 0.0;
        for (std::size_t g = 0; g < jac.size(); ++g) {
            const double x = jac.nodes[g];
            acc += jac.weights[g] * std::exp(-s * h * x) * (phi[0] * (1.0 - x) + phi[1] * x);
        }
        total += std::pow(h, lead + 1.0) * acc;
        const auto gl = gauss_legendre01(10);
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double t0 = f.grid.node(j);
            double cell = 0.0;
            for (std::size_t g = 0; g < gl.size(); ++g) {
                const double x = gl.nodes[g];
                const double t = t0 + h * x;
                cell += gl.weights[g] * std::exp(-s * t) * std::pow(t, lead) *
                        (phi[j] * (1.0 - x) + phi[j + 1] * x);
            }
            total += h * cell;
        }
        first = n;
    } else if (!f.is_regular()) {
        // first cell: t^sigma (phi0 (1 - t/h) + phi1 t/h) e^(-st), Gauss-Jacobi in t/h
        const double sigma = f.origin_exponent;
        const double phi0 = f.values[0];
        const double phi1 = f.values[1] * std::pow(h, -sigma);
        const auto rule = gauss_jacobi01(20, sigma);
        double acc = 0.0;
        for (std::size_t g = 0; g < rule.size(); ++g) {
            const double x = rule.nodes[g];
            acc += rule.weights[g] * std::exp(-s * h * x) * (phi0 * (1.0 - x) + phi1 * x);
        }
        total += std::pow(h, sigma + 1.0) * acc;
        first = 1;
    }
    for (std::size_t j = first; j + 1 < n; ++j) {
        const double e = std::exp(-s * f.grid.node(j));
        total += e * h * (w0 * f.values[j] + w1 * f.values[j + 1]);
    }
    const double T = f.grid.last();
    const double tail = std::exp(-s * T) * std::fabs(f.values[n - 1]) / s;
    if (tail > tol) {
        std::ostringstream os;
        os << "sampled horizon T=" << T << " too short for s=" << s << " (tail estimate " << tail
           << ")";
        throw HorizonError(os.str());
    }
    return {total, tail, T};
}

NumericTransform numerical_sumudu(const std::function<double(double)>& f, double u, double tol) {
    require_positive_variable(u);
    auto r = numerical_laplace(f, 1.0 / u, tol);
    r.value /= u;
    r.tail_estimate /= u;
    return r;
}

NumericTransform numerical_sumudu(const SampledFunction& f, double u, double tol) {
    require_positive_variable(u);
    auto r = numerical_laplace(f, 1.0 / u, tol);
    r.value /= u;
    r.tail_estimate /= u;
    return r;
}

double inverse_laplace_talbot(const ComplexTransform& F, double t, int nodes, double shift) {
    if (!(t > 0.0))
        throw DomainError("Talbot inversion needs t > 0");
    if (nodes < 2)
        throw DomainError("Talbot inversion needs at least 2 nodes");
    const double M = nodes;
    const double r = 2.0 * M / (5.0 * t);
    auto eval = [&](std::complex<double> s) {
        const auto v = F(s + shift);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os << "transform is not finite on the Talbot contour at s=" << (s + shift).real() << "+"
               << (s + shift).imag() << "i";
            throw EvaluationError(os.str());
        }
        return v;
    };
    double acc = 0.5 * std::exp(r * t) * eval({r, 0.0}).real();
    for (int j = 1; j < nodes; ++j) {
        const double th = j * std::numbers::pi / M;
        const double cot = 1.0 / std::tan(th);
        const std::complex<double> s(r * th * cot, r * th);
        const double sig = th + (th * cot - 1.0) * cot;
        acc += (std::exp(t * s) * eval(s) * std::complex<double>(1.0, sig)).real();
    }
    return std::exp(shift * t) * r / M * acc;
}

}  // namespace kprab
