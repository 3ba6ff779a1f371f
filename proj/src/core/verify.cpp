#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <map>
#include <memory>
#include <sstream>

#include "errors.hpp"
#include "operators.hpp"
#include "parallel.hpp"
#include "transforms.hpp"

namespace kprab {

namespace {

struct NamedId {
    IdentityId id;
    const char* name;
};

constexpr NamedId kNames[] = {
    {IdentityId::Composition_2_12, "Composition_2_12"},
    {IdentityId::Relation_3_7, "Relation_3_7"},
    {IdentityId::Relation_3_16, "Relation_3_16"},
    {IdentityId::Reduce_gamma0_Hilfer, "Reduce_gamma0_Hilfer"},
    {IdentityId::Reduce_nu0, "Reduce_nu0"},
    {IdentityId::Reduce_nu1, "Reduce_nu1"},
    {IdentityId::Reduce_k1_classical, "Reduce_k1_classical"},
    {IdentityId::LaplaceLemma_3_1, "LaplaceLemma_3_1"},
    {IdentityId::LaplaceLemma_3_2, "LaplaceLemma_3_2"},
    {IdentityId::LaplaceLemma_3_3, "LaplaceLemma_3_3"},
    {IdentityId::LaplaceLemma_3_4, "LaplaceLemma_3_4"},
    {IdentityId::SumuduLemma_3_5, "SumuduLemma_3_5"},
    {IdentityId::SumuduLemma_3_6, "SumuduLemma_3_6"},
    {IdentityId::SumuduLemma_3_7, "SumuduLemma_3_7"},
    {IdentityId::SumuduLemma_3_8, "SumuduLemma_3_8"},
    {IdentityId::SumuduLemma_3_9, "SumuduLemma_3_9"},
    {IdentityId::Duality_Sumudu_Laplace, "Duality_Sumudu_Laplace"},
};

constexpr double kLaplaceU = 2.0;
constexpr double kSumuduU = 0.5;
constexpr double kLemmaHorizon = 16.0;
constexpr double kWindow = 0.125;
constexpr double kRefineFactor = 0.6;
// below this fraction of the threshold the error is roundoff, not discretization
constexpr double kRefineFloor = 1e-4;

// ---- test functions -------------------------------------------------------

using Fn = std::function<double(double)>;

struct TestFunction {
    Fn f, d1, d2;
    Fn laplace;
    // power coefficients when f is a polynomial
    std::vector<double> poly;
};

const TestFunction& test_function(const std::string& id) {
    static const std::map<std::string, TestFunction> table = {
        {"one", {[](double) { return 1.0; }, [](double) { return 0.0; },
                 [](double) { return 0.0; }, [](double s) { return 1.0 / s; }, {1.0}}},
        {"t", {[](double t) { return t; }, [](double) { return 1.0; }, [](double) { return 0.0; },
               [](double s) { return 1.0 / (s * s); }, {0.0, 1.0}}},
        {"t2", {[](double t) { return t * t; }, [](double t) { return 2.0 * t; },
                [](double) { return 2.0; }, [](double s) { return 2.0 / (s * s * s); },
                {0.0, 0.0, 1.0}}},
        {"exp_neg", {[](double t) { return std::exp(-t); }, [](double t) { return -std::exp(-t); },
                     [](double t) { return std::exp(-t); },
                     [](double s) { return 1.0 / (s + 1.0); }, {}}},
        {"sin", {[](double t) { return std::sin(t); }, [](double t) { return std::cos(t); },
                 [](double t) { return -std::sin(t); },
                 [](double s) { return 1.0 / (s * s + 1.0); }, {}}},
        {"t_exp_neg", {[](double t) { return t * std::exp(-t); },
                       [](double t) { return (1.0 - t) * std::exp(-t); },
                       [](double t) { return (t - 2.0) * std::exp(-t); },
                       [](double s) { return 1.0 / ((s + 1.0) * (s + 1.0)); }, {}}},
        {"quad", {[](double t) { return 1.0 + t + t * t; }, [](double t) { return 1.0 + 2.0 * t; },
                  [](double) { return 2.0; },
                  [](double s) { return 1.0 / s + 1.0 / (s * s) + 2.0 / (s * s * s); },
                  {1.0, 1.0, 1.0}}},
        {"affine", {[](double t) { return 1.0 + t; }, [](double) { return 1.0; },
                    [](double) { return 0.0; },
                    [](double s) { return 1.0 / s + 1.0 / (s * s); }, {1.0, 1.0}}},
    };
    const auto it = table.find(id);
    if (it == table.end())
        throw ContractError("unknown test function '" + id + "'");
    return it->second;
}

double derivative_at_zero(const TestFunction& tf, int n) {
    switch (n) {
        case 0: return tf.f(0.0);
        case 1: return tf.d1(0.0);
        case 2: return tf.d2(0.0);
        default: throw ContractError("test functions carry derivatives up to order 2");
    }
}

const std::vector<double>& require_poly(const TestFunction& tf, const std::string& id) {
    if (tf.poly.empty())
        throw ContractError("test function '" + id + "' has no closed form for this identity");
    return tf.poly;
}

const char* error_class(const std::exception& e) {
    if (dynamic_cast<const DomainError*>(&e))
        return "domain error";
    if (dynamic_cast<const TruncationError*>(&e) || dynamic_cast<const DivergenceError*>(&e) ||
        dynamic_cast<const HorizonError*>(&e))
        return "convergence error";
    if (dynamic_cast<const EvaluationError*>(&e))
        return "evaluation error";
    return "error";
}

// ---- comparison -----------------------------------------------------------

struct Outcome {
    double abs = 0.0;
    double rel = 0.0;
    std::string lhs_path, rhs_path;
};

Outcome compare(const std::vector<double>& lhs, const std::vector<double>& rhs, const Grid1D& g,
                bool windowed) {
    const double x0 = windowed ? kWindow * g.last() : 0.0;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i < lhs.size(); ++i) {
        if (g.node(i) < x0)
            continue;
        num = std::max(num, std::fabs(lhs[i] - rhs[i]));
        den = std::max(den, std::fabs(rhs[i]));
    }
    return {num, den > 0.0 ? num / den : num, {}, {}};
}

Outcome compare_scalar(double lhs, double rhs) {
    const double a = std::fabs(lhs - rhs);
    return {a, std::fabs(rhs) > 0.0 ? a / std::fabs(rhs) : a, {}, {}};
}

// ---- independent power-law k-Riemann-Liouville algebra --------------------

using PowerSeries = std::vector<std::pair<double, double>>;  // (coefficient, exponent)

double plain_k_gamma(double z, double k) { return std::pow(k, z / k - 1.0) * std::tgamma(z / k); }

PowerSeries rl_power(const PowerSeries& s, double a, double k) {
    if (a == 0.0)
        return s;
    PowerSeries out;
    const double q = a / k;
    for (const auto& [c, b] : s) {
        const double beta = std::tgamma(q) * std::tgamma(b + 1.0) / std::tgamma(q + b + 1.0);
        out.emplace_back(c * beta / (k * plain_k_gamma(a, k)), b + q);
    }
    return out;
}

PowerSeries diff_power(const PowerSeries& s) {
    PowerSeries out;
    for (const auto& [c, b] : s)
        if (b != 0.0)
            out.emplace_back(c * b, b - 1.0);
    return out;
}

double eval_power(const PowerSeries& s, double x) {
    double v = 0.0;
    for (const auto& [c, b] : s)
        v += c * std::pow(x, b);
    return v;
}

// P^gamma[t^m](x) = m! k^m x^(mu/k+m) E^gamma_{k,alpha,mu+(m+1)k}(omega x^(alpha/k))
std::vector<double> prabhakar_of_poly(const std::vector<double>& poly, const PrabhakarParams& p,
                                      const Grid1D& g, const SeriesControl& ctrl) {
    std::vector<double> out(g.count(), 0.0);
    const double k = p.k();
    double fact = 1.0;
    for (std::size_t m = 0; m < poly.size(); ++m) {
        if (m > 0)
            fact *= static_cast<double>(m);
        if (poly[m] == 0.0)
            continue;
        const MittagLefflerK E(p.with_mu(p.mu() + (m + 1.0) * k), ctrl);
        const double c = poly[m] * fact * std::pow(k, static_cast<double>(m));
        for (std::size_t i = 1; i < out.size(); ++i) {
            const double x = g.node(i);
            out[i] += c * std::pow(x, p.mu() / k + m) * E(p.omega() * std::pow(x, p.alpha() / k));
        }
    }
    return out;
}

// E^g_{k,a,b} for any real b (not a pole). For b <= 0 it uses
// 1/Gamma_k(x) = x/Gamma_k(x+k) and d/dz E^g_{k,a,b} = g E^{g+k}_{k,a,b+a}:
//   E^g_{k,a,b}(z) = b E^g_{k,a,b+k}(z) + a g z E^{g+k}_{k,a,b+k+a}(z)
Fn ml_k_any(double k, double a, double b, double g, const SeriesControl& ctrl) {
    if (b > 0.0) {
        auto E = std::make_shared<MittagLefflerK>(PrabhakarParams(k, a, b, g, 0.0), ctrl);
        return [E](double z) { return (*E)(z); };
    }
    auto lo = ml_k_any(k, a, b + k, g, ctrl);
    auto hi = ml_k_any(k, a, b + k + a, g + k, ctrl);
    return [=](double z) { return b * lo(z) + a * g * z * hi(z); };
}

// ---- identity evaluators --------------------------------------------------

PrabhakarParams params_of(const IdentityCase& c) {
    return {c.k, c.alpha, c.mu, c.gamma, c.omega};
}

Outcome composition(const IdentityCase& c, const Grid1D& g, const SeriesControl& ctrl) {
    const auto& tf = test_function(c.test_function_id);
    const auto outer = params_of(c);
    const auto inner = outer.with_order(0.5 * c.mu, 0.5 * c.gamma);
    const auto joint = outer.with_order(1.5 * c.mu, 1.5 * c.gamma);
    const auto f = SampledFunction::sample(g, tf.f);
    const auto lhs = prabhakar_integral(prabhakar_integral(f, inner, ctrl), outer, ctrl);
    Outcome o;
    if (!tf.poly.empty()) {
        o = compare(lhs.values, prabhakar_of_poly(tf.poly, joint, g, ctrl), g, false);
        o.rhs_path = "closed_form:ml_k";
    } else {
        o = compare(lhs.values, prabhakar_integral(f, joint, ctrl).values, g, false);
        o.rhs_path = "product_integration:single";
    }
    o.lhs_path = "product_integration:composed";
    return o;
}

Outcome relation_3_7(const IdentityCase& c, const Grid1D& g, const SeriesControl& ctrl) {
    const auto& tf = test_function(c.test_function_id);
    const auto p = params_of(c);
    const int m = derivative_order(p);
    const double k = p.k();
    const auto lhs = regularized_prabhakar_derivative(SampledFunction::sample(g, tf.f, tf.d1), p, ctrl);
    auto rhs = prabhakar_derivative(SampledFunction::sample(g, tf.f), p, ctrl).values;
    for (int n = 0; n < m; ++n) {
        const double f0 = derivative_at_zero(tf, n);
        if (f0 == 0.0)
            continue;
        const auto E = ml_k_any(k, p.alpha(), (n + 1.0) * k - p.mu(), -p.gamma(), ctrl);
        for (std::size_t i = 1; i < rhs.size(); ++i) {
            const double x = g.node(i);
            rhs[i] -= std::pow(k, n) * std::pow(x, (n * k - p.mu()) / k) *
                      E(p.omega() * std::pow(x, p.alpha() / k)) * f0;
        }
    }
    auto o = compare(lhs.values, rhs, g, true);
    o.lhs_path = "operators:regularized_prabhakar_derivative";
    o.rhs_path = "operators:prabhakar_derivative+ml_k_boundary";
    return o;
}

Outcome relation_3_16(const IdentityCase& c, const Grid1D& g, const SeriesControl& ctrl) {
    const auto& tf = test_function(c.test_function_id);
    const auto p = params_of(c);
    const HilferParams hp(p, c.nu);
    const double k = p.k();
    const auto lhs =
        regularized_hilfer_prabhakar_derivative(SampledFunction::sample(g, tf.f, tf.d1), hp, ctrl);
    auto rhs = hilfer_prabhakar_derivative(SampledFunction::sample(g, tf.f), hp, ctrl).values;
    const double f0 = tf.f(0.0);
    const MittagLefflerK E(p.with_order(k - p.mu(), -p.gamma()), ctrl);
    for (std::size_t i = 1; i < rhs.size(); ++i) {
        const double x = g.node(i);
        rhs[i] -= std::pow(x, -p.mu() / k) * E(p.omega() * std::pow(x, p.alpha() / k)) * f0;
    }
    auto o = compare(lhs.values, rhs, g, true);
    o.lhs_path = "operators:regularized_hilfer_prabhakar_derivative";
    o.rhs_path = "operators:hilfer_prabhakar_derivative+ml_k_boundary";
    return o;
}

Outcome reduce_gamma0(const IdentityCase& c, const Grid1D& g, const SeriesControl& ctrl) {
    if (c.gamma != 0.0)
        throw DomainError("Reduce_gamma0_Hilfer needs gamma = 0");
    const auto& tf = test_function(c.test_function_id);
    const auto& poly = require_poly(tf, c.test_function_id);
    const HilferParams hp(params_of(c), c.nu);
    const auto lhs = hilfer_prabhakar_derivative(SampledFunction::sample(g, tf.f), hp, ctrl);

    // k I^{nu(k-mu)} d/dt I^{(1-nu)(k-mu)} f, term by term on powers of t
    const double k = c.k, gap = c.k - c.mu;
    PowerSeries f;
    for (std::size_t j = 0; j < poly.size(); ++j)
        if (poly[j] != 0.0)
            f.emplace_back(poly[j], static_cast<double>(j));
    const auto hil = rl_power(diff_power(rl_power(f, (1.0 - c.nu) * gap, k)), c.nu * gap, k);
    std::vector<double> rhs(g.count(), 0.0);
    for (std::size_t i = 1; i < rhs.size(); ++i)
        rhs[i] = k * eval_power(hil, g.node(i));
    auto o = compare(lhs.values, rhs, g, true);
    o.lhs_path = "operators:hilfer_prabhakar_derivative";
    o.rhs_path = "power_law:k_hilfer_rl";
    return o;
}

Outcome reduce_nu0(const IdentityCase& c, const Grid1D& g, const SeriesControl& ctrl) {
    const auto& tf = test_function(c.test_function_id);
    const auto p = params_of(c);
    const auto f = SampledFunction::sample(g, tf.f);
    const auto lhs = hilfer_prabhakar_derivative(f, HilferParams(p, 0.0), ctrl);
    const auto rhs = prabhakar_derivative(f, p, ctrl);
    auto o = compare(lhs.values, rhs.values, g, true);
    o.lhs_path = "operators:hilfer_prabhakar_derivative[nu=0]";
    o.rhs_path = "operators:prabhakar_derivative";
    return o;
}

Outcome reduce_nu1(const IdentityCase& c, const Grid1D& g, const SeriesControl& ctrl) {
    const auto& tf = test_function(c.test_function_id);
    const auto p = params_of(c);
    const auto f = SampledFunction::sample(g, tf.f, tf.d1);
    const auto lhs = hilfer_prabhakar_derivative(f, HilferParams(p, 1.0), ctrl);
    const auto rhs = regularized_prabhakar_derivative(f, p, ctrl);
    auto o = compare(lhs.values, rhs.values, g, true);
    o.lhs_path = "operators:hilfer_prabhakar_derivative[nu=1]";
    o.rhs_path = "operators:regularized_prabhakar_derivative";
    return o;
}

Outcome reduce_k1(const IdentityCase& c, const Grid1D& g, const SeriesControl& ctrl) {
    if (c.k != 1.0)
        throw DomainError("Reduce_k1_classical needs k = 1");
    const auto p = params_of(c);
    std::vector<double> lhs(g.count(), 0.0), rhs(g.count(), 0.0);
    Outcome o;
    if (c.test_function_id == "kernel") {
        const PrabhakarKernel eps(p, ctrl);
        for (std::size_t i = 1; i < lhs.size(); ++i) {
            lhs[i] = eps(g.node(i));
            rhs[i] = classical_prabhakar_kernel(g.node(i), c.alpha, c.mu, c.gamma, c.omega);
        }
        o = compare(lhs, rhs, g, false);
        o.lhs_path = "kspecial:prabhakar_kernel";
    } else {
        const auto& tf = test_function(c.test_function_id);
        const auto& poly = require_poly(tf, c.test_function_id);
        lhs = prabhakar_integral(SampledFunction::sample(g, tf.f), p, ctrl).values;
        double fact = 1.0;
        for (std::size_t m = 0; m < poly.size(); ++m) {
            if (m > 0)
                fact *= static_cast<double>(m);
            for (std::size_t i = 1; i < rhs.size(); ++i) {
                const double x = g.node(i);
                rhs[i] += poly[m] * fact * std::pow(x, c.mu + m) *
                          classical_mittag_leffler(c.omega * std::pow(x, c.alpha), c.alpha,
                                                   c.mu + m + 1.0, c.gamma);
            }
        }
        o = compare(lhs, rhs, g, false);
        o.lhs_path = "operators:prabhakar_integral";
    }
    o.rhs_path = "classical:prabhakar_direct_sum";
    return o;
}

double extrapolate_zero(const std::vector<double>& v) { return 2.0 * v[1] - v[2]; }

OperatorKind lemma_kind(IdentityId id) {
    switch (id) {
        case IdentityId::LaplaceLemma_3_1:
        case IdentityId::SumuduLemma_3_6: return OperatorKind::PDeriv;
        case IdentityId::LaplaceLemma_3_2:
        case IdentityId::SumuduLemma_3_7: return OperatorKind::RegPDeriv;
        case IdentityId::LaplaceLemma_3_3:
        case IdentityId::SumuduLemma_3_8: return OperatorKind::HPDeriv;
        case IdentityId::LaplaceLemma_3_4:
        case IdentityId::SumuduLemma_3_9: return OperatorKind::RegHPDeriv;
        default: return OperatorKind::PIntegral;
    }
}

// Operator output on the grid plus the boundary data the closed form needs,
// both taken from the same discretization.
std::pair<SampledFunction, BoundaryData> apply_with_boundary(OperatorKind kind, const IdentityCase& c,
                                                             const Grid1D& g,
                                                             const SeriesControl& ctrl) {
    const auto& tf = test_function(c.test_function_id);
    const auto p = params_of(c);
    const auto f = SampledFunction::sample(g, tf.f, tf.d1);
    BoundaryData bd;
    const double k = p.k();
    const double h = g.step();
    switch (kind) {
        case OperatorKind::PIntegral:
            return {prabhakar_integral(f, p, ctrl), bd};
        case OperatorKind::PDeriv: {
            const int m = derivative_order(p);
            const auto q = prabhakar_integral(f, p.with_order(m * k - p.mu(), -p.gamma()), ctrl);
            // node 0 of an integral output is its origin limit; derivatives of it are extrapolated
            for (int n = 0; n < m; ++n) {
                const int j = m - n - 1;
                bd.frozen_integral_terms.push_back(
                    std::pow(k, j) * (j == 0 ? q.values[0] : extrapolate_zero(fd_derivative(q.values, h, j))));
            }
            return {prabhakar_derivative(SampledFunction::sample(g, tf.f), p, ctrl), bd};
        }
        case OperatorKind::RegPDeriv: {
            const int m = derivative_order(p);
            for (int n = 0; n < m; ++n)
                bd.initial_values.push_back(derivative_at_zero(tf, n));
            return {regularized_prabhakar_derivative(f, p, ctrl), bd};
        }
        case OperatorKind::HPDeriv: {
            const HilferParams hp(p, c.nu);
            const auto st = hilfer_stages(hp);
            const auto plain = SampledFunction::sample(g, tf.f);
            bd.frozen_integral_terms.push_back(
                st.inner ? prabhakar_integral(plain, *st.inner, ctrl).values[0] : plain.values[0]);
            return {hilfer_prabhakar_derivative(f, hp, ctrl), bd};
        }
        case OperatorKind::RegHPDeriv: {
            bd.initial_values.push_back(tf.f(0.0));
            return {regularized_hilfer_prabhakar_derivative(f, HilferParams(p, c.nu), ctrl), bd};
        }
    }
    throw ContractError("unknown operator kind");
}

std::string op_path(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::PIntegral: return "prabhakar_integral";
        case OperatorKind::PDeriv: return "prabhakar_derivative";
        case OperatorKind::RegPDeriv: return "regularized_prabhakar_derivative";
        case OperatorKind::HPDeriv: return "hilfer_prabhakar_derivative";
        case OperatorKind::RegHPDeriv: return "regularized_hilfer_prabhakar_derivative";
    }
    return "?";
}

Outcome laplace_lemma(const IdentityCase& c, const Grid1D& g, const SeriesControl& ctrl) {
    const auto kind = lemma_kind(c.id);
    const auto& tf = test_function(c.test_function_id);
    const auto [out, bd] = apply_with_boundary(kind, c, g, ctrl);
    const double lhs = numerical_laplace(out, kLaplaceU).value;
    const double rhs =
        laplace_operator_closed(kind, kLaplaceU, params_of(c), tf.laplace(kLaplaceU), bd, c.nu);
    auto o = compare_scalar(lhs, rhs);
    o.lhs_path = "numerical_laplace:operators:" + op_path(kind);
    o.rhs_path = std::string("closed_form:laplace:") + to_string(kind);
    return o;
}

Outcome sumudu_lemma(const IdentityCase& c, const Grid1D& g, const SeriesControl& ctrl) {
    const auto kind = lemma_kind(c.id);
    const auto& tf = test_function(c.test_function_id);
    const auto [out, bd] = apply_with_boundary(kind, c, g, ctrl);
    const double lhs = numerical_sumudu(out, kSumuduU).value;
    const double F = tf.laplace(1.0 / kSumuduU) / kSumuduU;
    const double rhs = sumudu_operator_closed(kind, kSumuduU, params_of(c), F, bd, c.nu);
    auto o = compare_scalar(lhs, rhs);
    o.lhs_path = "numerical_sumudu:operators:" + op_path(kind);
    o.rhs_path = std::string("closed_form:sumudu:") + to_string(kind);
    return o;
}

Outcome duality(const IdentityCase& c) {
    const auto p = params_of(c);
    const std::string& which = c.test_function_id;
    double num = 0.0, den = 0.0;
    for (double u : {0.2, 0.5, 1.0, 2.0}) {
        double lhs, rhs;
        if (which == "kernel") {
            lhs = sumudu_kernel_closed(u, p);
            rhs = laplace_kernel_closed(1.0 / u, p) / u;
        } else {
            std::optional<OperatorKind> kind;
            for (auto kk : {OperatorKind::PIntegral, OperatorKind::PDeriv, OperatorKind::RegPDeriv,
                            OperatorKind::HPDeriv, OperatorKind::RegHPDeriv})
                if (which == to_string(kk))
                    kind = kk;
            if (!kind)
                throw ContractError("duality case names no operator kind: '" + which + "'");
            const auto [ni, nf] = boundary_arity(*kind, p);
            BoundaryData bd;
            for (std::size_t j = 0; j < ni; ++j)
                bd.initial_values.push_back(1.0 / (1.0 + j));
            for (std::size_t j = 0; j < nf; ++j)
                bd.frozen_integral_terms.push_back(0.3 / (1.0 + j));
            const double FS = u / ((1.0 + u) * (1.0 + u));  // Sumudu of t e^{-t}
            lhs = sumudu_operator_closed(*kind, u, p, FS, bd, c.nu);
            rhs = laplace_operator_closed(*kind, 1.0 / u, p, u * FS, bd, c.nu) / u;
        }
        num = std::max(num, std::fabs(lhs - rhs));
        den = std::max(den, std::fabs(rhs));
    }
    return {num, den > 0.0 ? num / den : num, "closed_form:sumudu:" + which,
            "closed_form:laplace:" + which + "(1/u)/u"};
}

Outcome evaluate(const IdentityCase& c, const Grid1D& g, const SeriesControl& ctrl) {
    switch (c.id) {
        case IdentityId::Composition_2_12: return composition(c, g, ctrl);
        case IdentityId::Relation_3_7: return relation_3_7(c, g, ctrl);
        case IdentityId::Relation_3_16: return relation_3_16(c, g, ctrl);
        case IdentityId::Reduce_gamma0_Hilfer: return reduce_gamma0(c, g, ctrl);
        case IdentityId::Reduce_nu0: return reduce_nu0(c, g, ctrl);
        case IdentityId::Reduce_nu1: return reduce_nu1(c, g, ctrl);
        case IdentityId::Reduce_k1_classical: return reduce_k1(c, g, ctrl);
        case IdentityId::LaplaceLemma_3_1:
        case IdentityId::LaplaceLemma_3_2:
        case IdentityId::LaplaceLemma_3_3:
        case IdentityId::LaplaceLemma_3_4: return laplace_lemma(c, g, ctrl);
        case IdentityId::SumuduLemma_3_5:
        case IdentityId::SumuduLemma_3_6:
        case IdentityId::SumuduLemma_3_7:
        case IdentityId::SumuduLemma_3_8:
        case IdentityId::SumuduLemma_3_9: return sumudu_lemma(c, g, ctrl);
        case IdentityId::Duality_Sumudu_Laplace: return duality(c);
    }
    throw ContractError("unknown identity");
}

}  // namespace

const char* to_string(IdentityId id) {
    for (const auto& n : kNames)
        if (n.id == id)
            return n.name;
    return "?";
}

std::optional<IdentityId> identity_from_string(const std::string& s) {
    for (const auto& n : kNames)
        if (s == n.name)
            return n.id;
    return std::nullopt;
}

bool is_quadrature_mediated(IdentityId id) {
    switch (id) {
        case IdentityId::Reduce_nu0:
        case IdentityId::Reduce_nu1:
        case IdentityId::Reduce_k1_classical:
        case IdentityId::Duality_Sumudu_Laplace: return false;
        default: return true;
    }
}

double default_threshold(IdentityId id) {
    switch (id) {
        case IdentityId::Composition_2_12:
        case IdentityId::Reduce_gamma0_Hilfer: return 5e-4;
        case IdentityId::Relation_3_7:
        case IdentityId::Relation_3_16:
        case IdentityId::LaplaceLemma_3_1:
        case IdentityId::LaplaceLemma_3_2:
        case IdentityId::LaplaceLemma_3_3:
        case IdentityId::LaplaceLemma_3_4: return 1e-3;
        case IdentityId::SumuduLemma_3_5:
        case IdentityId::SumuduLemma_3_6:
        case IdentityId::SumuduLemma_3_7:
        case IdentityId::SumuduLemma_3_8:
        case IdentityId::SumuduLemma_3_9: return 5e-3;
        default: return 1e-10;
    }
}

IdentityReport run_identity(const IdentityCase& c, const Grid1D& grid, const SeriesControl& ctrl) {
    IdentityReport r;
    r.c = c;
    r.threshold = default_threshold(c.id);
    r.grid_size = grid.count() - 1;
    try {
        const double T = c.horizon > 0.0 ? c.horizon : grid.last();
        const Grid1D g = Grid1D::span(0.0, T, grid.count());
        auto o = evaluate(c, g, ctrl);
        r.max_abs_err = o.abs;
        r.max_rel_err = o.rel;
        r.lhs_path = o.lhs_path;
        r.rhs_path = o.rhs_path;
        r.refined_rel_err = o.rel;
        if (is_quadrature_mediated(c.id)) {
            r.refined_rel_err = evaluate(c, g.refined(), ctrl).rel;
            r.refinement_ok = r.refined_rel_err <= kRefineFactor * r.max_rel_err ||
                              r.refined_rel_err <= kRefineFloor * r.threshold;
            if (!r.refinement_ok) {
                std::ostringstream os;
                os << "refinement check failed: err(2N)=" << r.refined_rel_err << " > "
                   << kRefineFactor << " * err(N)=" << r.max_rel_err;
                r.diagnostic = os.str();
            }
        }
        if (!std::isfinite(r.max_rel_err))
            r.diagnostic = "non-finite error norm";
        r.passed = std::isfinite(r.max_rel_err) && r.max_rel_err <= r.threshold && r.refinement_ok;
        if (r.lhs_path == r.rhs_path) {
            r.passed = false;
            r.diagnostic = "both sides share one code path";
        }
    } catch (const std::exception& e) {
        r.passed = false;
        r.refinement_ok = false;
        r.max_abs_err = r.max_rel_err = r.refined_rel_err = std::nan("");
        r.diagnostic = std::string(error_class(e)) + ": " + e.what();
    }
    return r;
}

std::vector<IdentityReport> run_suite(const std::vector<IdentityCase>& cases, const Grid1D& grid,
                                      const SeriesControl& ctrl) {
    std::vector<IdentityReport> reports(cases.size());
    parallel_for(cases.size(), [&](std::size_t i) { reports[i] = run_identity(cases[i], grid, ctrl); }, 1);
    std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
        return static_cast<int>(a.c.id) < static_cast<int>(b.c.id);
    });
    return reports;
}

Grid1D default_suite_grid() { return Grid1D::span(0.0, 2.0, 4097); }

std::vector<IdentityCase> default_suite() {
    struct P {
        double k, alpha, mu, gamma, omega, nu;
    };
    const P A{1.5, 1.2, 0.9, 0.5, -0.3, 0.4};
    const P B{0.8, 0.6, 0.5, 0.8, 0.2, 0.7};
    const P M2{1.0, 0.9, 1.4, 0.3, -0.2, 0.5};  // mu > k: m = 2, no Hilfer forms
    const P K1{1.0, 0.8, 0.6, 0.7, -0.5, 0.5};

    std::vector<IdentityCase> cs;
    auto add = [&](IdentityId id, const P& p, const std::string& tf, double T = 0.0,
                   std::optional<double> gamma = std::nullopt) {
        cs.push_back({id, p.k, p.alpha, p.mu, gamma.value_or(p.gamma), p.omega, p.nu, tf, T});
    };
    for (const auto* p : {&A, &B})
        for (const char* tf : {"one", "t", "sin"})
            add(IdentityId::Composition_2_12, *p, tf);
    for (const auto* p : {&A, &B, &M2})
        add(IdentityId::Relation_3_7, *p, "quad");
    for (const auto* p : {&A, &B}) {
        add(IdentityId::Relation_3_16, *p, "quad");
        add(IdentityId::Reduce_gamma0_Hilfer, *p, "quad", 0.0, 0.0);
        for (const char* tf : {"affine", "quad"}) {
            add(IdentityId::Reduce_nu0, *p, tf);
            add(IdentityId::Reduce_nu1, *p, tf);
        }
    }
    for (const char* tf : {"kernel", "one", "t"})
        add(IdentityId::Reduce_k1_classical, K1, tf);
    for (const auto* p : {&A, &B, &M2}) {
        // m = 2 plain derivative of t e^-t is left out: its output and frozen
        // terms are too rough at the origin for the sampled transform
        if (p != &M2) {
            add(IdentityId::LaplaceLemma_3_1, *p, "t_exp_neg", kLemmaHorizon);
            add(IdentityId::SumuduLemma_3_6, *p, "t_exp_neg", kLemmaHorizon);
        }
        add(IdentityId::LaplaceLemma_3_2, *p, "t_exp_neg", kLemmaHorizon);
        add(IdentityId::SumuduLemma_3_7, *p, "t_exp_neg", kLemmaHorizon);
        for (const char* kind : {"kernel", "PIntegral", "PDeriv", "RegPDeriv"})
            add(IdentityId::Duality_Sumudu_Laplace, *p, kind);
    }
    for (const auto* p : {&A, &B}) {
        add(IdentityId::LaplaceLemma_3_3, *p, "t_exp_neg", kLemmaHorizon);
        add(IdentityId::LaplaceLemma_3_4, *p, "t_exp_neg", kLemmaHorizon);
        add(IdentityId::SumuduLemma_3_5, *p, "t_exp_neg", kLemmaHorizon);
        add(IdentityId::SumuduLemma_3_8, *p, "t_exp_neg", kLemmaHorizon);
        add(IdentityId::SumuduLemma_3_9, *p, "t_exp_neg", kLemmaHorizon);
        for (const char* kind : {"HPDeriv", "RegHPDeriv"})
            add(IdentityId::Duality_Sumudu_Laplace, *p, kind);
    }
    return cs;
}

std::string reports_to_json(const std::vector<IdentityReport>& reports) {
    auto num = [](double v) -> nlohmann::ordered_json {
        if (std::isfinite(v))
            return v;
        return nullptr;
    };
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json j;
        j["identity_id"] = to_string(r.c.id);
        j["test_function_id"] = r.c.test_function_id;
        j["k"] = r.c.k;
        j["alpha"] = r.c.alpha;
        j["mu"] = r.c.mu;
        j["gamma"] = r.c.gamma;
        j["omega"] = r.c.omega;
        j["nu"] = r.c.nu;
        j["grid_size"] = r.grid_size;
        j["max_abs_err"] = num(r.max_abs_err);
        j["max_rel_err"] = num(r.max_rel_err);
        j["refined_rel_err"] = num(r.refined_rel_err);
        j["refinement_ok"] = r.refinement_ok;
        j["passed"] = r.passed;
        j["threshold"] = r.threshold;
        j["lhs_path"] = r.lhs_path;
        j["rhs_path"] = r.rhs_path;
        j["diagnostic"] = r.diagnostic;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

double classical_mittag_leffler(double z, double alpha, double beta, double gamma) {
    // direct summation, every term from scratch apart from the Pochhammer product
    long double sum = 0.0L, poch = 1.0L, prev = 0.0L;
    const long double zl = z;
    for (int n = 0; n < 2000; ++n) {
        if (n > 0)
            poch *= gamma + (n - 1);
        const long double term =
            poch * std::pow(zl, n) / (std::tgamma(static_cast<long double>(n) + 1.0L) *
                                      std::tgamma(static_cast<long double>(alpha) * n + beta));
        sum += term;
        if (poch == 0.0L)
            break;
        if (n > std::fabs(gamma) + 2 && std::fabs(term) <= 1e-20L * std::fabs(sum) &&
            std::fabs(term) <= std::fabs(prev))
            break;
        prev = term;
    }
    return static_cast<double>(sum);
}

double classical_prabhakar_kernel(double t, double alpha, double mu, double gamma, double omega) {
    if (t <= 0.0)
        return 0.0;
    return std::pow(t, mu - 1.0) * classical_mittag_leffler(omega * std::pow(t, alpha), alpha, mu, gamma);
}

}  // namespace kprab
