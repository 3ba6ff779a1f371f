#include "operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"

namespace kprab {

namespace {

constexpr double kExponentEps = 1e-10;

void require_origin_zero(const Grid1D& g) {
    if (g.origin() != 0.0) {
        std::ostringstream os;
        os << "operators need a grid with origin 0 (got origin " << g.origin() << ")";
        throw DomainError(os.str());
    }
}

std::vector<double> scaled(std::vector<double> v, double c) {
    for (double& x : v)
        x *= c;
    return v;
}

// Weight tables get differentiated by the derivative operators, so kernel
// truncation noise has to sit below double rounding.
SeriesControl table_control(SeriesControl c) {
    c.rel_tol = std::min(c.rel_tol, 1e-18);
    return c;
}

// origin power after m differentiations; 0 once it stops being integrable
double lowered_exponent(double e, int m) {
    const double d = e - m;
    return d > -1.0 ? d : 0.0;
}

// m-th derivative of samples that behave like x^lead psi(x) at the origin.
// For fractional lead the stencil acts on psi and the power is
// differentiated exactly (Leibniz); node 0 keeps the plain one-sided value.
std::vector<double> fd_derivative_lead(const std::vector<double>& v, const Grid1D& g, int m,
                                       double lead) {
    auto d = fd_derivative(v, g.step(), m);
    if (std::fabs(lead - std::round(lead)) <= kExponentEps || v.size() < 2 * std::size_t(m) + 4)
        return d;
    const std::size_t n = v.size();
    std::vector<double> psi(n);
    for (std::size_t j = 1; j < n; ++j)
        psi[j] = v[j] * std::pow(g.node(j), -lead);
    psi[0] = 3.0 * psi[1] - 3.0 * psi[2] + psi[3];
    std::vector<std::vector<double>> dpsi{psi};
    for (int i = 1; i <= m; ++i)
        dpsi.push_back(fd_derivative(psi, g.step(), i));
    for (std::size_t j = 1; j < n; ++j) {
        const double x = g.node(j);
        double acc = 0.0, binom = 1.0, fall = 1.0;
        for (int i = 0; i <= m; ++i) {
            // C(m,i) (lead)_i x^(lead-i) psi^(m-i)
            acc += binom * fall * std::pow(x, lead - i) * dpsi[m - i][j];
            binom = binom * (m - i) / (i + 1.0);
            fall *= lead - i;
        }
        d[j] = acc;
    }
    return d;
}

// f^(m) from supplied derivative samples (preferred) or finite differences.

SampledFunction mth_derivative(const SampledFunction& f, int m) {
    const double h = f.grid.step();
    if (f.has_derivative()) {
        SampledFunction d = f.derivative_function();
        if (m == 1)
            return d;
        if (!d.is_regular())
            throw DomainError("higher derivatives of a singular operand are not supported");
        if (f.grid.count() < static_cast<std::size_t>(2 * m + 2))
            throw DomainError("grid too coarse for a numerical derivative");
        return {f.grid, fd_derivative(d.values, h, m - 1)};
    }
    if (!f.is_regular())
        throw DomainError("a singular operand must carry derivative samples");
    if (f.grid.count() < static_cast<std::size_t>(2 * m + 2))
        throw DomainError("grid too coarse for a numerical derivative; supply derivative samples");
    return {f.grid, fd_derivative(f.values, h, m)};
}

}  // namespace

std::vector<ScaledKernelTerm> scaled_kernel_terms(const MittagLefflerK& ml, double h) {
    const auto& p = ml.params();
    const long double k = p.k();
    const long double z = p.omega() * std::pow(static_cast<long double>(h), p.alpha() / k);
    const long double base = std::pow(static_cast<long double>(h), p.mu() / k) / k;
    std::vector<ScaledKernelTerm> out;
    long double zn = 1.0L;
    long double total = 0.0L;
    long double prev = 0.0L;
    const auto max_terms = static_cast<std::size_t>(ml.control().max_terms);
    for (std::size_t n = 0; n < max_terms; ++n) {
        const long double b = ml.coefficient(n) * zn * base;
        if (n > 0 && b == 0.0L)
            return out;
        out.push_back({static_cast<double>(b), ml.term_exponent(n)});
        total += std::fabs(b);
        if (n >= ml.stable_index() && std::fabs(b) <= 1e-18L * total && std::fabs(b) <= std::fabs(prev))
            return out;
        prev = b;
        zn *= z;
    }
    throw TruncationError("kernel series on the first cell did not converge",
                          static_cast<double>(total), static_cast<double>(std::fabs(prev)));
}

ProductIntegrator::ProductIntegrator(const PrabhakarParams& p, const Grid1D& grid,
                                     const SeriesControl& ctrl)
    : grid_(grid), ctrl_(ctrl), kernel_(p, table_control(ctrl)), gl_(gauss_legendre01(kGaussPoints)) {
    require_origin_zero(grid);
    const double h = grid.step();
    const std::size_t cells = grid.count() - 1;
    const std::size_t G = kGaussPoints;
    terms_ = scaled_kernel_terms(kernel_.mittag_leffler(), h);

    u_.assign(cells, 0.0);
    v_.assign(cells, 0.0);
    long double u0 = 0.0L, v0 = 0.0L;
    for (const auto& t : terms_) {
        u0 += static_cast<long double>(t.b) / (t.p + 1.0);
        v0 += static_cast<long double>(t.b) / (t.p * (t.p + 1.0));
    }
    u_[0] = static_cast<double>(u0);
    v_[0] = static_cast<double>(v0);

    kv_.assign(cells * G, 0.0);
    parallel_for(cells > 0 ? cells - 1 : 0, [&](std::size_t jj) {
        const std::size_t j = jj + 1;
        double su = 0.0, sv = 0.0;
        for (std::size_t g = 0; g < G; ++g) {
            const double s = gl_.nodes[g];
            const double kv = kernel_((static_cast<double>(j) + s) * h);
            kv_[j * G + g] = kv;
            su += gl_.weights[g] * kv * s;
            sv += gl_.weights[g] * kv * (1.0 - s);
        }
        u_[j] = h * su;
        v_[j] = h * sv;
    }, 64);
}

std::vector<double> ProductIntegrator::apply_regular(const std::vector<double>& f) const {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    parallel_for(n > 0 ? n - 1 : 0, [&](std::size_t ii) {
        const std::size_t i = ii + 1;
        // long double: derivative operators difference these sums
        long double acc = 0.0L;
        for (std::size_t j = 0; j < i; ++j)
            acc += static_cast<long double>(u_[j]) * f[i - j - 1] + static_cast<long double>(v_[j]) * f[i - j];
        out[i] = static_cast<double>(acc);
    }, 32);
    return out;
}

std::vector<std::vector<double>> ProductIntegrator::apply_singular(
    const std::vector<const SampledFunction*>& fs, double sigma) const {
    const double h = grid_.step();
    const std::size_t n = grid_.count();
    const std::size_t G = kGaussPoints;

    // phi at the nodes
    std::vector<std::vector<double>> phi(fs.size(), std::vector<double>(n));
    for (std::size_t q = 0; q < fs.size(); ++q) {
        phi[q][0] = fs[q]->values[0];
        for (std::size_t l = 1; l < n; ++l)
            phi[q][l] = fs[q]->values[l] * std::pow(grid_.node(l), -sigma);
    }

    const QuadratureRule left = gauss_jacobi01(G, sigma);
    std::vector<QuadratureRule> right;
    right.reserve(terms_.size());
    for (const auto& t : terms_)
        right.push_back(gauss_jacobi01(G, t.p - 1.0));

    // t^sigma at the Gauss-Legendre nodes of cell c >= 1
    std::vector<double> tpow(n * G, 0.0);
    for (std::size_t c = 1; c + 1 < n; ++c)
        for (std::size_t g = 0; g < G; ++g)
            tpow[c * G + g] = std::pow((static_cast<double>(c) + gl_.nodes[g]) * h, sigma);

    long double w10 = 0.0L, w11 = 0.0L;
    for (const auto& t : terms_) {
        w10 += t.b * beta_fn(t.p + 1.0, sigma + 1.0);
        w11 += t.b * beta_fn(t.p, sigma + 2.0);
    }
    const double hs = std::pow(h, sigma);

    std::vector<std::vector<double>> out(fs.size(), std::vector<double>(n, 0.0));
    parallel_for(n - 1, [&](std::size_t ii) {
        const std::size_t i = ii + 1;
        const double xi = grid_.node(i);
        std::vector<double> w(i + 1, 0.0);
        if (i == 1) {
            w[0] = hs * static_cast<double>(w10);
            w[1] = hs * static_cast<double>(w11);
        } else {
            // cell 0: singular factor t^sigma, smooth kernel
            const double hs1 = hs * h;
            for (std::size_t g = 0; g < G; ++g) {
                const double s = left.nodes[g];
                const double kv = kernel_(xi - h * s) * left.weights[g] * hs1;
                w[0] += kv * (1.0 - s);
                w[1] += kv * s;
            }
            // interior cells
            for (std::size_t c = 1; c + 1 < i; ++c) {
                const std::size_t j = i - c - 1;
                const double* kr = &kv_[j * G];
                const double* tr = &tpow[c * G];
                double a = 0.0, b = 0.0;
                for (std::size_t g = 0; g < G; ++g) {
                    const double s = gl_.nodes[g];
                    const double val = gl_.weights[g] * kr[G - 1 - g] * tr[g];
                    a += val * (1.0 - s);
                    b += val * s;
                }
                w[c] += h * a;
                w[c + 1] += h * b;
            }
            // last cell: kernel singularity, smooth t^sigma
            for (std::size_t m = 0; m < terms_.size(); ++m) {
                const auto& rule = right[m];
                double a = 0.0, b = 0.0;
                for (std::size_t g = 0; g < G; ++g) {
                    const double v = rule.nodes[g];
                    const double val = rule.weights[g] * std::pow(xi - h * v, sigma);
                    a += val * v;
                    b += val * (1.0 - v);
                }
                w[i - 1] += terms_[m].b * a;
                w[i] += terms_[m].b * b;
            }
        }
        for (std::size_t q = 0; q < fs.size(); ++q) {
            double acc = 0.0;
            for (std::size_t l = 0; l <= i; ++l)
                acc += w[l] * phi[q][l];
            out[q][i] = acc;
        }
    }, 8);
    return out;
}

SampledFunction ProductIntegrator::finish(std::vector<double> out, double sigma, double phi0,
                                          double lead) const {
    const auto& p = params();
    const double e = sigma + p.mu() / p.k();
    SampledFunction r(grid_, std::move(out));
    if (e > kExponentEps) {
        r.values[0] = 0.0;
        r.leading_exponent = (sigma == 0.0 ? lead : 0.0) + e;
        return r;
    }
    // x^e amplitude from the leading kernel term against phi(0) t^sigma
    r.values[0] = phi0 * beta_fn(p.mu() / p.k(), sigma + 1.0) / (p.k() * k_gamma(p.mu(), p.k()));
    if (e < -kExponentEps)
        r.origin_exponent = e;
    return r;
}

SampledFunction ProductIntegrator::apply(const SampledFunction& f) const {
    return apply_batch({f}).front();
}

std::vector<SampledFunction> ProductIntegrator::apply_batch(
    const std::vector<SampledFunction>& fs) const {
    std::vector<SampledFunction> res;
    if (fs.empty())
        return res;
    const double sigma = fs.front().origin_exponent;
    for (const auto& f : fs) {
        f.check();
        if (!(f.grid == grid_))
            throw ContractError("operand grid differs from the integrator grid");
        if (f.origin_exponent != sigma)
            throw ContractError("batched operands must share one origin exponent");
    }
    res.reserve(fs.size());
    const double lead = fs.front().leading_exponent;
    bool fractional = sigma == 0.0 && lead > 0.0 && std::fabs(lead - std::round(lead)) > kExponentEps &&
                      grid_.count() >= 4;
    for (const auto& f : fs)
        fractional = fractional && f.leading_exponent == lead;
    if (fractional) {
        // x^lead phi with phi(0) extrapolated; node 0 of the operand is 0 anyway
        std::vector<SampledFunction> split;
        split.reserve(fs.size());
        for (const auto& f : fs) {
            auto phi = [&](std::size_t l) { return f.values[l] * std::pow(grid_.node(l), -lead); };
            SampledFunction s(grid_, f.values);
            s.values[0] = 3.0 * phi(1) - 3.0 * phi(2) + phi(3);
            s.origin_exponent = lead;
            split.push_back(std::move(s));
        }
        std::vector<const SampledFunction*> ptrs;
        for (const auto& f : split)
            ptrs.push_back(&f);
        auto outs = apply_singular(ptrs, lead);
        for (std::size_t q = 0; q < fs.size(); ++q)
            res.push_back(finish(std::move(outs[q]), lead, split[q].values[0], 0.0));
        return res;
    }
    if (sigma == 0.0) {
        for (const auto& f : fs)
            res.push_back(finish(apply_regular(f.values), 0.0, f.values[0], f.leading_exponent));
        return res;
    }
    std::vector<const SampledFunction*> ptrs;
    for (const auto& f : fs)
        ptrs.push_back(&f);
    auto outs = apply_singular(ptrs, sigma);
    for (std::size_t q = 0; q < fs.size(); ++q)
        res.push_back(finish(std::move(outs[q]), sigma, fs[q].values[0], 0.0));
    return res;
}

int derivative_order(const PrabhakarParams& p) {
    return static_cast<int>(std::floor(p.mu() / p.k())) + 1;
}

std::vector<double> fd_first(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    if (n < 3)
        throw DomainError("first derivative stencil needs at least 3 nodes");
    std::vector<double> d(n);
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return d;
}

std::vector<double> fd_second(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    if (n < 4)
        throw DomainError("second derivative stencil needs at least 4 nodes");
    std::vector<double> d(n);
    const double h2 = h * h;
    d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
    d[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
    return d;
}

std::vector<double> fd_derivative(const std::vector<double>& v, double h, int order) {
    if (order < 0)
        throw DomainError("derivative order must be >= 0");
    std::vector<double> d = v;
    while (order >= 2) {
        d = fd_second(d, h);
        order -= 2;
    }
    if (order == 1)
        d = fd_first(d, h);
    return d;
}

SampledFunction prabhakar_integral(const SampledFunction& f, const PrabhakarParams& p,
                                   const SeriesControl& ctrl) {
    return ProductIntegrator(p, f.grid, ctrl).apply(f);
}

SampledFunction k_rl_integral(const SampledFunction& f, double mu, double k,
                              const SeriesControl& ctrl) {
    return prabhakar_integral(f, PrabhakarParams(k, 1.0, mu, 0.0, 0.0), ctrl);
}

SampledFunction prabhakar_derivative(const SampledFunction& f, const PrabhakarParams& p,
                                     const SeriesControl& ctrl) {
    const int m = derivative_order(p);
    if (f.grid.count() < static_cast<std::size_t>(2 * m + 2)) {
        std::ostringstream os;
        os << "grid too coarse for an order-" << m << " derivative (need >= " << 2 * m + 2
           << " nodes)";
        throw DomainError(os.str());
    }
    const double k = p.k();
    const auto g = prabhakar_integral(f, p.with_order(m * k - p.mu(), -p.gamma()), ctrl);
    if (!g.is_regular())
        throw DomainError("operand too singular for the k-Prabhakar derivative");
    SampledFunction r(f.grid, scaled(fd_derivative_lead(g.values, f.grid, m, g.leading_exponent), std::pow(k, m)));
    r.leading_exponent = lowered_exponent(g.leading_exponent, m);
    return r;
}

SampledFunction regularized_prabhakar_derivative(const SampledFunction& f, const PrabhakarParams& p,
                                                 const SeriesControl& ctrl) {
    const int m = derivative_order(p);
    const double k = p.k();
    auto r = prabhakar_integral(mth_derivative(f, m), p.with_order(m * k - p.mu(), -p.gamma()), ctrl);
    r.values = scaled(std::move(r.values), std::pow(k, m));
    return r;
}

HilferStages hilfer_stages(const HilferParams& hp) {
    const auto& b = hp.base();
    const double nu = hp.nu();
    const double gap = b.k() - b.mu();
    HilferStages s;
    if (nu < 1.0)
        s.inner = b.with_order((1.0 - nu) * gap, -b.gamma() * (1.0 - nu));
    if (nu > 0.0)
        s.outer = b.with_order(nu * gap, -b.gamma() * nu);
    return s;
}

SampledFunction hilfer_prabhakar_derivative(const SampledFunction& f, const HilferParams& hp,
                                            const SeriesControl& ctrl) {
    const auto st = hilfer_stages(hp);
    const double k = hp.base().k();
    if (f.grid.count() < 4)
        throw DomainError("grid too coarse for the Hilfer-Prabhakar derivative (need >= 4 nodes)");

    if (!st.outer) {
        const auto g = prabhakar_integral(f, *st.inner, ctrl);
        if (!g.is_regular())
            throw DomainError("operand too singular for the Hilfer-Prabhakar derivative");
        SampledFunction r(f.grid, scaled(fd_derivative_lead(g.values, f.grid, 1, g.leading_exponent), k));
        r.leading_exponent = lowered_exponent(g.leading_exponent, 1);
        return r;
    }
    if (!st.inner) {
        auto r = prabhakar_integral(mth_derivative(f, 1), *st.outer, ctrl);
        r.values = scaled(std::move(r.values), k);
        return r;
    }

    // k [ d/dx P_outer(P_inner f) - eps_outer(x) (P_inner f)(0+) ]
    const auto g = prabhakar_integral(f, *st.inner, ctrl);
    if (!g.is_regular())
        throw DomainError("operand too singular for the Hilfer-Prabhakar derivative");
    const auto q = prabhakar_integral(g, *st.outer, ctrl);
    std::vector<double> d = fd_derivative_lead(q.values, f.grid, 1, q.leading_exponent);
    const double g0 = g.values[0];
    if (g0 != 0.0) {
        const PrabhakarKernel eps(*st.outer, ctrl);
        for (std::size_t i = 1; i < d.size(); ++i)
            d[i] -= eps(f.grid.node(i)) * g0;
        d[0] = 3.0 * d[1] - 3.0 * d[2] + d[3];
    }
    SampledFunction r(f.grid, scaled(std::move(d), k));
    r.leading_exponent = lowered_exponent(q.leading_exponent, 1);
    return r;
}

SampledFunction regularized_hilfer_prabhakar_derivative(const SampledFunction& f,
                                                        const HilferParams& hp,
                                                        const SeriesControl& ctrl) {
    const auto& b = hp.base();
    auto r = prabhakar_integral(mth_derivative(f, 1), b.with_order(b.k() - b.mu(), -b.gamma()), ctrl);
    r.values = scaled(std::move(r.values), b.k());
    return r;
}

}  // namespace kprab
