#include "solvers.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "operators.hpp"
#include "parallel.hpp"

namespace kprab {

namespace {

double max_abs_interior(const std::vector<double>& v, std::size_t from) {
    double m = 0.0;
    for (std::size_t i = from; i < v.size(); ++i)
        m = std::max(m, std::fabs(v[i]));
    return m;
}

// Tracks the max-norm truncation of a solution series.
struct SeriesMonitor {
    double rel_tol;
    int growing = 0;
    double prev = std::numeric_limits<double>::infinity();

    // true when the series may stop after a term of norm `norm` given the running sum norm
    bool done(double norm, double sum_norm, int n, const char* which) {
        if (norm > prev) {
            if (++growing >= 3) {
                std::ostringstream os;
                os << which << " series terms grew for 3 consecutive n (n=" << n << ", norm " << norm
                   << ")";
                throw DivergenceError(os.str());
            }
        } else {
            growing = 0;
        }
        prev = norm;
        return norm <= rel_tol * sum_norm;
    }
};

constexpr std::size_t kMaxDiffusionTerms = 4096;
// Modes below this fraction of max|g^| sit at the roundoff floor of the
// trapezoid transform and cannot change u in double precision.
constexpr double kModeFloor = 1e-15;

}  // namespace

void RelaxationProblem::validate() const {
    if (!(delta >= 0.0))
        throw DomainError("delta must be >= 0");
    if (!(hp.base().gamma() >= 0.0))
        throw DomainError("gamma must be >= 0 for the relaxation problem");
    if (!(K_init >= 0.0))
        throw DomainError("K must be >= 0");
    if (!std::isfinite(lambda))
        throw DomainError("lambda must be finite");
    if (forcing)
        forcing->check();
}

SeriesSolution solve_relaxation(const RelaxationProblem& prob, const Grid1D& grid,
                                const SeriesControl& ctrl) {
    prob.validate();
    ctrl.validate();
    if (grid.origin() != 0.0)
        throw DomainError("relaxation grid must start at 0");
    if (prob.forcing && !(prob.forcing->grid == grid))
        throw ContractError("forcing must be sampled on the solution grid");

    const auto& b = prob.hp.base();
    const double k = b.k(), mu = b.mu(), g = b.gamma(), nu = prob.hp.nu();
    const double lam = prob.lambda;
    const std::size_t N = grid.count();
    const double M0 = nu * (k - mu) + mu;
    double sigma = M0 / k - 1.0;
    if (std::fabs(sigma) < 1e-14)
        sigma = 0.0;

    std::vector<double> y(N, 0.0);
    int terms = 0;
    double tail = 0.0;

    if (prob.K_init != 0.0) {
        SeriesMonitor mon{ctrl.rel_tol};
        double lam_n = 1.0;
        for (int n = 0;; ++n) {
            if (n >= ctrl.max_terms)
                throw DivergenceError("relaxation series did not converge within max_terms");
            const double Mn = M0 + 2.0 * mu * n;
            const double Gn = n * (prob.delta + g) + g * (1.0 - nu);
            const MittagLefflerK E(b.with_order(Mn, Gn), ctrl);
            std::vector<double> term(N, 0.0);
            parallel_for(N - 1, [&](std::size_t ii) {
                const double x = grid.node(ii + 1);
                term[ii + 1] = prob.K_init * lam_n * std::pow(x, Mn / k - 1.0) *
                               E(b.omega() * std::pow(x, b.alpha() / k));
            }, 256);
            for (std::size_t i = 1; i < N; ++i)
                y[i] += term[i];
            terms = std::max(terms, n + 1);
            const double norm = max_abs_interior(term, 1);
            const double sum_norm = max_abs_interior(y, 1);
            tail = sum_norm > 0.0 ? norm / sum_norm : 0.0;
            if (lam == 0.0 || mon.done(norm, sum_norm, n, "relaxation"))
                break;
            lam_n *= lam;
        }
        y[0] = prob.K_init / k_gamma(M0, k);
    }

    if (prob.forcing) {
        SeriesMonitor mon{ctrl.rel_tol};
        std::vector<double> forced(N, 0.0);
        double lam_n = 1.0;
        for (int n = 0;; ++n) {
            if (n >= ctrl.max_terms)
                throw DivergenceError("forcing series did not converge within max_terms");
            const auto pn = b.with_order(mu * (1.0 + 2.0 * n), g + n * (prob.delta + g));
            auto term = prabhakar_integral(*prob.forcing, pn, ctrl);
            for (double& v : term.values)
                v *= lam_n;
            for (std::size_t i = 1; i < N; ++i)
                forced[i] += term.values[i];
            terms = std::max(terms, n + 1);
            const double norm = max_abs_interior(term.values, 1);
            const double sum_norm = max_abs_interior(forced, 1);
            const double rel = sum_norm > 0.0 ? norm / sum_norm : 0.0;
            if (lam == 0.0 || sum_norm == 0.0 || mon.done(norm, sum_norm, n, "forcing")) {
                tail = std::max(tail, rel);
                break;
            }
            lam_n *= lam;
        }
        for (std::size_t i = 1; i < N; ++i)
            y[i] += forced[i];
    }

    SampledFunction sol(grid, std::move(y));
    if (prob.K_init != 0.0)
        sol.origin_exponent = sigma;
    return {std::move(sol), terms, tail};
}

double max_abs_from(const SampledFunction& f, double x0) {
    double m = 0.0;
    for (std::size_t i = f.is_regular() ? 0 : 1; i < f.size(); ++i)
        if (f.grid.node(i) >= x0)
            m = std::max(m, std::fabs(f.values[i]));
    return m;
}

double relaxation_residual(const RelaxationProblem& prob, const SeriesSolution& y,
                           const SeriesControl& ctrl, double window_start) {
    prob.validate();
    const auto& grid = y.values.grid;
    const auto& b = prob.hp.base();
    const auto D = hilfer_prabhakar_derivative(y.values, prob.hp, ctrl);
    std::vector<double> rhs(grid.count(), 0.0);
    if (prob.lambda != 0.0) {
        const auto Py = prabhakar_integral(y.values, b.with_gamma(prob.delta), ctrl);
        for (std::size_t i = 1; i < rhs.size(); ++i)
            rhs[i] = prob.lambda * Py.values[i];
    }
    if (prob.forcing)
        for (std::size_t i = 1; i < rhs.size(); ++i)
            rhs[i] += prob.forcing->values[i];
    const double x0 = window_start * grid.last();
    double r = 0.0;
    for (std::size_t i = 1; i < rhs.size(); ++i)
        if (grid.node(i) >= x0)
            r = std::max(r, std::fabs(D.values[i] - rhs[i]));
    return r;
}

double relaxation_frozen_value(const RelaxationProblem& prob, const SeriesSolution& y,
                               const SeriesControl& ctrl) {
    const auto st = hilfer_stages(prob.hp);
    if (!st.inner) {
        if (!y.values.is_regular())
            throw DomainError("solution is singular at 0");
        return 2.0 * y.values.values[1] - y.values.values[2];
    }
    const auto g = prabhakar_integral(y.values, *st.inner, ctrl);
    if (!g.is_regular())
        throw DomainError("frozen integral is singular at 0");
    return 2.0 * g.values[1] - g.values[2];
}

void DiffusionProblem::validate() const {
    if (!(K_diff > 0.0) || !std::isfinite(K_diff))
        throw DomainError("K must be > 0");
    initial_profile.check();
    if (!initial_profile.is_regular())
        throw DomainError("initial profile must be regular");
    const auto& g = initial_profile.values;
    const double gmax = max_abs_interior(g, 0);
    if (std::fabs(g.front()) > 1e-8 * gmax || std::fabs(g.back()) > 1e-8 * gmax)
        throw DomainError("initial profile must decay at the grid edges (|g| <= 1e-8 max|g|)");
    for (double t : time_points)
        if (!(t > 0.0) || !std::isfinite(t))
            throw DomainError("time points must be > 0");
}

DiffusionMultiplier::DiffusionMultiplier(const PrabhakarParams& base, double K,
                                         const SeriesControl& ctrl)
    : base_(base), K_(K), ctrl_(ctrl) {
    ctrl_.validate();
}

const MittagLefflerK& DiffusionMultiplier::ml(std::size_t n, bool lowered) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto& store = lowered ? ml_low_ : ml_;
    while (store.size() <= n) {
        const double m = static_cast<double>(store.size());
        // lowered: E^{n gamma}_{k,alpha,n mu} (n >= 1); index 0 is a placeholder
        const double order = lowered ? std::max(m, 1.0) * base_.mu() : m * base_.mu() + base_.k();
        store.push_back(std::make_unique<MittagLefflerK>(
            base_.with_order(order, m * base_.gamma()), ctrl_));
    }
    return *store[n];
}

DiffusionMultiplier::Value DiffusionMultiplier::sum(double p, double t, bool derivative) const {
    const double k = base_.k(), mu = base_.mu();
    const double z = base_.omega() * std::pow(t, base_.alpha() / k);
    const double x = -K_ * p * p;
    const double tn = std::pow(t, mu / k);
    long double acc = derivative ? 0.0L : 1.0L;
    long double comp = 0.0L;
    double max_term = derivative ? 0.0 : 1.0;
    double prev = std::numeric_limits<double>::infinity();
    long double xn = 1.0L;
    for (std::size_t n = 1; n < kMaxDiffusionTerms; ++n) {
        xn *= static_cast<long double>(x) * tn;
        if (xn == 0.0L)
            return {static_cast<double>(acc + comp), static_cast<int>(n), max_term};
        long double term;
        if (derivative)
            term = xn * ml(n, true).evaluate_ld(z) / (k * t);
        else
            term = xn * ml(n, false).evaluate_ld(z);
        const long double s = acc + term;
        comp += std::fabs(acc) >= std::fabs(term) ? (acc - s) + term : (term - s) + acc;
        acc = s;
        const double at = std::fabs(static_cast<double>(term));
        max_term = std::max(max_term, at);
        const double total = std::fabs(static_cast<double>(acc + comp));
        if (at <= prev && (at <= ctrl_.rel_tol * total ||
                           at <= std::numeric_limits<long double>::epsilon() * 1e-3 * max_term))
            return {static_cast<double>(acc + comp), static_cast<int>(n + 1), max_term};
        prev = at;
    }
    std::ostringstream os;
    os << "diffusion multiplier series did not converge for mode p=" << p << " at t=" << t;
    throw DivergenceError(os.str());
}

DiffusionMultiplier::Value DiffusionMultiplier::operator()(double p, double t) const {
    if (t == 0.0)
        return {1.0, 1, 1.0};
    return sum(p, t, false);
}

DiffusionMultiplier::Value DiffusionMultiplier::time_derivative(double p, double t) const {
    if (!(t > 0.0))
        throw DomainError("time derivative of the multiplier needs t > 0");
    return sum(p, t, true);
}

namespace {

// Spectral synthesis tables: basis[m][j] = w'_m Re(g^(p_m) e^{i p_m x_j}) / (2 pi).
struct Synthesis {
    std::vector<double> p;
    std::vector<double> ghat_abs;
    double ghat_max = 0.0;
    std::vector<std::vector<double>> basis;
};

Synthesis build_synthesis(const SampledFunction& g, const Grid1D& p_grid) {
    const auto& xg = g.grid;
    const std::size_t nx = xg.count();
    const std::size_t np = p_grid.count();
    Synthesis s;
    std::vector<std::complex<double>> ghat(np);
    for (std::size_t m = 0; m < np; ++m) {
        const double p = p_grid.node(m);
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < nx; ++j) {
            const double w = (j == 0 || j + 1 == nx) ? 0.5 * xg.step() : xg.step();
            acc += w * g.values[j] * std::polar(1.0, -p * xg.node(j));
        }
        ghat[m] = acc;
        s.ghat_max = std::max(s.ghat_max, std::abs(acc));
    }
    for (std::size_t m = 0; m < np; ++m) {
        if (std::abs(ghat[m]) <= kModeFloor * s.ghat_max)
            continue;
        const double p = p_grid.node(m);
        const double wp = ((m == 0 || m + 1 == np) ? 0.5 : 1.0) * p_grid.step() / (2.0 * std::numbers::pi);
        std::vector<double> row(nx);
        for (std::size_t j = 0; j < nx; ++j)
            row[j] = wp * (ghat[m] * std::polar(1.0, p * xg.node(j))).real();
        s.p.push_back(p);
        s.ghat_abs.push_back(std::abs(ghat[m]));
        s.basis.push_back(std::move(row));
    }
    return s;
}

void check_cancellation(const Synthesis& s, std::size_t m, const DiffusionMultiplier::Value& v,
                        double t) {
    // terms are summed in long double
    const double err = 10.0 * std::numeric_limits<long double>::epsilon() * v.max_term * s.ghat_abs[m] / s.ghat_max;
    if (err > 1e-8) {
        std::ostringstream os;
        os << "diffusion mode p=" << s.p[m] << " diverges numerically at t=" << t
           << " (cancellation error " << err << "); use fewer modes, earlier times or a smoother profile";
        throw DivergenceError(os.str());
    }
}

}  // namespace

std::vector<SeriesSolution> solve_diffusion(const DiffusionProblem& prob, const Grid1D& p_grid,
                                            const SeriesControl& ctrl) {
    prob.validate();
    ctrl.validate();
    const auto syn = build_synthesis(prob.initial_profile, p_grid);
    const DiffusionMultiplier M(prob.hp.base(), prob.K_diff, ctrl);
    const std::size_t nx = prob.initial_profile.size();
    const std::size_t nm = syn.p.size();

    std::vector<SeriesSolution> out;
    for (double t : prob.time_points) {
        std::vector<double> mult(nm);
        std::vector<int> used(nm);
        parallel_for(nm, [&](std::size_t m) {
            const auto v = M(syn.p[m], t);
            check_cancellation(syn, m, v, t);
            mult[m] = v.value;
            used[m] = v.terms;
        }, 1);
        std::vector<double> u(nx, 0.0);
        int terms = 0;
        for (std::size_t m = 0; m < nm; ++m) {
            for (std::size_t j = 0; j < nx; ++j)
                u[j] += mult[m] * syn.basis[m][j];
            terms = std::max(terms, used[m]);
        }
        out.push_back({SampledFunction(prob.initial_profile.grid, std::move(u)), terms, ctrl.rel_tol});
    }
    return out;
}

std::size_t spectral_mode_count(const SampledFunction& g, double dp, std::size_t cap, double floor) {
    if (!(dp > 0.0))
        throw DomainError("mode step must be > 0");
    const auto& xg = g.grid;
    std::vector<double> mag(cap + 1);
    for (std::size_t m = 0; m <= cap; ++m) {
        const double p = static_cast<double>(m) * dp;
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < xg.count(); ++j) {
            const double w = (j == 0 || j + 1 == xg.count()) ? 0.5 * xg.step() : xg.step();
            acc += w * g.values[j] * std::polar(1.0, -p * xg.node(j));
        }
        mag[m] = std::abs(acc);
    }
    const double top = *std::max_element(mag.begin(), mag.end());
    std::size_t last = 0;
    for (std::size_t m = 0; m <= cap; ++m)
        if (mag[m] > floor * top)
            last = m;
    return std::max<std::size_t>(last, 1);
}

double diffusion_residual(const DiffusionProblem& prob, const Grid1D& p_grid,
                          const Grid1D& time_grid, const SeriesControl& ctrl, double window_start,
                          double* max_abs_u) {
    prob.validate();
    if (time_grid.origin() != 0.0)
        throw DomainError("diffusion residual needs a time grid starting at 0");
    const auto& b = prob.hp.base();
    const double k = b.k(), mu = b.mu();
    const auto syn = build_synthesis(prob.initial_profile, p_grid);
    const DiffusionMultiplier M(b, prob.K_diff, ctrl);
    const std::size_t nx = prob.initial_profile.size();
    const std::size_t nt = time_grid.count();
    const std::size_t nm = syn.p.size();

    // mode multipliers and their time derivatives on the whole time grid
    std::vector<double> mv(nm * nt), md(nm * nt);
    parallel_for(nm, [&](std::size_t m) {
        mv[m * nt] = 1.0;
        md[m * nt] = 0.0;
        for (std::size_t i = 1; i < nt; ++i) {
            const double t = time_grid.node(i);
            const auto v = M(syn.p[m], t);
            check_cancellation(syn, m, v, t);
            mv[m * nt + i] = v.value;
            md[m * nt + i] = M.time_derivative(syn.p[m], t).value;
        }
    }, 1);

    // u(x_j, t_i), u_t(x_j, t_i); u_t ~ t^(mu/k-1) K g''(x) / (k Gamma_k(mu)) near t = 0
    const double sigma = mu / k - 1.0;
    const double amp = prob.K_diff / (k * k_gamma(mu, k));
    std::vector<std::vector<double>> u(nx, std::vector<double>(nt, 0.0)),
        ut(nx, std::vector<double>(nt, 0.0));
    for (std::size_t m = 0; m < nm; ++m) {
        const double p2 = syn.p[m] * syn.p[m];
        for (std::size_t j = 0; j < nx; ++j) {
            const double bj = syn.basis[m][j];
            for (std::size_t i = 0; i < nt; ++i) {
                u[j][i] += mv[m * nt + i] * bj;
                ut[j][i] += md[m * nt + i] * bj;
            }
            ut[j][0] += -p2 * amp * bj;
        }
    }

    std::vector<SampledFunction> profiles;
    profiles.reserve(nx);
    for (std::size_t j = 0; j < nx; ++j) {
        SampledFunction f(time_grid, u[j], ut[j]);
        f.derivative_exponent = sigma;
        profiles.push_back(f.derivative_function());
    }
    const ProductIntegrator P(b.with_order(k - mu, -b.gamma()), time_grid, ctrl);
    const auto D = P.apply_batch(profiles);

    const double dx = prob.initial_profile.grid.step();
    const double t0 = window_start * time_grid.last();
    double r = 0.0, umax = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        if (time_grid.node(i) < t0 || i == 0)
            continue;
        for (std::size_t j = 1; j + 1 < nx; ++j) {
            const double uxx = (u[j + 1][i] - 2.0 * u[j][i] + u[j - 1][i]) / (dx * dx);
            r = std::max(r, std::fabs(k * D[j].values[i] - prob.K_diff * uxx));
            umax = std::max(umax, std::fabs(u[j][i]));
        }
    }
    if (max_abs_u)
        *max_abs_u = umax;
    return r;
}

}  // namespace kprab
