// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "kspecial.hpp"
#include "ml_oracle.hpp"
#include "operators.hpp"
#include "solvers.hpp"
#include "transforms.hpp"
#include "verify.hpp"

using namespace kprab;

namespace {

// tolerances, as stated by the criteria
constexpr double kMlTol = 1e-12;
constexpr double kRoundTripTol = 1e-6;
constexpr double kDualityTol = 1e-12;
constexpr double kLemmaTol = 1e-3;
constexpr double kRefineRatio = 0.6;
constexpr double kCompositionTol = 5e-4;
constexpr double kRelationTol = 1e-3;
constexpr double kAlgebraicTol = 1e-10;
constexpr double kQuadratureTol = 5e-4;
constexpr double kResidualTol = 1e-2;
constexpr double kFrozenTol = 1e-2;
constexpr double kInitialTol = 1e-4;
constexpr double kMassTol = 1e-8;
constexpr double kMultiplierTol = 1e-10;
constexpr double kMonotoneSlack = 1.1;  // "monotone within 10% noise"

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::printf("criterion %2d %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<IdentityReport> suite_cases(std::initializer_list<IdentityId> ids) {
    std::vector<IdentityCase> cs;
    for (const auto& c : default_suite())
        if (std::find(ids.begin(), ids.end(), c.id) != ids.end())
            cs.push_back(c);
    return run_suite(cs, default_suite_grid());
}

std::string case_name(const IdentityReport& r) {
    return std::string(to_string(r.c.id)) + "[" + r.c.test_function_id + ", k=" + fmt("%g", r.c.k) + "]";
}

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const auto& q : kt::kMlGrid) {
        const MittagLefflerK ml(PrabhakarParams(q.k, q.alpha, q.mu, q.gamma, 0.0));
        for (int i = 0; i <= 40; ++i) {
            const double z = -5.0 + 0.25 * i;
            worst = std::max(worst, rel(ml(z), kt::oracle_ml_k(z, q.k, q.alpha, q.mu, q.gamma)));
        }
    }
    double worst_exp = 0.0;
    const MittagLefflerK e(PrabhakarParams(1, 1, 1, 1, 0));
    for (int i = 0; i <= 40; ++i) {
        const double z = -5.0 + 0.25 * i;
        worst_exp = std::max(worst_exp, rel(e(z), std::exp(z)));
    }
    const double secs = seconds_since(t0);
    report(1, worst <= kMlTol && worst_exp <= kMlTol && secs < 10.0,
           fmt("ml_k vs 50-digit sum: max rel %.2e", worst) + fmt(", E^1_{1,1,1} vs exp: %.2e", worst_exp) +
               fmt(" (tol 1e-12), %.2f s", secs));
}

void criterion2() {
    double worst = 0.0;
    int count = 0;
    for (double k : {0.8, 1.5, 2.5})
        for (double alpha : {0.7, 1.2, 2.0})
            for (double gamma : {0.3, 0.8, 1.5}) {
                const PrabhakarParams p(k, alpha, 0.6, gamma, 0.1);
                const PrabhakarKernel eps(p);
                auto F = [&](std::complex<double> s) { return laplace_kernel_closed(s, p); };
                for (double t : {0.3, 0.7, 1.5})
                    worst = std::max(worst, rel(inverse_laplace_talbot(F, t, 32, laplace_kernel_abscissa(p)), eps(t)));
                ++count;
            }
    report(2, count == 27 && worst <= kRoundTripTol,
           fmt("Talbot round trip over %.0f parameter points", count) + fmt(": max rel %.2e (tol 1e-6)", worst));
}

void criterion3() {
    const PrabhakarParams sets[] = {{1.5, 1.2, 0.9, 0.5, -0.3}, {0.8, 0.6, 0.5, 0.8, 0.2}, {1.0, 0.9, 1.4, 0.3, -0.2}};
    const OperatorKind kinds[] = {OperatorKind::PIntegral, OperatorKind::PDeriv, OperatorKind::RegPDeriv,
                                  OperatorKind::HPDeriv, OperatorKind::RegHPDeriv};
    double worst = 0.0;
    int checked = 0;
    for (const auto& p : sets)
        for (double u : {0.2, 0.5, 1.0, 2.0}) {
            worst = std::max(worst, rel(sumudu_kernel_closed(u, p), laplace_kernel_closed(1.0 / u, p) / u));
            for (auto kind : kinds) {
                if ((kind == OperatorKind::HPDeriv || kind == OperatorKind::RegHPDeriv) && !(p.mu() < p.k()))
                    continue;
                BoundaryData bd;
                const auto [ni, nf] = boundary_arity(kind, p);
                for (std::size_t i = 0; i < ni; ++i)
                    bd.initial_values.push_back(0.3 - 0.1 * i);
                for (std::size_t i = 0; i < nf; ++i)
                    bd.frozen_integral_terms.push_back(-0.2 + 0.05 * i);
                const double FL = 0.37;  // Laplace transform at 1/u; the Sumudu transform is FL / u
                const double L = laplace_operator_closed(kind, 1.0 / u, p, FL, bd, 0.4);
                const double S = sumudu_operator_closed(kind, u, p, FL / u, bd, 0.4);
                worst = std::max(worst, rel(S, L / u));
                ++checked;
            }
        }
    report(3, worst <= kDualityTol,
           fmt("%.0f Sumudu/Laplace operator pairs plus kernels", checked) + fmt(": max rel %.2e (tol 1e-12)", worst));
}

void criterion4() {
    const auto rs = suite_cases({IdentityId::LaplaceLemma_3_1, IdentityId::LaplaceLemma_3_2,
                                 IdentityId::LaplaceLemma_3_3, IdentityId::LaplaceLemma_3_4});
    bool ok = !rs.empty();
    double worst = 0.0, worst_ratio = 0.0;
    std::string bad;
    for (const auto& r : rs) {
        const double ratio = r.refined_rel_err / r.max_rel_err;
        const bool good = r.c.test_function_id == "t_exp_neg" && r.grid_size == 4096 && r.max_rel_err <= kLemmaTol &&
                          ratio <= kRefineRatio;
        if (!good)
            bad += " " + case_name(r) + fmt(" err %.2e", r.max_rel_err) + fmt(" ratio %.2f", ratio);
        ok = ok && good;
        worst = std::max(worst, r.max_rel_err);
        worst_ratio = std::max(worst_ratio, ratio);
    }
    report(4, ok,
           fmt("%.0f lemma cases on t e^-t", static_cast<double>(rs.size())) +
               fmt(": max rel %.2e (tol 1e-3)", worst) + fmt(", worst 8192/4096 ratio %.3f (<= 0.6)", worst_ratio) + bad);
}

void criterion5() {
    const auto rs = suite_cases({IdentityId::Composition_2_12});
    bool ok = true;
    double worst = 0.0, worst_ratio = 0.0;
    std::vector<std::string> fns;
    std::string bad;
    for (const auto& r : rs) {
        const double ratio = r.refined_rel_err / r.max_rel_err;
        const bool good = r.grid_size == 4096 && r.max_rel_err <= kCompositionTol && ratio <= kRefineRatio;
        if (!good)
            bad += " " + case_name(r) + fmt(" err %.2e", r.max_rel_err) + fmt(" ratio %.2f", ratio);
        ok = ok && good;
        worst = std::max(worst, r.max_rel_err);
        worst_ratio = std::max(worst_ratio, ratio);
        if (std::find(fns.begin(), fns.end(), r.c.test_function_id) == fns.end())
            fns.push_back(r.c.test_function_id);
    }
    ok = ok && fns.size() >= 3;
    report(5, ok,
           fmt("%.0f composition cases", static_cast<double>(rs.size())) +
               fmt(" on %.0f test functions", static_cast<double>(fns.size())) + fmt(": max rel %.2e (tol 5e-4)", worst) +
               fmt(", worst ratio %.3f (<= 0.6)", worst_ratio) + bad);
}

void criterion6() {
    const auto rs = suite_cases({IdentityId::Relation_3_7, IdentityId::Relation_3_16});
    bool ok = !rs.empty();
    double worst = 0.0, worst_ratio = 0.0;
    std::string bad;
    for (const auto& r : rs) {
        const double ratio = r.refined_rel_err / r.max_rel_err;
        const bool good = r.c.test_function_id == "quad" && r.lhs_path != r.rhs_path && r.max_rel_err <= kRelationTol &&
                          ratio < 1.0;
        if (!good)
            bad += " " + case_name(r) + fmt(" err %.2e", r.max_rel_err) + fmt(" ratio %.2f", ratio);
        ok = ok && good;
        worst = std::max(worst, r.max_rel_err);
        worst_ratio = std::max(worst_ratio, ratio);
    }
    report(6, ok,
           fmt("%.0f relation cases on 1+t+t^2", static_cast<double>(rs.size())) +
               fmt(": max rel %.2e (tol 1e-3)", worst) + fmt(", worst refinement ratio %.3f (< 1)", worst_ratio) + bad);
}

void criterion7() {
    const auto rs = suite_cases({IdentityId::Reduce_gamma0_Hilfer, IdentityId::Reduce_nu0, IdentityId::Reduce_nu1,
                                 IdentityId::Reduce_k1_classical});
    bool ok = !rs.empty();
    double worst_alg = 0.0, worst_quad = 0.0;
    std::string bad;
    for (const auto& r : rs) {
        const bool quad = is_quadrature_mediated(r.c.id);
        const bool good = r.max_rel_err <= (quad ? kQuadratureTol : kAlgebraicTol) && r.lhs_path != r.rhs_path;
        if (!good)
            bad += " " + case_name(r) + fmt(" err %.2e", r.max_rel_err);
        ok = ok && good;
        (quad ? worst_quad : worst_alg) = std::max(quad ? worst_quad : worst_alg, r.max_rel_err);
    }
    report(7, ok,
           fmt("%.0f reduction cases", static_cast<double>(rs.size())) +
               fmt(": algebraic max %.2e (tol 1e-10)", worst_alg) + fmt(", gamma=0 max %.2e (tol 5e-4)", worst_quad) + bad);
}

void criterion8() {
    const HilferParams hp(PrabhakarParams(1.3, 1.0, 0.6, 0.2, -0.2), 0.4);
    const double K = 1.0;
    std::vector<double> residuals;
    double frozen = 0.0;
    for (std::size_t n : {1024, 2048, 4096}) {
        const auto g = Grid1D::span(0.0, 2.0, n + 1);
        const RelaxationProblem prob{hp, -0.5, 0.1, K, SampledFunction::sample(g, [](double x) { return 1.0 + x; })};
        const auto y = solve_relaxation(prob, g);
        residuals.push_back(relaxation_residual(prob, y) / max_abs_from(y.values, 0.25));
        frozen = relaxation_frozen_value(prob, y);
    }
    const bool monotone = residuals[1] <= kMonotoneSlack * residuals[0] && residuals[2] <= kMonotoneSlack * residuals[1];
    const double frozen_err = std::fabs(frozen - K) / K;
    report(8, residuals[2] <= kResidualTol && monotone && frozen_err <= kFrozenTol,
           fmt("relative residual N=1024/2048/4096: %.2e", residuals[0]) + fmt(" / %.2e", residuals[1]) +
               fmt(" / %.2e (tol 1e-2, monotone)", residuals[2]) + fmt(", frozen datum error %.2e (tol 1e-2)", frozen_err));
}

void criterion9() {
    const auto t0 = std::chrono::steady_clock::now();
    const HilferParams hp(PrabhakarParams(2.0, 1.5, 1.2, 0.3, -0.2), 0.5);
    const double span = 32.0, dp = 2.0 * std::numbers::pi / span;
    const int modes = 31;
    const Grid1D pg(-modes * dp, dp, 2 * modes + 1);
    double ic = 0.0, drift = 0.0;
    std::vector<double> residuals;
    for (std::size_t nx : {129, 257, 513}) {
        const auto xg = Grid1D::span(-span / 2, span / 2, nx);
        const auto g = SampledFunction::sample(xg, [](double x) { return std::exp(-x * x / 8.0); });
        const DiffusionProblem prob{hp, 1.0, g, {1e-6, 0.1, 0.25, 0.5}};
        const auto sols = solve_diffusion(prob, pg);
        auto mass = [&](const std::vector<double>& u) {
            double m = 0.0;
            for (std::size_t j = 0; j < u.size(); ++j)
                m += u[j] * ((j == 0 || j + 1 == u.size()) ? 0.5 : 1.0);
            return m * xg.step();
        };
        double gmax = 0.0, e0 = 0.0;
        for (std::size_t j = 0; j < nx; ++j) {
            gmax = std::max(gmax, std::fabs(g.values[j]));
            e0 = std::max(e0, std::fabs(sols[0].values.values[j] - g.values[j]));
        }
        ic = std::max(ic, e0 / gmax);
        const double m0 = mass(g.values);
        for (const auto& s : sols)
            drift = std::max(drift, std::fabs(mass(s.values.values) - m0) / m0);
        double umax = 0.0;
        const double r = diffusion_residual(prob, pg, Grid1D::span(0.0, 0.5, nx), {}, 0.125, &umax);
        residuals.push_back(r / umax);
    }
    // k = 1, gamma = 0 against E_mu(-K p^2 t^mu) summed directly; |z| <= 4 keeps the
    // alternating series resolvable in long double
    double mult = 0.0;
    const double mu = 0.6, K = 1.0;
    const DiffusionMultiplier M(PrabhakarParams(1.0, 0.7, mu, 0.0, -0.4), K);
    for (double p : {0.0, 0.5, 1.0, 2.0})
        for (double t : {0.05, 0.2, 0.5, 1.0}) {
            const double z = -K * p * p * std::pow(t, mu);
            long double s = 0, zn = 1;
            for (int n = 0; n < 400; ++n) {
                const long double term = zn / std::tgamma(static_cast<long double>(mu * n + 1));
                s += term;
                if (n > 5 && std::fabs(term) < 1e-22L * std::fabs(s))
                    break;
                zn *= z;
            }
            mult = std::max(mult, std::fabs(M(p, t).value - static_cast<double>(s)));
        }
    const bool monotone = residuals[1] <= kMonotoneSlack * residuals[0] && residuals[2] <= kMonotoneSlack * residuals[1];
    const double secs = seconds_since(t0);
    report(9, ic <= kInitialTol && drift <= kMassTol && mult <= kMultiplierTol && residuals[2] <= kResidualTol && monotone,
           fmt("initial condition %.2e (tol 1e-4)", ic) + fmt(", mass drift %.2e (tol 1e-8)", drift) +
               fmt(", k=1 multiplier %.2e (tol 1e-10)", mult) + fmt(", residual nx=129/257/513: %.2e", residuals[0]) +
               fmt(" / %.2e", residuals[1]) + fmt(" / %.2e (tol 1e-2, monotone)", residuals[2]) + fmt(", %.1f s", secs));
}

void criterion10(const char* cli, const char* python, const char* checker) {
    namespace fs = std::filesystem;
    const fs::path out = fs::temp_directory_path() / "kprab_acceptance_verify";
    fs::remove_all(out);
    const std::string run = std::string("\"") + cli + "\" verify --out \"" + out.string() + "\" > \"" +
                            (out.string() + ".log") + "\" 2>&1";
    const int status = std::system(run.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    const std::string check = std::string("\"") + python + "\" \"" + checker + "\" \"" +
                              (out / "verify_report.json").string() + "\" --all-passed --families 17";
    const int schema = std::system(check.c_str());
    const int schema_code = WIFEXITED(schema) ? WEXITSTATUS(schema) : -1;
    report(10, code == 0 && schema_code == 0,
           fmt("CLI verify exit status %.0f", code) + fmt(", report schema/all-passed check exit %.0f", schema_code));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 4) {
        std::fprintf(stderr, "usage: %s KPRAB_CLI PYTHON CHECK_REPORT_SCRIPT\n", argv[0]);
        return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::function<void()>> steps = {
        criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7, criterion8, criterion9,
        [&] { criterion10(argv[1], argv[2], argv[3]); },
    };
    for (std::size_t i = 0; i < steps.size(); ++i) {
        try {
            steps[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, std::string("threw: ") + e.what());
        }
    }
    std::printf("%d of 10 criteria passed in %.1f s\n", 10 - failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
