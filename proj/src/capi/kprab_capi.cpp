#include "kprab/kprab.h"

#include <cmath>
#include <fstream>
#include <memory>
#include <new>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "kspecial.hpp"
#include "operators.hpp"
#include "parallel.hpp"
#include "solvers.hpp"
#include "transforms.hpp"
#include "verify.hpp"

struct kprab_function {
    kprab::SampledFunction f;
};

struct kprab_reports {
    std::vector<kprab::IdentityReport> reports;
    std::string json;
};

namespace {

thread_local std::string g_last_error;

class ApiContractError : public kprab::ContractError {
public:
    using kprab::ContractError::ContractError;
};

class IoError : public kprab::Error {
public:
    using kprab::Error::Error;
};

kprab_status fail(kprab_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

// Runs body and turns exceptions into status codes.
template <class F>
kprab_status guarded(F&& body) {
    try {
        body();
        return KPRAB_OK;
    } catch (const kprab::DomainError& e) {
        return fail(KPRAB_ERR_DOMAIN, e.what());
    } catch (const kprab::TruncationError& e) {
        return fail(KPRAB_ERR_CONVERGENCE, e.what());
    } catch (const kprab::DivergenceError& e) {
        return fail(KPRAB_ERR_CONVERGENCE, e.what());
    } catch (const kprab::HorizonError& e) {
        return fail(KPRAB_ERR_CONVERGENCE, e.what());
    } catch (const kprab::ContractError& e) {
        return fail(KPRAB_ERR_CONTRACT, e.what());
    } catch (const kprab::EvaluationError& e) {
        return fail(KPRAB_ERR_EVALUATION, e.what());
    } catch (const IoError& e) {
        return fail(KPRAB_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(KPRAB_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(KPRAB_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(KPRAB_ERR_INTERNAL, "unknown exception");
    }
}

template <class T>
const T& need(const T* p, const char* what) {
    if (!p)
        throw ApiContractError(std::string(what) + " must not be NULL");
    return *p;
}

const char* need_str(const char* s, const char* what) {
    if (!s)
        throw ApiContractError(std::string(what) + " must not be NULL");
    return s;
}

template <class T>
T& need_out(T* p, const char* what) {
    if (!p)
        throw ApiContractError(std::string("output ") + what + " must not be NULL");
    return *p;
}

kprab::PrabhakarParams params(const kprab_params* p) {
    const auto& q = need(p, "params");
    return {q.k, q.alpha, q.mu, q.gamma, q.omega};
}

kprab::SeriesControl control(const kprab_series_control* c) {
    kprab::SeriesControl s;
    if (c) {
        s.rel_tol = c->rel_tol;
        s.max_terms = c->max_terms;
    }
    s.validate();
    return s;
}

kprab::OperatorKind op_kind(kprab_operator op) {
    switch (op) {
        case KPRAB_OP_INTEGRAL: return kprab::OperatorKind::PIntegral;
        case KPRAB_OP_DERIVATIVE: return kprab::OperatorKind::PDeriv;
        case KPRAB_OP_REG_DERIVATIVE: return kprab::OperatorKind::RegPDeriv;
        case KPRAB_OP_HILFER: return kprab::OperatorKind::HPDeriv;
        case KPRAB_OP_REG_HILFER: return kprab::OperatorKind::RegHPDeriv;
    }
    throw ApiContractError("unknown operator kind");
}

kprab::TransformKind transform_kind(kprab_transform_kind k) {
    switch (k) {
        case KPRAB_LAPLACE: return kprab::TransformKind::Laplace;
        case KPRAB_SUMUDU: return kprab::TransformKind::Sumudu;
    }
    throw ApiContractError("unknown transform kind");
}

kprab_function* wrap(kprab::SampledFunction f) {
    return new kprab_function{std::move(f)};
}

const kprab_reports& reports(const kprab_reports* r) { return need(r, "reports"); }

const kprab::IdentityReport* report_at(const kprab_reports* r, size_t i) {
    if (!r || i >= r->reports.size())
        return nullptr;
    return &r->reports[i];
}

kprab_reports* finish_reports(std::vector<kprab::IdentityReport> rs) {
    auto out = std::make_unique<kprab_reports>();
    out->reports = std::move(rs);
    out->json = kprab::reports_to_json(out->reports);
    return out.release();
}

}  // namespace

extern "C" {

const char* kprab_last_error(void) { return g_last_error.c_str(); }

const char* kprab_status_name(kprab_status s) {
    switch (s) {
        case KPRAB_OK: return "ok";
        case KPRAB_ERR_DOMAIN: return "domain error";
        case KPRAB_ERR_CONVERGENCE: return "convergence error";
        case KPRAB_ERR_CONTRACT: return "contract error";
        case KPRAB_ERR_EVALUATION: return "evaluation error";
        case KPRAB_ERR_IO: return "I/O error";
        case KPRAB_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* kprab_version(void) { return "1.0.0"; }

kprab_status kprab_set_threads(int n) {
    return guarded([&] {
        if (n < 0)
            throw kprab::DomainError("thread count must be >= 0");
        kprab::set_thread_count(n);
    });
}

int kprab_get_threads(void) { return kprab::thread_count(); }

kprab_status kprab_k_gamma(double z, double k, double* out) {
    return guarded([&] { need_out(out, "value") = kprab::k_gamma(z, k); });
}

kprab_status kprab_ml_k(double z, const kprab_params* p, const kprab_series_control* ctrl, double* out) {
    return guarded([&] { need_out(out, "value") = kprab::ml_k(z, params(p), control(ctrl)); });
}

kprab_status kprab_kernel(double t, const kprab_params* p, const kprab_series_control* ctrl, double* out) {
    return guarded([&] {
        need_out(out, "value") = kprab::PrabhakarKernel(params(p), control(ctrl))(t);
    });
}

kprab_status kprab_function_create(double origin, double step, size_t count, const double* values,
                                   const double* derivative, kprab_function** out) {
    return guarded([&] {
        auto& o = need_out(out, "function");
        o = nullptr;
        need(values, "values");
        kprab::Grid1D g(origin, step, count);
        std::vector<double> v(values, values + count);
        if (derivative)
            o = wrap(kprab::SampledFunction(g, std::move(v), std::vector<double>(derivative, derivative + count)));
        else
            o = wrap(kprab::SampledFunction(g, std::move(v)));
    });
}

void kprab_function_free(kprab_function* f) { delete f; }

size_t kprab_function_size(const kprab_function* f) { return f ? f->f.size() : 0; }
double kprab_function_origin(const kprab_function* f) { return f ? f->f.grid.origin() : 0.0; }
double kprab_function_step(const kprab_function* f) { return f ? f->f.grid.step() : 0.0; }
double kprab_function_origin_exponent(const kprab_function* f) {
    return f ? f->f.origin_exponent : 0.0;
}

kprab_status kprab_function_values(const kprab_function* f, double* out, size_t n) {
    return guarded([&] {
        const auto& v = need(f, "function").f.values;
        if (n > 0 && !out)
            throw ApiContractError("output buffer must not be NULL");
        std::copy_n(v.begin(), std::min(n, v.size()), out);
    });
}

kprab_status kprab_apply(kprab_operator op, const kprab_function* f, const kprab_params* p, double nu,
                         const kprab_series_control* ctrl, kprab_function** out) {
    return guarded([&] {
        auto& o = need_out(out, "function");
        o = nullptr;
        const auto& s = need(f, "function").f;
        const auto pp = params(p);
        const auto c = control(ctrl);
        switch (op_kind(op)) {
            case kprab::OperatorKind::PIntegral: o = wrap(kprab::prabhakar_integral(s, pp, c)); break;
            case kprab::OperatorKind::PDeriv: o = wrap(kprab::prabhakar_derivative(s, pp, c)); break;
            case kprab::OperatorKind::RegPDeriv:
                o = wrap(kprab::regularized_prabhakar_derivative(s, pp, c));
                break;
            case kprab::OperatorKind::HPDeriv:
                o = wrap(kprab::hilfer_prabhakar_derivative(s, kprab::HilferParams(pp, nu), c));
                break;
            case kprab::OperatorKind::RegHPDeriv:
                o = wrap(kprab::regularized_hilfer_prabhakar_derivative(s, kprab::HilferParams(pp, nu), c));
                break;
        }
    });
}

kprab_status kprab_transform_kernel(kprab_transform_kind kind, double u, const kprab_params* p, double* out) {
    return guarded([&] {
        need_out(out, "value") = kprab::kernel_closed({u, transform_kind(kind)}, params(p));
    });
}

kprab_status kprab_transform_operator(kprab_transform_kind kind, kprab_operator op, double u,
                                      const kprab_params* p, double nu, double F, const double* initial,
                                      size_t n_initial, const double* frozen, size_t n_frozen,
                                      double* out) {
    return guarded([&] {
        auto& o = need_out(out, "value");
        if ((n_initial > 0 && !initial) || (n_frozen > 0 && !frozen))
            throw ApiContractError("boundary arrays must not be NULL when their length is non-zero");
        kprab::BoundaryData bd;
        if (n_initial > 0)
            bd.initial_values.assign(initial, initial + n_initial);
        if (n_frozen > 0)
            bd.frozen_integral_terms.assign(frozen, frozen + n_frozen);
        o = kprab::operator_closed(op_kind(op), {u, transform_kind(kind)}, params(p), F, bd, nu);
    });
}

kprab_status kprab_numerical_transform(kprab_transform_kind kind, const kprab_function* f, double u,
                                       double tol, double* out) {
    return guarded([&] {
        auto& o = need_out(out, "value");
        const auto& s = need(f, "function").f;
        o = transform_kind(kind) == kprab::TransformKind::Laplace ? kprab::numerical_laplace(s, u, tol).value
                                                                 : kprab::numerical_sumudu(s, u, tol).value;
    });
}

kprab_status kprab_invert_kernel_laplace(double t, const kprab_params* p, int nodes, double* out) {
    return guarded([&] {
        auto& o = need_out(out, "value");
        const auto pp = params(p);
        o = kprab::inverse_laplace_talbot(
            [&](std::complex<double> s) { return kprab::laplace_kernel_closed(s, pp); }, t, nodes,
            kprab::laplace_kernel_abscissa(pp));
    });
}

kprab_status kprab_solve_relaxation(const kprab_relaxation* prob, const kprab_function* forcing,
                                    double t_end, size_t cells, const kprab_series_control* ctrl,
                                    kprab_function** y, kprab_series_info* info, double* residual) {
    return guarded([&] {
        auto& o = need_out(y, "solution");
        o = nullptr;
        const auto& q = need(prob, "problem");
        if (cells < 2)
            throw kprab::DomainError("relaxation grid needs at least 2 cells");
        const auto g = kprab::Grid1D::span(0.0, t_end, cells + 1);
        kprab::RelaxationProblem rp{kprab::HilferParams(params(&q.base), q.nu), q.lambda, q.delta, q.K_init, {}};
        if (forcing) {
            if (!(forcing->f.grid == g))
                throw ApiContractError("forcing must live on the solution grid [0, t_end] with `cells` cells");
            rp.forcing = forcing->f;
        }
        const auto c = control(ctrl);
        auto sol = kprab::solve_relaxation(rp, g, c);
        if (residual)
            *residual = kprab::relaxation_residual(rp, sol, c);
        if (info)
            *info = {sol.terms_used, sol.tail_estimate};
        o = wrap(std::move(sol.values));
    });
}

kprab_status kprab_solve_diffusion(const kprab_diffusion* prob, const kprab_function* profile,
                                   const double* times, size_t n_times, size_t modes,
                                   const kprab_series_control* ctrl, kprab_function** out) {
    return guarded([&] {
        need_out(out, "solution array");
        const auto& q = need(prob, "problem");
        const auto& g = need(profile, "profile").f;
        if (n_times == 0 || !times)
            throw ApiContractError("at least one time point is required");
        for (size_t i = 0; i < n_times; ++i)
            out[i] = nullptr;
        const double span = g.grid.last() - g.grid.origin();
        if (!(span > 0.0))
            throw kprab::DomainError("spatial grid must have positive span");
        const std::size_t nyquist = (g.grid.count() - 1) / 2;
        const double dp = 2.0 * std::numbers::pi / span;
        const std::size_t m =
            modes == 0 ? kprab::spectral_mode_count(g, dp, std::min<std::size_t>(64, nyquist)) : modes;
        const kprab::Grid1D pg(-static_cast<double>(m) * dp, dp, 2 * m + 1);
        kprab::DiffusionProblem dp_{kprab::HilferParams(params(&q.base), q.nu), q.K_diff, g,
                                    std::vector<double>(times, times + n_times)};
        auto sols = kprab::solve_diffusion(dp_, pg, control(ctrl));
        for (size_t i = 0; i < n_times; ++i)
            out[i] = wrap(std::move(sols[i].values));
    });
}

kprab_status kprab_verify_default(size_t cells, const kprab_series_control* ctrl, kprab_reports** out) {
    return guarded([&] {
        auto& o = need_out(out, "reports");
        o = nullptr;
        auto g = kprab::default_suite_grid();
        if (cells > 0)
            g = kprab::Grid1D::span(0.0, g.last(), cells + 1);
        o = finish_reports(kprab::run_suite(kprab::default_suite(), g, control(ctrl)));
    });
}

kprab_status kprab_verify_cases(const kprab_identity_case* cases, size_t n, double t_end, size_t cells,
                                const kprab_series_control* ctrl, kprab_reports** out) {
    return guarded([&] {
        auto& o = need_out(out, "reports");
        o = nullptr;
        if (n > 0 && !cases)
            throw ApiContractError("case array must not be NULL");
        std::vector<kprab::IdentityCase> cs;
        for (size_t i = 0; i < n; ++i) {
            const auto& c = cases[i];
            const auto id = kprab::identity_from_string(need_str(c.identity, "identity"));
            if (!id)
                throw ApiContractError(std::string("unknown identity '") + c.identity + "'");
            cs.push_back({*id, c.k, c.alpha, c.mu, c.gamma, c.omega, c.nu,
                          c.test_function ? c.test_function : "one", c.horizon});
        }
        const auto g = kprab::Grid1D::span(0.0, t_end, (cells > 0 ? cells : 4096) + 1);
        o = finish_reports(kprab::run_suite(cs, g, control(ctrl)));
    });
}

void kprab_reports_free(kprab_reports* r) { delete r; }

size_t kprab_reports_count(const kprab_reports* r) { return r ? r->reports.size() : 0; }

size_t kprab_reports_failed(const kprab_reports* r) {
    if (!r)
        return 0;
    size_t n = 0;
    for (const auto& x : r->reports)
        n += x.passed ? 0 : 1;
    return n;
}

const char* kprab_report_identity(const kprab_reports* r, size_t i) {
    const auto* x = report_at(r, i);
    return x ? kprab::to_string(x->c.id) : nullptr;
}

const char* kprab_report_test_function(const kprab_reports* r, size_t i) {
    const auto* x = report_at(r, i);
    return x ? x->c.test_function_id.c_str() : nullptr;
}

int kprab_report_passed(const kprab_reports* r, size_t i) {
    const auto* x = report_at(r, i);
    return x && x->passed ? 1 : 0;
}

double kprab_report_max_rel_err(const kprab_reports* r, size_t i) {
    const auto* x = report_at(r, i);
    return x ? x->max_rel_err : std::nan("");
}

double kprab_report_refined_rel_err(const kprab_reports* r, size_t i) {
    const auto* x = report_at(r, i);
    return x ? x->refined_rel_err : std::nan("");
}

double kprab_report_threshold(const kprab_reports* r, size_t i) {
    const auto* x = report_at(r, i);
    return x ? x->threshold : std::nan("");
}

const char* kprab_report_diagnostic(const kprab_reports* r, size_t i) {
    const auto* x = report_at(r, i);
    return x ? x->diagnostic.c_str() : nullptr;
}

const char* kprab_reports_json(const kprab_reports* r) { return r ? r->json.c_str() : nullptr; }

kprab_status kprab_reports_write_json(const kprab_reports* r, const char* path) {
    return guarded([&] {
        const auto& rs = reports(r);
        std::ofstream os(need_str(path, "path"), std::ios::binary);
        if (!os)
            throw IoError(std::string("cannot open '") + path + "' for writing");
        os << rs.json;
        if (!os)
            throw IoError(std::string("write to '") + path + "' failed");
    });
}

}  // extern "C"
