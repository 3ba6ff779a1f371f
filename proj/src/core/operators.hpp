#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "grid.hpp"
#include "kspecial.hpp"
#include "quadrature.hpp"

namespace kprab {

// Kernel series eps(t) = sum_n b_n (t/h)^(p_n - 1) / h on one cell of width h,
// i.e. b_n = a_n omega^n h^(p_n) / k and p_n = (alpha n + mu)/k.
struct ScaledKernelTerm {
    double b;
    double p;
};
std::vector<ScaledKernelTerm> scaled_kernel_terms(const MittagLefflerK& ml, double h);

// Product integration of (eps * f)(x_i) on a uniform grid starting at 0.
//
// f is replaced by its piecewise-linear interpolant. The first kernel cell
// [0, h] is integrated exactly from the kernel series, the others with
// Gauss-Legendre on the full kernel. For regular operands the weights are
// Toeplitz and (Pf)_i = sum_j U_j f_{i-j-1} + V_j f_{i-j}.
//
// Operands with origin_exponent s != 0 (values t^s phi) interpolate phi
// instead and use cell-by-cell weights: Gauss-Jacobi at both singular ends,
// Beta moments on the very first cell.
class ProductIntegrator {
public:
    static constexpr std::size_t kGaussPoints = 10;

    ProductIntegrator(const PrabhakarParams& p, const Grid1D& grid, const SeriesControl& ctrl = {});

    SampledFunction apply(const SampledFunction& f) const;
    // Same grid and origin exponent for every operand; row weights of the
    // singular path are built once and shared.
    std::vector<SampledFunction> apply_batch(const std::vector<SampledFunction>& fs) const;

    const Grid1D& grid() const noexcept { return grid_; }
    const PrabhakarParams& params() const noexcept { return kernel_.mittag_leffler().params(); }
    const std::vector<double>& weights_u() const noexcept { return u_; }
    const std::vector<double>& weights_v() const noexcept { return v_; }

private:
    std::vector<double> apply_regular(const std::vector<double>& f) const;
    std::vector<std::vector<double>> apply_singular(const std::vector<const SampledFunction*>& fs,
                                                    double sigma) const;
    SampledFunction finish(std::vector<double> out, double sigma, double phi0, double lead) const;

    Grid1D grid_;
    SeriesControl ctrl_;
    PrabhakarKernel kernel_;
    QuadratureRule gl_;
    std::vector<ScaledKernelTerm> terms_;
    // kernel at tau = (j + s_g) h for j >= 1, row-major [j][g]; row 0 unused
    std::vector<double> kv_;
    std::vector<double> u_, v_;
};

// m = floor(mu/k) + 1
int derivative_order(const PrabhakarParams& p);

// Second-order finite differences; one-sided second-order stencils at the ends.
std::vector<double> fd_first(const std::vector<double>& v, double h);
std::vector<double> fd_second(const std::vector<double>& v, double h);
std::vector<double> fd_derivative(const std::vector<double>& v, double h, int order);

SampledFunction prabhakar_integral(const SampledFunction& f, const PrabhakarParams& p,
                                   const SeriesControl& ctrl = {});
SampledFunction k_rl_integral(const SampledFunction& f, double mu, double k,
                              const SeriesControl& ctrl = {});
SampledFunction prabhakar_derivative(const SampledFunction& f, const PrabhakarParams& p,
                                     const SeriesControl& ctrl = {});
SampledFunction regularized_prabhakar_derivative(const SampledFunction& f, const PrabhakarParams& p,
                                                 const SeriesControl& ctrl = {});
SampledFunction hilfer_prabhakar_derivative(const SampledFunction& f, const HilferParams& hp,
                                            const SeriesControl& ctrl = {});
SampledFunction regularized_hilfer_prabhakar_derivative(const SampledFunction& f,
                                                        const HilferParams& hp,
                                                        const SeriesControl& ctrl = {});

// Parameters of the two integral stages of the Hilfer-Prabhakar derivative:
// inner P^{-gamma(1-nu)}_{alpha,(1-nu)(k-mu)}, outer P^{-gamma nu}_{alpha,nu(k-mu)}.
// An order-zero stage (nu = 0 or nu = 1) is left empty and acts as the identity.
struct HilferStages {
    std::optional<PrabhakarParams> inner;
    std::optional<PrabhakarParams> outer;
};
HilferStages hilfer_stages(const HilferParams& hp);

}  // namespace kprab
