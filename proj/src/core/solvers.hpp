#pragma once

#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "grid.hpp"
#include "kspecial.hpp"

namespace kprab {

// D^{gamma,mu,nu}_{alpha,omega} y = lambda P^delta_{alpha,mu,omega} y + f,
// [P^{-gamma(1-nu)}_{alpha,(1-nu)(k-mu),omega} y](0+) = K.
struct RelaxationProblem {
    HilferParams hp;
    double lambda = 0.0;
    double delta = 0.0;
    double K_init = 0.0;
    std::optional<SampledFunction> forcing;

    void validate() const;
};

struct SeriesSolution {
    SampledFunction values;
    int terms_used = 0;
    // newest term norm relative to the running solution norm
    double tail_estimate = 0.0;
};

// The solution keeps the leading power x^s, s = (nu(k-mu)+mu)/k - 1, as its
// origin exponent (node 0 = K/Gamma_k(nu(k-mu)+mu)) whenever K > 0 and s < 0.
SeriesSolution solve_relaxation(const RelaxationProblem& prob, const Grid1D& grid,
                                const SeriesControl& ctrl = {});

// max |D y - lambda P^delta y - f| over nodes x >= window_start * T.
double relaxation_residual(const RelaxationProblem& prob, const SeriesSolution& y,
                           const SeriesControl& ctrl = {}, double window_start = 0.125);

// [P^{-gamma(1-nu)}_{alpha,(1-nu)(k-mu)} y](0+) extrapolated linearly from nodes 1 and 2.
double relaxation_frozen_value(const RelaxationProblem& prob, const SeriesSolution& y,
                               const SeriesControl& ctrl = {});

// Regularized Hilfer-Prabhakar time derivative in time, K d^2/dx^2 in space.
struct DiffusionProblem {
    HilferParams hp;
    double K_diff = 1.0;
    SampledFunction initial_profile;
    std::vector<double> time_points;

    void validate() const;
};

// M(p,t) = sum_n (-K p^2)^n t^(n mu/k) E^{n gamma}_{k,alpha,n mu+k}(omega t^(alpha/k))
// and its time derivative, term by term from
//   d/dt t^(M/k-1) E^G_{k,alpha,M} = t^(M/k-2) E^G_{k,alpha,M-k} / k.
class DiffusionMultiplier {
public:
    struct Value {
        double value;
        int terms;
        // largest |term|, for cancellation estimates
        double max_term;
    };

    DiffusionMultiplier(const PrabhakarParams& base, double K, const SeriesControl& ctrl = {});

    Value operator()(double p, double t) const;
    Value time_derivative(double p, double t) const;

private:
    const MittagLefflerK& ml(std::size_t n, bool lowered) const;
    Value sum(double p, double t, bool derivative) const;

    PrabhakarParams base_;
    double K_;
    SeriesControl ctrl_;
    mutable std::mutex mu_;
    mutable std::deque<std::unique_ptr<MittagLefflerK>> ml_, ml_low_;
};

// p_grid is the symmetric trapezoid grid of the inverse Fourier synthesis.
// With step 2 pi / (spatial span) the synthesis conserves the trapezoidal
// mass exactly.
std::vector<SeriesSolution> solve_diffusion(const DiffusionProblem& prob, const Grid1D& p_grid,
                                            const SeriesControl& ctrl = {});

// Largest mode index m <= cap whose trapezoidal coefficient |g^(m dp)| exceeds
// floor * max |g^|; higher modes carry nothing the profile can resolve.
std::size_t spectral_mode_count(const SampledFunction& g, double dp, std::size_t cap,
                                double floor = 1e-12);

// Evaluates u and the analytic du/dt on the uniform time grid (origin 0),
// applies the regularized Hilfer-Prabhakar derivative per spatial node and
// returns max |D_t u - K u_xx| over interior x nodes and t >= window_start * T.
double diffusion_residual(const DiffusionProblem& prob, const Grid1D& p_grid,
                          const Grid1D& time_grid, const SeriesControl& ctrl = {},
                          double window_start = 0.125, double* max_abs_u = nullptr);

// max |values| over nodes x >= x0 (nodes i >= 1 for singular functions).
double max_abs_from(const SampledFunction& f, double x0);

}  // namespace kprab
