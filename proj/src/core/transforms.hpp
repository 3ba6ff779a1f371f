#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "grid.hpp"
#include "kspecial.hpp"

namespace kprab {

enum class TransformKind { Laplace, Sumudu };

struct TransformQuery {
    double variable;
    TransformKind kind;

    void validate() const;
};

// f(0+), f'(0+), ... and the frozen integral brackets of the non-regularized
// formulas. For PDeriv with order m, frozen_integral_terms[n] is
//   k^(m-n-1) [(d/dt)^(m-n-1) P^{-gamma}_{alpha, mk-mu} f](0+),   n = 0..m-1.
// For HPDeriv, frozen_integral_terms[0] is [P^{-gamma(1-nu)}_{alpha,(1-nu)(k-mu)} f](0+).
struct BoundaryData {
    std::vector<double> initial_values;
    std::vector<double> frozen_integral_terms;
};

enum class OperatorKind { PIntegral, PDeriv, RegPDeriv, HPDeriv, RegHPDeriv };

const char* to_string(OperatorKind kind);

// 1 - omega k (k u)^(-alpha/k), after checking |omega k (k u)^(-alpha/k)| < 1.
double laplace_factor(double u, const PrabhakarParams& p);
// 1 - omega k (u/k)^(alpha/k), after checking |omega k (u/k)^(alpha/k)| < 1.
double sumudu_factor(double u, const PrabhakarParams& p);

double laplace_kernel_closed(double u, const PrabhakarParams& p);
double sumudu_kernel_closed(double u, const PrabhakarParams& p);
double kernel_closed(const TransformQuery& q, const PrabhakarParams& p);

// Analytic continuation of the kernel transform off the real axis (principal
// branches, no convergence check). Used on inversion contours.
std::complex<double> laplace_kernel_closed(std::complex<double> s, const PrabhakarParams& p);

// Largest real singularity of the kernel transform (0 when omega <= 0).
double laplace_kernel_abscissa(const PrabhakarParams& p);

// nu is read only by the Hilfer kinds.
double laplace_operator_closed(OperatorKind kind, double u, const PrabhakarParams& p, double F,
                               const BoundaryData& bd, double nu = 0.0);
double sumudu_operator_closed(OperatorKind kind, double u, const PrabhakarParams& p, double F,
                              const BoundaryData& bd, double nu = 0.0);
double operator_closed(OperatorKind kind, const TransformQuery& q, const PrabhakarParams& p,
                       double F, const BoundaryData& bd, double nu = 0.0);

// Number of boundary values each kind consumes: {initial_values, frozen_integral_terms}.
std::pair<std::size_t, std::size_t> boundary_arity(OperatorKind kind, const PrabhakarParams& p);

struct NumericTransform {
    double value;
    double tail_estimate;
    double horizon;
};

// int_0^inf e^(-s t) f(t) dt. The horizon T is doubled until
// e^(-sT) max|f| on [0,T] < tol/10, then [0,T] is integrated panel by panel
// with tanh-sinh (robust against integrable endpoint singularities).
NumericTransform numerical_laplace(const std::function<double(double)>& f, double s,
                                   double tol = 1e-10);
// Sampled operand on [0, T]: exact integration of e^(-st) against the
// piecewise-linear interpolant (t^sigma phi with phi linear on the first
// cell for singular operands). A regular operand with a fractional
// leading_exponent e is integrated as t^e phi, phi linear per cell. Throws HorizonError when the tail beyond the
// last node, estimated as e^(-sT)|f(T)|/s, exceeds tol.
NumericTransform numerical_laplace(const SampledFunction& f, double s, double tol = 1e-10);

NumericTransform numerical_sumudu(const std::function<double(double)>& f, double u,
                                  double tol = 1e-10);
NumericTransform numerical_sumudu(const SampledFunction& f, double u, double tol = 1e-10);

// Fixed Talbot contour (Abate-Valko) with M nodes. The optional shift moves
// the contour right: f(t) = e^(shift t) L^-1[F(s + shift)](t).
using ComplexTransform = std::function<std::complex<double>(std::complex<double>)>;
double inverse_laplace_talbot(const ComplexTransform& F, double t, int nodes = 32,
                              double shift = 0.0);

}  // namespace kprab
