#include "quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "errors.hpp"

namespace kprab {

QuadratureRule gauss_jacobi01(std::size_t points, double a) {
    if (points == 0)
        throw DomainError("quadrature needs at least one point");
    if (!(a > -1.0))
        throw DomainError("Jacobi weight exponent must be > -1");

    // Monic Jacobi recurrence on [-1, 1] with weight (1+x)^a.
    const double alpha = 0.0;
    const double beta = a;
    const double ab = alpha + beta;
    const auto n = static_cast<Eigen::Index>(points);
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double k = static_cast<double>(i);
        const double s = 2.0 * k + ab;
        diag(i) = (i == 0) ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (Eigen::Index i = 1; i < n; ++i) {
        const double k = static_cast<double>(i);
        const double s = 2.0 * k + ab;
        const double b = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        sub(i - 1) = std::sqrt(b);
    }

    QuadratureRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    // int_{-1}^{1} (1+x)^a dx = 2^(a+1)/(a+1); mapping s = (1+x)/2 divides by 2^(a+1).
    const double mu0_mapped = 1.0 / (a + 1.0);
    if (n == 1) {
        rule.nodes[0] = 0.5 * (1.0 + diag(0));
        rule.weights[0] = mu0_mapped;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 + es.eigenvalues()(i));
        rule.weights[static_cast<std::size_t>(i)] = mu0_mapped * v0 * v0;
    }
    return rule;
}

double beta_fn(double a, double b) {
    if (a + b < 170.0)
        return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

}  // namespace kprab
