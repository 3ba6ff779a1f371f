#pragma once

#include <cstddef>
#include <vector>

namespace kprab {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

// Gauss rule for  int_0^1 s^a g(s) ds,  a > -1  (Golub-Welsch).
QuadratureRule gauss_jacobi01(std::size_t points, double a);

// Gauss-Legendre on [0, 1].
inline QuadratureRule gauss_legendre01(std::size_t points) { return gauss_jacobi01(points, 0.0); }

// Beta function B(a, b) for a, b > 0.
double beta_fn(double a, double b);

}  // namespace kprab
