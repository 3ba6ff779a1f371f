#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kprab {

// Uniform grid: nodes origin + i*step, i = 0..count-1.
class Grid1D {
public:
    Grid1D(double origin, double step, std::size_t count);
    // count nodes spanning [a, b] inclusive.
    static Grid1D span(double a, double b, std::size_t count);

    double origin() const noexcept { return origin_; }
    double step() const noexcept { return step_; }
    std::size_t count() const noexcept { return count_; }
    double node(std::size_t i) const noexcept { return origin_ + static_cast<double>(i) * step_; }
    double last() const noexcept { return node(count_ - 1); }

    // Same interval, twice the number of cells.
    Grid1D refined() const { return {origin_, step_ / 2.0, 2 * count_ - 1}; }

    bool operator==(const Grid1D& o) const noexcept {
        return origin_ == o.origin_ && step_ == o.step_ && count_ == o.count_;
    }

private:
    double origin_;
    double step_;
    std::size_t count_;
};

// Function samples on a Grid1D.
//
// A weakly singular operand f(t) = t^s phi(t) with -1 < s < 0 (or any s != 0)
// is flagged through origin_exponent = s. Nodes i >= 1 hold f(t_i) as usual;
// node 0 holds phi(0+) = lim t^(-s) f(t), the amplitude of the leading power.
// The same convention applies to the optional derivative samples.
struct SampledFunction {
    Grid1D grid;
    std::vector<double> values;
    std::vector<double> derivative;
    double origin_exponent = 0.0;
    double derivative_exponent = 0.0;
    // Regular samples that behave like x^e at the origin (0 = smooth).
    // Only the sampled transforms look at it.
    double leading_exponent = 0.0;

    SampledFunction(Grid1D g, std::vector<double> v);
    SampledFunction(Grid1D g, std::vector<double> v, std::vector<double> dv);

    static SampledFunction sample(const Grid1D& g, const std::function<double(double)>& f);
    static SampledFunction sample(const Grid1D& g, const std::function<double(double)>& f,
                                  const std::function<double(double)>& df);

    bool has_derivative() const noexcept { return !derivative.empty(); }
    bool is_regular() const noexcept { return origin_exponent == 0.0; }
    std::size_t size() const noexcept { return values.size(); }

    // Samples of f' as a SampledFunction of their own.
    SampledFunction derivative_function() const;

    void check() const;
};

}  // namespace kprab
