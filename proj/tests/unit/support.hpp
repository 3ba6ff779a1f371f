#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "grid.hpp"

namespace kt {

inline double rel_err(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

// max |a-b| / max |b| over nodes i >= first
inline double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b, std::size_t first = 0) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = first; i < a.size(); ++i) {
        num = std::max(num, std::fabs(a[i] - b[i]));
        den = std::max(den, std::fabs(b[i]));
    }
    return num / den;
}

inline kprab::SampledFunction on(double T, std::size_t cells, double (*f)(double)) {
    return kprab::SampledFunction::sample(kprab::Grid1D::span(0.0, T, cells + 1), f);
}

}  // namespace kt
