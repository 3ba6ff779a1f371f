#include "grid.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace kprab {

Grid1D::Grid1D(double origin, double step, std::size_t count)
    : origin_(origin), step_(step), count_(count) {
    if (!(step > 0.0) || !std::isfinite(step))
        throw DomainError("grid step must be > 0");
    if (!std::isfinite(origin))
        throw DomainError("grid origin must be finite");
    if (count < 2)
        throw DomainError("grid count must be >= 2");
}

Grid1D Grid1D::span(double a, double b, std::size_t count) {
    if (count < 2)
        throw DomainError("grid count must be >= 2");
    if (!(b > a))
        throw DomainError("grid span requires b > a");
    return {a, (b - a) / static_cast<double>(count - 1), count};
}

SampledFunction::SampledFunction(Grid1D g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
    check();
}

SampledFunction::SampledFunction(Grid1D g, std::vector<double> v, std::vector<double> dv)
    : grid(g), values(std::move(v)), derivative(std::move(dv)) {
    check();
}

SampledFunction SampledFunction::sample(const Grid1D& g, const std::function<double(double)>& f) {
    std::vector<double> v(g.count());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = f(g.node(i));
    return {g, std::move(v)};
}

SampledFunction SampledFunction::sample(const Grid1D& g, const std::function<double(double)>& f,
                                        const std::function<double(double)>& df) {
    std::vector<double> v(g.count()), dv(g.count());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = f(g.node(i));
        dv[i] = df(g.node(i));
    }
    return {g, std::move(v), std::move(dv)};
}

SampledFunction SampledFunction::derivative_function() const {
    if (!has_derivative())
        throw ContractError("sampled function carries no derivative samples");
    SampledFunction d(grid, derivative);
    d.origin_exponent = derivative_exponent;
    return d;
}

void SampledFunction::check() const {
    if (values.size() != grid.count()) {
        std::ostringstream os;
        os << "sample count " << values.size() << " does not match grid count " << grid.count();
        throw ContractError(os.str());
    }
    if (!derivative.empty() && derivative.size() != grid.count())
        throw ContractError("derivative samples must match the grid count");
    if (!(origin_exponent > -1.0) || !(derivative_exponent > -1.0))
        throw DomainError("origin exponent must be > -1 (integrable singularity)");
}

}  // namespace kprab
