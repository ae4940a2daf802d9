#include "twoscale/core/grid_value_fn.hpp"

#include <array>
#include <limits>
#include <stdexcept>
#include <string>

namespace twoscale {

std::string_view to_string(Interp mode) {
    return mode == Interp::nearest ? "nearest" : "multilinear";
}

Interp interp_from_string(std::string_view s) {
    if (s == "nearest") return Interp::nearest;
    if (s == "multilinear") return Interp::multilinear;
    throw std::invalid_argument("unknown interpolation mode: " + std::string(s));
}

GridValueFn::GridValueFn(Grid grid, std::vector<double> values, Interp mode)
    : grid_(std::move(grid)), values_(std::move(values)), mode_(mode) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("GridValueFn: " + std::to_string(values_.size()) + " values for a grid of " +
                                    std::to_string(grid_.size()) + " points");
}

GridValueFn::GridValueFn(Grid grid, double fill, Interp mode)
    : grid_(std::move(grid)), values_(grid_.size(), fill), mode_(mode) {}

GridValueFn GridValueFn::tabulate(Grid grid, const std::function<double(std::span<const double>)>& f, Interp mode) {
    std::vector<double> v(grid.size());
    std::array<double, Grid::kMaxDims> p{};
    const std::span<double> x(p.data(), grid.dims());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.point(i, x);
        v[i] = f(x);
    }
    return GridValueFn(std::move(grid), std::move(v), mode);
}

ExtReal GridValueFn::eval(std::span<const double> x) const {
    if (x.size() != grid_.dims())
        throw std::invalid_argument("GridValueFn::eval: query has " + std::to_string(x.size()) +
                                    " coordinates, grid has " + std::to_string(grid_.dims()));
    return ExtReal(eval_unchecked(x));
}

double GridValueFn::eval_unchecked(std::span<const double> x) const {
    return mode_ == Interp::nearest ? eval_nearest(x) : eval_multilinear(x);
}

double GridValueFn::eval_nearest(std::span<const double> x) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < grid_.dims(); ++d) flat += grid_.nearest(d, x[d]) * grid_.stride(d);
    return values_[flat];
}

double GridValueFn::eval_multilinear(std::span<const double> x) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = grid_.dims();
    std::array<std::size_t, Grid::kMaxDims> base{};
    std::array<double, Grid::kMaxDims> t{};
    std::size_t base_flat = 0;
    for (std::size_t d = 0; d < n; ++d) {
        const auto b = grid_.bracket(d, x[d]);
        base[d] = b.lo;
        t[d] = b.t;
        base_flat += b.lo * grid_.stride(d);
    }
    // Vertices with zero weight are skipped, so exact grid points return their
    // own value even when a neighbour is infinite.
    double acc = 0.0;
    bool minus_inf = false;
    const std::size_t corners = std::size_t{1} << n;
    for (std::size_t c = 0; c < corners; ++c) {
        double w = 1.0;
        std::size_t flat = base_flat;
        for (std::size_t d = 0; d < n; ++d) {
            if (c & (std::size_t{1} << d)) {
                w *= t[d];
                flat += grid_.stride(d);
            } else {
                w *= 1.0 - t[d];
            }
        }
        if (w == 0.0) continue;
        const double v = values_[flat];
        if (v == inf) return inf;
        if (v == -inf) minus_inf = true;
        else acc += w * v;
    }
    return minus_inf ? -inf : acc;
}

}  // namespace twoscale
