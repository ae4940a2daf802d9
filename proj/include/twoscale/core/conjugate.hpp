#pragma once

#include <span>

#include "twoscale/core/grid_value_fn.hpp"

namespace twoscale {

/// Discrete Fenchel conjugate: f*(p) = max over grid points x of <p, x> - f(x),
/// tabulated on `prices`. Grid points where f = +inf contribute -inf, so the
/// conjugate of +inf everywhere is -inf everywhere.
GridValueFn fenchel_conjugate(const GridValueFn& f, const Grid& prices);

/// Single conjugate value at an arbitrary price vector.
double conjugate_at(const GridValueFn& f, std::span<const double> price);

}  // namespace twoscale
