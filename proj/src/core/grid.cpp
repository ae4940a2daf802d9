#include "twoscale/core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace twoscale {

Grid::Grid(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw std::invalid_argument("Grid: at least one dimension required");
    if (axes_.size() > kMaxDims) throw std::invalid_argument("Grid: too many dimensions");
    strides_.assign(axes_.size(), 1);
    uniform_step_.assign(axes_.size(), 0.0);
    size_ = 1;
    for (std::size_t d = axes_.size(); d-- > 0;) {
        const auto& a = axes_[d];
        if (a.empty()) throw std::invalid_argument("Grid: empty axis " + std::to_string(d));
        for (std::size_t i = 1; i < a.size(); ++i) {
            if (!(a[i] > a[i - 1]))
                throw std::invalid_argument("Grid: axis " + std::to_string(d) + " not strictly increasing");
        }
        strides_[d] = size_;
        size_ *= a.size();
        if (a.size() >= 2) {
            const double h = (a.back() - a.front()) / static_cast<double>(a.size() - 1);
            bool uniform = true;
            for (std::size_t i = 0; i < a.size() && uniform; ++i)
                uniform = std::abs(a[i] - (a.front() + h * static_cast<double>(i))) <= 1e-12 * (1.0 + std::abs(a[i]));
            if (uniform) uniform_step_[d] = h;
        }
    }
}

Grid Grid::uniform(double lo, double hi, std::size_t n) {
    if (n == 0) throw std::invalid_argument("Grid::uniform: n must be >= 1");
    std::vector<double> a(n);
    if (n == 1) {
        a[0] = lo;
    } else {
        const double h = (hi - lo) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) a[i] = lo + h * static_cast<double>(i);
        a.back() = hi;
    }
    return Grid({std::move(a)});
}

Grid Grid::product(const std::vector<Grid>& factors) {
    std::vector<std::vector<double>> axes;
    for (const auto& g : factors)
        for (const auto& a : g.axes()) axes.push_back(a);
    return Grid(std::move(axes));
}

std::size_t Grid::flat_index(std::span<const std::size_t> idx) const {
    std::size_t f = 0;
    for (std::size_t d = 0; d < axes_.size(); ++d) f += idx[d] * strides_[d];
    return f;
}

void Grid::unflatten(std::size_t flat, std::span<std::size_t> idx) const {
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        idx[d] = flat / strides_[d];
        flat -= idx[d] * strides_[d];
    }
}

void Grid::point(std::size_t flat, std::span<double> out) const {
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        const std::size_t i = flat / strides_[d];
        flat -= i * strides_[d];
        out[d] = axes_[d][i];
    }
}

std::vector<double> Grid::point(std::size_t flat) const {
    std::vector<double> p(axes_.size());
    point(flat, p);
    return p;
}

Grid::Bracket Grid::bracket(std::size_t d, double x) const {
    const auto& a = axes_[d];
    const std::size_t n = a.size();
    if (n == 1 || x <= a.front()) return {0, 0.0};
    if (x >= a.back()) return {n - 2, 1.0};
    std::size_t lo;
    if (uniform_step_[d] > 0.0) {
        lo = static_cast<std::size_t>((x - a.front()) / uniform_step_[d]);
        lo = std::min(lo, n - 2);
        // Rounding can put x one cell off.
        if (x < a[lo]) --lo;
        else if (x > a[lo + 1]) ++lo;
    } else {
        lo = static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), x) - a.begin()) - 1;
        lo = std::min(lo, n - 2);
    }
    const double t = (x - a[lo]) / (a[lo + 1] - a[lo]);
    return {lo, std::clamp(t, 0.0, 1.0)};
}

std::size_t Grid::nearest(std::size_t d, double x) const {
    const auto [lo, t] = bracket(d, x);
    if (axes_[d].size() == 1) return 0;
    const double dl = std::abs(x - axes_[d][lo]);
    const double du = std::abs(axes_[d][lo + 1] - x);
    return du < dl ? lo + 1 : lo;
}

std::size_t Grid::find(std::size_t d, double x, double tol) const {
    const std::size_t i = nearest(d, x);
    return std::abs(axes_[d][i] - x) <= tol ? i : npos;
}

}  // namespace twoscale
