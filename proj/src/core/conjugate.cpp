#include "twoscale/core/conjugate.hpp"

#include <array>
#include <limits>
#include <stdexcept>

namespace twoscale {

double conjugate_at(const GridValueFn& f, std::span<const double> price) {
    const Grid& g = f.grid();
    if (price.size() != g.dims()) throw std::invalid_argument("fenchel_conjugate: price/state dimension mismatch");
    std::array<double, Grid::kMaxDims> buf{};
    const std::span<double> x(buf.data(), g.dims());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, x);
        double dot = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d) dot += price[d] * x[d];
        const double term = low_add(dot, -f[i]);
        if (term > best) best = term;
    }
    return best;
}

GridValueFn fenchel_conjugate(const GridValueFn& f, const Grid& prices) {
    if (f.size() == 0 || prices.size() == 0) throw std::invalid_argument("fenchel_conjugate: empty grid");
    if (prices.dims() != f.grid().dims())
        throw std::invalid_argument("fenchel_conjugate: price grid dimension differs from state grid");
    std::array<double, Grid::kMaxDims> buf{};
    const std::span<double> p(buf.data(), prices.dims());
    std::vector<double> out(prices.size());
    for (std::size_t j = 0; j < prices.size(); ++j) {
        prices.point(j, p);
        out[j] = conjugate_at(f, p);
    }
    return GridValueFn(prices, std::move(out), Interp::multilinear);
}

}  // namespace twoscale
