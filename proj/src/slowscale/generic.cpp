#include "twoscale/slowscale/generic.hpp"

#include <array>
#include <limits>
#include <stdexcept>

#include "twoscale/core/conjugate.hpp"

namespace twoscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool dominated(const Grid& g, std::size_t a, std::size_t b) {  // point a <= point b componentwise
    std::array<std::size_t, Grid::kMaxDims> ia{}, ib{};
    g.unflatten(a, std::span<std::size_t>(ia.data(), g.dims()));
    g.unflatten(b, std::span<std::size_t>(ib.data(), g.dims()));
    for (std::size_t d = 0; d < g.dims(); ++d)
        if (ia[d] > ib[d]) return false;
    return true;
}

}  // namespace

GridValueFn lower_envelope(const GridValueFn& f) {
    const Grid& g = f.grid();
    std::vector<double> v(g.size(), kInf);
    for (std::size_t y = 0; y < g.size(); ++y)
        for (std::size_t x = 0; x < g.size(); ++x)
            if (dominated(g, x, y) && f[x] < v[y]) v[y] = f[x];
    return GridValueFn(g, std::move(v), f.mode());
}

SlowValueSeq block_recursion(const TwoScaleProblem& p, bool inequality) {
    SlowValueSeq seq{BoundKind::exact, std::vector<GridValueFn>(p.D + 2)};
    seq.days[p.D + 1] = p.final_cost;
    for (int d = p.D; d >= 0; --d) {
        const GridValueFn terminal = inequality ? lower_envelope(seq.days[d + 1]) : seq.days[d + 1];
        auto res = solve_fast_dp(p.day_model(d), terminal);
        seq.days[d] = GridValueFn(p.states, std::vector<double>(res.values[0].values().begin(), res.values[0].values().end()),
                                  p.final_cost.mode());
    }
    return seq;
}

SlowValueSeq generic_resource_recursion(const TwoScaleProblem& p) {
    const Grid& g = p.states;
    SlowValueSeq seq{BoundKind::resource_upper, std::vector<GridValueFn>(p.D + 2)};
    seq.days[p.D + 1] = p.final_cost;
    std::array<double, Grid::kMaxDims> rb{};
    const std::span<double> r(rb.data(), g.dims());
    for (int d = p.D; d >= 0; --d) {
        const FastStageModel model = p.day_model(d);
        std::vector<double> v(g.size(), kInf);
        for (std::size_t ri = 0; ri < g.size(); ++ri) {
            g.point(ri, r);
            // terminal indicator of {y >= r}
            const GridValueFn target = GridValueFn::tabulate(
                g,
                [&](std::span<const double> y) {
                    for (std::size_t k = 0; k < y.size(); ++k)
                        if (y[k] < r[k]) return kInf;
                    return 0.0;
                },
                p.final_cost.mode());
            const auto res = solve_fast_dp(model, target);
            const double next = seq.days[d + 1][ri];
            for (std::size_t x = 0; x < g.size(); ++x) {
                const double t = low_add(res.values[0][x], next);
                if (t < v[x]) v[x] = t;
            }
        }
        seq.days[d] = GridValueFn(g, std::move(v), p.final_cost.mode());
    }
    return seq;
}

SlowValueSeq generic_price_recursion(const TwoScaleProblem& p, const Grid& prices) {
    const Grid& g = p.states;
    if (prices.dims() != g.dims()) throw std::invalid_argument("price grid dimension differs from state grid");
    for (const auto& ax : prices.axes())
        if (ax.back() > 0.0) throw std::invalid_argument("price grid must be nonpositive");
    SlowValueSeq seq{BoundKind::price_lower, std::vector<GridValueFn>(p.D + 2)};
    seq.days[p.D + 1] = p.final_cost;
    std::array<double, Grid::kMaxDims> pb{};
    const std::span<double> pr(pb.data(), g.dims());
    for (int d = p.D; d >= 0; --d) {
        const FastStageModel model = p.day_model(d);
        std::vector<double> v(g.size(), -kInf);
        for (std::size_t j = 0; j < prices.size(); ++j) {
            prices.point(j, pr);
            const double conj = conjugate_at(seq.days[d + 1], pr);
            const GridValueFn linear = GridValueFn::tabulate(
                g,
                [&](std::span<const double> y) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < y.size(); ++k) s += pr[k] * y[k];
                    return s;
                },
                p.final_cost.mode());
            const auto res = solve_fast_dp(model, linear);
            for (std::size_t x = 0; x < g.size(); ++x) {
                const double t = low_add(res.values[0][x], -conj);
                if (t > v[x]) v[x] = t;
            }
        }
        seq.days[d] = GridValueFn(g, std::move(v), p.final_cost.mode());
    }
    return seq;
}

}  // namespace twoscale
