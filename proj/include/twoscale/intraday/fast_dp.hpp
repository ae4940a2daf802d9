#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "twoscale/core/discrete_dist.hpp"
#include "twoscale/core/grid_value_fn.hpp"

namespace twoscale {

using StageCost =
    std::function<double(std::span<const double> x, std::span<const double> u, std::span<const double> w)>;
using StageDynamics = std::function<void(std::span<const double> x, std::span<const double> u,
                                         std::span<const double> w, std::span<double> next)>;

/// One fast step: state grid, finite control set, noise law, cost and
/// dynamics. Constraints go into the cost as +inf. Controls are chosen after
/// the step's noise is observed.
struct FastStage {
    Grid states;
    std::vector<std::vector<double>> controls;
    DiscreteDist noise;
    StageCost cost;
    StageDynamics dynamics;
    bool noise_free_dynamics = false;  // dynamics ignores w: next states are cached per control
};

struct FastStageModel {
    std::vector<FastStage> stages;  // steps 0..M
};

struct FastDpResult {
    std::vector<GridValueFn> values;               // V_0 .. V_M, then the terminal function
    std::vector<std::vector<std::int32_t>> argmin;  // per step: [state * atoms + atom], -1 if infeasible

    std::size_t steps() const { return argmin.size(); }
    /// Minimizing control index, ties toward the smallest index; -1 when every control is infeasible.
    std::int32_t best_control(std::size_t m, std::size_t state, std::size_t atom) const;
};

/// Backward induction V_m(x) = E_w[min_u cost(x,u,w) + V_{m+1}(f(x,u,w))] with
/// V_{M+1} = terminal. The next-stage value is read through the next grid's
/// interpolation mode.
FastDpResult solve_fast_dp(const FastStageModel& model, const GridValueFn& terminal);

}  // namespace twoscale
