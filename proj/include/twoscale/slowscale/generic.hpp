#pragma once

#include <functional>

#include "twoscale/intraday/fast_dp.hpp"
#include "twoscale/slowscale/value_seq.hpp"

namespace twoscale {

/// Generic two-time-scale problem: the slow state lives on `states` at every
/// day boundary and the day's fast model carries it from (d, 0) to (d, M+1).
struct TwoScaleProblem {
    int D = 0;
    Grid states;
    std::function<FastStageModel(int d)> day_model;
    GridValueFn final_cost;
};

/// Exact block recursion: V_d = day DP with terminal V_{d+1} (equality
/// dynamics) or y -> min_{x' <= y} V_{d+1}(x') (inequality dynamics).
SlowValueSeq block_recursion(const TwoScaleProblem& p, bool inequality);

/// Upper bound: V_d(x) = min_r l^R_d(x, r) + V_{d+1}(r), with l^R from the day
/// DP under the terminal constraint y >= r.
SlowValueSeq generic_resource_recursion(const TwoScaleProblem& p);

/// Lower bound: V_d(x) = max_{p in prices} l^P_d(x, p) (+) -V_{d+1}^*(p), with
/// l^P from the day DP with terminal <p, y>. Prices must be <= 0.
SlowValueSeq generic_price_recursion(const TwoScaleProblem& p, const Grid& prices);

/// g(y) = min over grid points x' <= y (componentwise) of f(x').
GridValueFn lower_envelope(const GridValueFn& f);

}  // namespace twoscale
