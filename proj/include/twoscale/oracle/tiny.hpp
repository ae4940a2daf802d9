#pragma once

#include <cstdint>
#include <vector>

#include "twoscale/core/discrete_dist.hpp"
#include "twoscale/slowscale/generic.hpp"

namespace twoscale::oracle {

/// Tabulated fast step: scalar controls and noise atoms, cost and next-state
/// index for every (state, control, atom).
struct TinyStep {
    std::vector<double> controls;
    DiscreteDist noise;
    std::vector<double> cost;  // [(y * controls + k) * atoms + a]
    std::vector<int> next;     // same layout, state indices

    std::size_t at(std::size_t y, std::size_t k, std::size_t a) const {
        return (y * controls.size() + k) * noise.size() + a;
    }
};

/// Desk-scale two-time-scale problem with a 1-D integer-indexed state.
/// Steps are stored day-major: steps[d * (M + 1) + m].
struct TinyProblem {
    int D = 0;
    int M = 0;
    std::vector<double> states;
    std::vector<TinyStep> steps;
    std::vector<double> final_cost;
    bool inequality = false;  // relax x_{d+1} = y_{d,M+1} into x_{d+1} <= y_{d,M+1}

    const TinyStep& step(int d, int m) const { return steps.at(static_cast<std::size_t>(d * (M + 1) + m)); }
    void validate() const;
};

/// Flat backward DP over every (d, m) plus the day-end slack step. Returns
/// the value at (d, 0) for d = 0..D+1 over the state grid.
std::vector<std::vector<double>> flat_dp_solve(const TinyProblem& p);

/// Optimal value from state index y0 computed on the scenario tree: one
/// node per noise history, decisions optimized node by node for every
/// reachable state. Throws when the tree exceeds max_nodes.
double enumerate_tree(const TinyProblem& p, std::size_t y0, std::size_t max_nodes = 1000000);

/// Same instance as a generic two-scale problem (for the block recursions).
TwoScaleProblem to_two_scale(const TinyProblem& p);

struct TinyShape {
    int max_D = 2;
    int max_M = 2;
    int max_states = 3;
    int max_controls = 3;
    int max_atoms = 2;
};

/// Monotone instance: y' = clamp(y + u - w), costs and final cost
/// nonincreasing in y (built from cumulative nonnegative increments).
TinyProblem random_monotone(std::uint64_t seed, const TinyShape& shape = {});

/// Arbitrary costs, next states and final cost.
TinyProblem random_arbitrary(std::uint64_t seed, const TinyShape& shape = {});

}  // namespace twoscale::oracle
