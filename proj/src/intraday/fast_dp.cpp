#include "twoscale/intraday/fast_dp.hpp"

#include <array>
#include <limits>
#include <stdexcept>
#include <string>

namespace twoscale {

std::int32_t FastDpResult::best_control(std::size_t m, std::size_t state, std::size_t atom) const {
    const std::size_t atoms = argmin.at(m).size() / values.at(m).size();
    return argmin[m].at(state * atoms + atom);
}

FastDpResult solve_fast_dp(const FastStageModel& model, const GridValueFn& terminal) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n_steps = model.stages.size();
    if (n_steps == 0) throw std::invalid_argument("solve_fast_dp: model has no stages");

    FastDpResult out;
    out.values.resize(n_steps + 1);
    out.argmin.resize(n_steps);
    out.values[n_steps] = terminal;

    for (std::size_t mm = n_steps; mm-- > 0;) {
        const FastStage& st = model.stages[mm];
        const GridValueFn& next = out.values[mm + 1];
        const std::size_t nx = st.states.size();
        const std::size_t nu = st.controls.size();
        const std::size_t nw = st.noise.size();
        const std::size_t dx = st.states.dims();
        const std::size_t dn = next.grid().dims();
        if (nu == 0) throw std::invalid_argument("solve_fast_dp: empty control set at step " + std::to_string(mm));

        std::vector<double> v(nx);
        std::vector<std::int32_t> arg(nx * nw, -1);

#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < nx; ++i) {
            std::array<double, Grid::kMaxDims> xb{};
            std::array<double, Grid::kMaxDims> yb{};
            const std::span<double> x(xb.data(), dx);
            const std::span<double> y(yb.data(), dn);
            st.states.point(i, x);

            std::vector<double> cont;  // V_{m+1} at the next state, per control
            if (st.noise_free_dynamics) {
                cont.resize(nu);
                for (std::size_t k = 0; k < nu; ++k) {
                    st.dynamics(x, st.controls[k], st.noise.atom(0), y);
                    cont[k] = next.eval_unchecked(y);
                }
            }

            double acc = 0.0;
            bool acc_minus_inf = false;
            for (std::size_t a = 0; a < nw; ++a) {
                const double p = st.noise.prob(a);
                const auto w = st.noise.atom(a);
                double best = inf;
                std::int32_t best_k = -1;
                for (std::size_t k = 0; k < nu; ++k) {
                    const double c = st.cost(x, st.controls[k], w);
                    if (c == inf) continue;
                    double tail;
                    if (st.noise_free_dynamics) {
                        tail = cont[k];
                    } else {
                        st.dynamics(x, st.controls[k], w, y);
                        tail = next.eval_unchecked(y);
                    }
                    const double total = low_add(c, tail);
                    if (total < best) {
                        best = total;
                        best_k = static_cast<std::int32_t>(k);
                    }
                }
                arg[i * nw + a] = best_k;
                if (p == 0.0) continue;
                if (best == -inf) acc_minus_inf = true;
                else acc += p * best;
            }
            v[i] = acc_minus_inf ? -inf : acc;
        }
        out.values[mm] = GridValueFn(st.states, std::move(v), next.mode());
        out.argmin[mm] = std::move(arg);
    }
    return out;
}

}  // namespace twoscale
