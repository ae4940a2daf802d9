#include "twoscale/oracle/tiny.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

namespace twoscale::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> slack_min(const TinyProblem& p, const std::vector<double>& v) {
    if (!p.inequality) return v;
    std::vector<double> out(v.size());
    double run = kInf;
    for (std::size_t y = 0; y < v.size(); ++y) {
        run = std::min(run, v[y]);
        out[y] = run;
    }
    return out;
}

std::vector<double> fast_step(const TinyStep& st, std::size_t n, const std::vector<double>& next) {
    std::vector<double> v(n, 0.0);
    for (std::size_t y = 0; y < n; ++y) {
        double acc = 0.0;
        for (std::size_t a = 0; a < st.noise.size(); ++a) {
            double best = kInf;
            for (std::size_t k = 0; k < st.controls.size(); ++k) {
                const std::size_t i = st.at(y, k, a);
                best = std::min(best, st.cost[i] + next[static_cast<std::size_t>(st.next[i])]);
            }
            if (st.noise.prob(a) > 0.0) acc += st.noise.prob(a) * best;
        }
        v[y] = acc;
    }
    return v;
}

DiscreteDist random_noise(std::mt19937_64& rng, int atoms) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<double> vals, probs;
    double total = 0.0;
    for (int a = 0; a < atoms; ++a) {
        vals.push_back(static_cast<double>(a));
        probs.push_back(u(rng));
        total += probs.back();
    }
    double acc = 0.0;
    for (int a = 0; a + 1 < atoms; ++a) {
        probs[a] /= total;
        acc += probs[a];
    }
    probs[atoms - 1] = 1.0 - acc;
    return DiscreteDist(std::move(vals), std::move(probs));
}

int draw(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

TinyProblem skeleton(std::mt19937_64& rng, const TinyShape& sh) {
    TinyProblem p;
    p.D = draw(rng, 0, sh.max_D);
    p.M = draw(rng, 0, sh.max_M);
    const int n = draw(rng, 2, sh.max_states);
    for (int i = 0; i < n; ++i) p.states.push_back(static_cast<double>(i));
    return p;
}

std::vector<double> random_controls(std::mt19937_64& rng, int max_controls) {
    std::vector<double> all{-1.0, 0.0, 1.0};
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(draw(rng, 1, std::min(3, max_controls))));
    std::sort(all.begin(), all.end());
    return all;
}

// nonincreasing sequence of length n built from nonnegative increments
std::vector<double> decreasing(std::mt19937_64& rng, std::size_t n, double scale) {
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<double> v(n);
    v[n - 1] = u(rng);
    for (std::size_t i = n - 1; i-- > 0;) v[i] = v[i + 1] + u(rng);
    return v;
}

}  // namespace

void TinyProblem::validate() const {
    if (D < 0 || M < 0) throw std::invalid_argument("TinyProblem: negative horizon");
    if (states.empty()) throw std::invalid_argument("TinyProblem: no states");
    if (steps.size() != static_cast<std::size_t>((D + 1) * (M + 1)))
        throw std::invalid_argument("TinyProblem: expected " + std::to_string((D + 1) * (M + 1)) + " steps");
    if (final_cost.size() != states.size()) throw std::invalid_argument("TinyProblem: final cost size");
    for (const auto& st : steps) {
        const std::size_t n = states.size() * st.controls.size() * st.noise.size();
        if (st.cost.size() != n || st.next.size() != n) throw std::invalid_argument("TinyProblem: table size");
        for (double c : st.cost)
            if (!(c >= 0.0)) throw std::invalid_argument("TinyProblem: costs must lie in [0, +inf]");
        for (int y : st.next)
            if (y < 0 || y >= static_cast<int>(states.size())) throw std::invalid_argument("TinyProblem: bad next state");
    }
}

std::vector<std::vector<double>> flat_dp_solve(const TinyProblem& p) {
    p.validate();
    const std::size_t n = p.states.size();
    std::vector<std::vector<double>> slow(p.D + 2);
    slow[p.D + 1] = p.final_cost;
    for (int d = p.D; d >= 0; --d) {
        std::vector<double> v = slack_min(p, slow[d + 1]);  // fictitious step (d, M+1)
        for (int m = p.M; m >= 0; --m) v = fast_step(p.step(d, m), n, v);
        slow[d] = std::move(v);
    }
    return slow;
}

namespace {

struct TreeWalker {
    const TinyProblem& p;
    std::size_t max_nodes;
    std::size_t nodes = 0;

    // Values over all states at the node reached after `t` fast steps of
    // some noise history; each call is a distinct tree node.
    std::vector<double> node(int t) {
        if (++nodes > max_nodes)
            throw std::runtime_error("enumerate_tree: scenario tree exceeds " + std::to_string(max_nodes) + " nodes");
        const int steps = (p.D + 1) * (p.M + 1);
        const std::size_t n = p.states.size();
        if (t == steps) return p.final_cost;
        const int d = t / (p.M + 1);
        const int m = t % (p.M + 1);
        const TinyStep& st = p.step(d, m);
        std::vector<double> v(n, 0.0);
        for (std::size_t a = 0; a < st.noise.size(); ++a) {
            std::vector<double> child = node(t + 1);
            if (m == p.M && p.inequality) {
                // the slack of the day-end step: any x' <= y, decided on this history
                for (std::size_t y = 1; y < n; ++y) child[y] = std::min(child[y], child[y - 1]);
            }
            for (std::size_t y = 0; y < n; ++y) {
                double best = kInf;
                for (std::size_t k = 0; k < st.controls.size(); ++k) {
                    const std::size_t i = st.at(y, k, a);
                    best = std::min(best, st.cost[i] + child[static_cast<std::size_t>(st.next[i])]);
                }
                if (st.noise.prob(a) > 0.0) v[y] += st.noise.prob(a) * best;
            }
        }
        return v;
    }
};

}  // namespace

double enumerate_tree(const TinyProblem& p, std::size_t y0, std::size_t max_nodes) {
    p.validate();
    if (y0 >= p.states.size()) throw std::invalid_argument("enumerate_tree: initial state out of range");
    TreeWalker w{p, max_nodes};
    return w.node(0)[y0];
}

TwoScaleProblem to_two_scale(const TinyProblem& p) {
    p.validate();
    TwoScaleProblem out;
    out.D = p.D;
    out.states = Grid({p.states});
    out.final_cost = GridValueFn(out.states, p.final_cost, Interp::multilinear);
    const auto shared = std::make_shared<const TinyProblem>(p);
    const Grid states = out.states;
    out.day_model = [shared, states](int d) {
        FastStageModel model;
        for (int m = 0; m <= shared->M; ++m) {
            const TinyStep* st = &shared->step(d, m);
            FastStage fs;
            fs.states = states;
            for (double u : st->controls) fs.controls.push_back({u});
            fs.noise = st->noise;
            auto index = [shared, st](std::span<const double> x, std::span<const double> u,
                                      std::span<const double> w) {
                const auto& xs = shared->states;
                const auto y = static_cast<std::size_t>(std::find(xs.begin(), xs.end(), x[0]) - xs.begin());
                const auto k = static_cast<std::size_t>(
                    std::find(st->controls.begin(), st->controls.end(), u[0]) - st->controls.begin());
                std::size_t a = 0;
                while (st->noise.value(a) != w[0]) ++a;
                return st->at(y, k, a);
            };
            fs.cost = [st, index](auto x, auto u, auto w) { return st->cost[index(x, u, w)]; };
            fs.dynamics = [shared, st, index](auto x, auto u, auto w, std::span<double> next) {
                next[0] = shared->states[static_cast<std::size_t>(st->next[index(x, u, w)])];
            };
            model.stages.push_back(std::move(fs));
        }
        return model;
    };
    return out;
}

TinyProblem random_monotone(std::uint64_t seed, const TinyShape& sh) {
    std::mt19937_64 rng(seed);
    TinyProblem p = skeleton(rng, sh);
    const auto n = static_cast<int>(p.states.size());
    for (int t = 0; t < (p.D + 1) * (p.M + 1); ++t) {
        TinyStep st;
        st.controls = random_controls(rng, sh.max_controls);
        st.noise = random_noise(rng, draw(rng, 1, sh.max_atoms));
        const std::size_t nk = st.controls.size(), na = st.noise.size();
        st.cost.assign(static_cast<std::size_t>(n) * nk * na, 0.0);
        st.next.assign(st.cost.size(), 0);
        for (std::size_t k = 0; k < nk; ++k)
            for (std::size_t a = 0; a < na; ++a) {
                const auto c = decreasing(rng, static_cast<std::size_t>(n), 1.0);
                for (int y = 0; y < n; ++y) {
                    const std::size_t i = st.at(static_cast<std::size_t>(y), k, a);
                    st.cost[i] = c[static_cast<std::size_t>(y)];
                    const int y1 = y + static_cast<int>(st.controls[k]) - static_cast<int>(st.noise.value(a));
                    st.next[i] = std::clamp(y1, 0, n - 1);
                }
            }
        p.steps.push_back(std::move(st));
    }
    p.final_cost = decreasing(rng, static_cast<std::size_t>(n), 2.0);
    p.validate();
    return p;
}

TinyProblem random_arbitrary(std::uint64_t seed, const TinyShape& sh) {
    std::mt19937_64 rng(seed);
    TinyProblem p = skeleton(rng, sh);
    const auto n = static_cast<int>(p.states.size());
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int t = 0; t < (p.D + 1) * (p.M + 1); ++t) {
        TinyStep st;
        st.controls = random_controls(rng, sh.max_controls);
        st.noise = random_noise(rng, draw(rng, 1, sh.max_atoms));
        const std::size_t sz = static_cast<std::size_t>(n) * st.controls.size() * st.noise.size();
        for (std::size_t i = 0; i < sz; ++i) {
            st.cost.push_back(u(rng));
            st.next.push_back(draw(rng, 0, n - 1));
        }
        p.steps.push_back(std::move(st));
    }
    for (int y = 0; y < n; ++y) p.final_cost.push_back(u(rng));
    p.validate();
    return p;
}

}  // namespace twoscale::oracle
