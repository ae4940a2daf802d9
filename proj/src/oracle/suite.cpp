#include "twoscale/oracle/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "twoscale/oracle/tiny.hpp"

namespace twoscale::oracle {

namespace {

struct Check {
    double err = 0.0;
    bool ok = true;
    void add(double violation, double tol) {
        err = std::max(err, violation);
        if (violation > tol || std::isnan(violation)) ok = false;
    }
};

double diff(double a, double b) {
    if (a == b) return 0.0;  // equal infinities
    return std::abs(a - b);
}

template <typename F>
PropertyResult run(const std::string& name, std::size_t n, std::uint64_t seed0, double tol, F per_instance) {
    PropertyResult r;
    r.name = name;
    r.instances = n;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Check> checks(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
        per_instance(seed0 + static_cast<std::uint64_t>(i), checks[static_cast<std::size_t>(i)], tol);
    for (std::size_t i = 0; i < n; ++i) {
        r.max_error = std::max(r.max_error, checks[i].err);
        if (!checks[i].ok) {
            ++r.failures;
            r.failing_seeds.push_back(seed0 + i);
        }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace

std::vector<PropertyResult> run_oracle_suite(std::size_t n, std::uint64_t seed0, double tol) {
    std::vector<PropertyResult> out;
    out.push_back(run("tree", n, seed0, tol, [](std::uint64_t seed, Check& c, double t) {
        for (bool ineq : {false, true}) {
            auto p = random_arbitrary(seed);
            p.inequality = ineq;
            const auto flat = flat_dp_solve(p);
            for (std::size_t y = 0; y < p.states.size(); ++y) c.add(diff(enumerate_tree(p, y), flat[0][y]), t);
        }
    }));
    out.push_back(run("blocks", n, seed0, tol, [](std::uint64_t seed, Check& c, double t) {
        for (bool ineq : {false, true}) {
            auto p = random_arbitrary(seed);
            p.inequality = ineq;
            const auto flat = flat_dp_solve(p);
            const auto blocks = block_recursion(to_two_scale(p), ineq);
            for (int d = 0; d <= p.D + 1; ++d)
                for (std::size_t y = 0; y < p.states.size(); ++y) c.add(diff(blocks.at(d)[y], flat[d][y]), t);
        }
    }));
    out.push_back(run("monotone", n, seed0, tol, [](std::uint64_t seed, Check& c, double t) {
        auto m = random_monotone(seed);
        const auto eq = flat_dp_solve(m);
        m.inequality = true;
        const auto in = flat_dp_solve(m);
        for (int d = 0; d <= m.D + 1; ++d)
            for (std::size_t y = 0; y < m.states.size(); ++y) c.add(diff(eq[d][y], in[d][y]), t);
        auto a = random_arbitrary(seed);
        const auto aeq = flat_dp_solve(a);
        a.inequality = true;
        const auto ain = flat_dp_solve(a);
        for (std::size_t y = 0; y < a.states.size(); ++y) c.add(std::max(0.0, ain[0][y] - aeq[0][y]), t);
    }));
    out.push_back(run("sandwich", n, seed0, tol, [](std::uint64_t seed, Check& c, double t) {
        auto p = random_monotone(seed);
        p.inequality = true;
        const auto exact = flat_dp_solve(p);
        const auto tp = to_two_scale(p);
        const auto up = generic_resource_recursion(tp);
        const auto lo = generic_price_recursion(tp, Grid::uniform(-6.0, 0.0, 25));
        for (int d = 0; d <= p.D + 1; ++d)
            for (std::size_t y = 0; y < p.states.size(); ++y) {
                c.add(std::max(0.0, lo.at(d)[y] - exact[d][y]), t);
                c.add(std::max(0.0, exact[d][y] - up.at(d)[y]), t);
            }
    }));
    return out;
}

}  // namespace twoscale::oracle
