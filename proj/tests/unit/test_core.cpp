#include <doctest.h>

#include <array>
#include <limits>
#include <sstream>

#include "twoscale/core/conjugate.hpp"
#include "twoscale/core/discrete_dist.hpp"
#include "twoscale/core/grid_value_fn.hpp"
#include "twoscale/core/serialize.hpp"
#include "twoscale/core/time_index.hpp"

using namespace twoscale;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("lexicographic time order") {
    CHECK(lex_compare({3, 5}, {4, 0}) == std::strong_ordering::less);
    CHECK(lex_compare({2, 7}, {2, 7}) == std::strong_ordering::equal);
    CHECK(lex_compare({5, 48}, {5, 3}) == std::strong_ordering::greater);
    CHECK(is_valid({3, 48}, 10, 47));
    CHECK_FALSE(is_valid({11, 1}, 10, 47));
    CHECK(is_valid({11, 0}, 10, 47));
    CHECK_FALSE(is_valid({0, 49}, 10, 47));
}

TEST_CASE("lower addition") {
    CHECK(low_add(inf, -inf) == -inf);
    CHECK(low_add(-inf, inf) == -inf);
    CHECK(low_add(3.5, 2.5) == 6.0);
    CHECK(low_add(inf, 7.0) == inf);
    CHECK(low_add(inf, inf) == inf);
    CHECK((ExtReal::plus_inf() + ExtReal::minus_inf()).is_minus_inf());

    // commutative and associative over the sign classes {-inf, <0, 0, >0, +inf}
    const std::array<double, 5> cls{-inf, -2.0, 0.0, 3.0, inf};
    for (double a : cls)
        for (double b : cls) {
            CHECK(low_add(a, b) == low_add(b, a));
            for (double c : cls) CHECK(low_add(low_add(a, b), c) == low_add(a, low_add(b, c)));
        }
}

TEST_CASE("grid construction and lookup") {
    CHECK_THROWS(Grid(std::vector<std::vector<double>>{}));
    CHECK_THROWS(Grid({{1.0, 1.0}}));
    CHECK_THROWS(Grid(std::vector<std::vector<double>>{std::vector<double>{}}));
    Grid g({{0.0, 1.0, 2.0}, {10.0, 20.0}});
    CHECK(g.size() == 6);
    CHECK(g.point(3) == std::vector<double>{1.0, 20.0});
    auto b = g.bracket(0, 1.5);
    CHECK(b.lo == 1);
    CHECK(b.t == doctest::Approx(0.5));
    b = g.bracket(0, 5.0);
    CHECK(b.lo == 1);
    CHECK(b.t == 1.0);
    CHECK(g.nearest(0, 0.5) == 0);
    CHECK(g.nearest(0, 0.51) == 1);
    CHECK(g.find(1, 20.0) == 1);
    CHECK(g.find(1, 15.0) == Grid::npos);
    Grid u = Grid::uniform(0.0, 2400.0, 61);
    CHECK(u.axis(0)[10] == doctest::Approx(400.0));
    CHECK(u.find(0, 400.0) == 10);
}

TEST_CASE("grid function evaluation") {
    const Grid g({{0.0, 1.0, 2.0}});
    GridValueFn f(g, {0.0, 1.0, 2.0}, Interp::nearest);
    CHECK(f.eval({1.0}).value() == 1.0);
    CHECK(f.eval({0.5}).value() == 0.0);  // tie goes to the smaller index
    f.set_mode(Interp::multilinear);
    CHECK(f.eval({0.5}).value() == doctest::Approx(0.5));
    CHECK(f.eval({-3.0}).value() == 0.0);  // clamped
    CHECK_THROWS(f.eval({0.5, 0.5}));

    GridValueFn h(g, {inf, 0.0, 1.0});
    CHECK(h.eval({0.5}).is_plus_inf());
    CHECK(h.eval({1.0}).value() == 0.0);
    CHECK(h.eval({1.5}).value() == doctest::Approx(0.5));

    auto bil = GridValueFn::tabulate(Grid({{0.0, 1.0}, {0.0, 2.0}}),
                                     [](std::span<const double> x) { return 3.0 * x[0] - x[1] + 1.0; });
    CHECK(bil.eval({0.25, 1.5}).value() == doctest::Approx(3.0 * 0.25 - 1.5 + 1.0));
}

TEST_CASE("discrete laws and expectation") {
    CHECK_THROWS(DiscreteDist({1.0, 2.0}, {0.5, 0.6}));
    CHECK_THROWS(DiscreteDist({1.0, 2.0}, {1.0}));
    CHECK_THROWS(DiscreteDist({1.0}, {-0.0 - 1.0}));
    const DiscreteDist d({1.0, 3.0}, {0.5, 0.5});
    auto id = [](std::span<const double> s) { return ExtReal(s[0]); };
    CHECK(expectation(d, id).value() == 2.0);
    CHECK(expectation(DiscreteDist::dirac(0.0), [](auto) { return ExtReal::plus_inf(); }).is_plus_inf());
    const DiscreteDist q({7.0, 9.0}, {0.25, 0.75});
    CHECK(expectation(q, [](std::span<const double> s) { return ExtReal(s[0] == 7.0 ? 4.0 : 0.0); }).value() == 1.0);
    // zero-probability atoms are skipped even when the integrand is infinite
    const DiscreteDist z({0.0, 1.0}, {0.0, 1.0});
    CHECK(expectation(z, [](std::span<const double> s) { return s[0] == 0.0 ? ExtReal::minus_inf() : ExtReal(2.0); })
              .value() == 2.0);

    // linearity for finite integrands
    const DiscreteDist r({-1.0, 0.5, 4.0}, {0.2, 0.3, 0.5});
    auto f = [](std::span<const double> s) { return ExtReal(s[0] * s[0]); };
    auto g = [](std::span<const double> s) { return ExtReal(3.0 - s[0]); };
    const double lhs =
        expectation(r, [&](std::span<const double> s) { return ExtReal(2.0 * f(s).value() - 0.5 * g(s).value()); })
            .value();
    CHECK(lhs == doctest::Approx(2.0 * expectation(r, f).value() - 0.5 * expectation(r, g).value()).epsilon(1e-12));
}

TEST_CASE("discrete Fenchel conjugate") {
    const Grid states({{0.0, 1.0, 2.0}});
    const Grid prices({{-1.0, 0.0, 1.0}});
    const auto c = fenchel_conjugate(GridValueFn(states, 0.0), prices);
    CHECK(c[0] == 0.0);
    CHECK(c[1] == 0.0);
    CHECK(c[2] == 2.0);

    const GridValueFn sq(Grid({{-1.0, 0.0, 1.0}}), {1.0, 0.0, 1.0});
    const std::array<double, 1> one{1.0};
    CHECK(conjugate_at(sq, one) == 0.0);
    CHECK(conjugate_at(GridValueFn(states, inf), one) == -inf);
    CHECK_THROWS(fenchel_conjugate(sq, Grid({{0.0}, {1.0}})));

    // Fenchel-Young, monotonicity in f, and midpoint convexity
    const GridValueFn f(states, {3.0, -1.0, 0.5});
    const GridValueFn g(states, {4.0, 0.0, inf});
    const Grid pg = Grid::uniform(-2.0, 2.0, 9);
    const auto fc = fenchel_conjugate(f, pg);
    const auto gc = fenchel_conjugate(g, pg);
    for (std::size_t j = 0; j < pg.size(); ++j) {
        const double p = pg.axis(0)[j];
        CHECK(fc[j] >= gc[j]);
        for (std::size_t i = 0; i < states.size(); ++i) CHECK(low_add(f[i], fc[j]) >= p * states.axis(0)[i] - 1e-12);
        if (j >= 1 && j + 1 < pg.size()) CHECK(fc[j] <= 0.5 * (fc[j - 1] + fc[j + 1]) + 1e-12);
    }
}

TEST_CASE("serialization round trips") {
    const GridValueFn f(Grid({{0.0, 1.5}, {-1.0, 0.0, 2.0}}), {0.1, inf, -inf, 3.0, 1e300, -0.0}, Interp::nearest);
    const json j = to_json(f);
    CHECK(j["values"][1] == "inf");
    CHECK(j["values"][2] == "-inf");
    CHECK(grid_fn_from_json(json::parse(j.dump())) == f);

    std::stringstream ss;
    write_binary(ss, f);
    CHECK(read_binary(ss) == f);
    std::stringstream bad("XXXX");
    CHECK_THROWS(read_binary(bad));

    const DiscreteDist d({1.0, 2.0, 4.0}, {0.25, 0.25, 0.5});
    CHECK(dist_from_json(to_json(d)) == d);
}
