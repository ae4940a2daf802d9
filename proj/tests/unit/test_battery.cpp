#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "twoscale/battery/data.hpp"
#include "twoscale/battery/model.hpp"
#include "twoscale/core/serialize.hpp"

using namespace twoscale;
using namespace twoscale::battery;

TEST_CASE("tariff windows") {
    const Tariff t = Tariff::time_of_use();
    CHECK(t.rate(46) == 0.0255);
    CHECK(t.rate(24) == 0.0644);
    CHECK(t.rate(36) == 0.2485);
    CHECK(t.rate(0) == 0.0255);
    CHECK(t.rate(13) == 0.0255);
    CHECK(t.rate(14) == 0.0644);
    CHECK(t.rate(33) == 0.0644);
    CHECK(t.rate(43) == 0.2485);
    CHECK(t.rate(44) == 0.0255);
    CHECK_THROWS_AS(t.rate(48), std::out_of_range);
    CHECK_THROWS_AS(t.rate(-1), std::out_of_range);
    // 18 off-peak, 20 shoulder, 10 peak half hours
    const double sum = std::accumulate(t.rates().begin(), t.rates().end(), 0.0);
    CHECK(sum == doctest::Approx(2.0 * (9 * 0.0255 + 10 * 0.0644 + 5 * 0.2485)).epsilon(1e-12));
    CHECK(tariff_rate(36) == 0.2485);
}

TEST_CASE("fast and renewal dynamics") {
    BatteryConfig cfg;
    cfg.rho_c = 1.0;
    cfg.rho_d = 1.0;
    CHECK(fast_dynamics(cfg, {0, 10, 100}, 2.0) == BatteryState{2, 8, 100});
    CHECK(fast_dynamics(cfg, {5, 10, 100}, -2.0) == BatteryState{3, 8, 100});
    CHECK(fast_dynamics(cfg, {5, 10, 100}, 0.0) == BatteryState{5, 10, 100});

    BatteryConfig def;
    const auto x = fast_dynamics(def, {0, 10, 100}, 2.0);
    CHECK(x.s == doctest::Approx(1.9));
    CHECK(x.h == 8.0);

    CHECK(renewal_dynamics(def, {3, 8, 100}, 100) == BatteryState{0, 400, 100});
    CHECK(renewal_dynamics(def, {3, 8, 100}, 0) == BatteryState{3, 8, 100});
    CHECK(renewal_dynamics(def, {3, 8, 100}, 1500) == BatteryState{0, 6000, 1500});
}

TEST_CASE("stage cost") {
    const Tariff t;
    CHECK(stage_cost(t, 0.0, 1.0, 36) == 0.2485);
    CHECK(stage_cost(t, 0.0, -5.0, 36) == 0.0);
    CHECK(stage_cost(t, -1.0, 1.0, 2) == 0.0);
    CHECK(stage_cost(t, 2.0, 1.0, 2) == doctest::Approx(3 * 0.0255));
}

TEST_CASE("config validation and admissibility") {
    BatteryConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.health_cap(100) == 400);
    CHECK(cfg.soc_cap(100) == doctest::Approx(80));
    CHECK(admissible(cfg, {0, 400, 100}));
    CHECK_FALSE(admissible(cfg, {81, 400, 100}));
    CHECK_FALSE(admissible(cfg, {0, 401, 100}));
    CHECK_FALSE(admissible(cfg, {0, 0, 1600}));

    auto bad = cfg;
    bad.rho_c = 1.2;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.renewal_grid.push_back(2000);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    cfg.cycles_by_capacity[200] = 6;
    cfg.final_cost = FinalCost::health_deficit;
    cfg.final_cost_weight = 0.1;
    const auto back = battery_config_from_json(to_json(cfg));
    CHECK(back.n_cycles(200) == 6);
    CHECK(back.n_cycles(300) == 4);
    CHECK(back.final_cost_at(5000, 1500) == doctest::Approx(100.0));
    CHECK(to_json(back) == to_json(cfg));
}

TEST_CASE("k-means") {
    SUBCASE("two exact clusters") {
        const auto r = kmeans_1d({0, 0, 10, 10}, 2, 7);
        REQUIRE(r.centers.size() == 2);
        CHECK(r.centers[0] == 0.0);
        CHECK(r.centers[1] == 10.0);
        CHECK(r.shares[0] == 0.5);
        CHECK(r.shares[1] == 0.5);
    }
    SUBCASE("k = 1 is the mean") {
        const auto law = kmeans_law({1, 2, 3, 10}, 1, 3);
        REQUIRE(law.size() == 1);
        CHECK(law.value(0) == doctest::Approx(4.0));
        CHECK(law.prob(0) == 1.0);
    }
    SUBCASE("duplicates merge") {
        const auto r = kmeans_1d({5, 5, 5, 5}, 3, 1);
        CHECK(r.centers.size() == 1);
        CHECK(r.shares[0] == 1.0);
    }
    SUBCASE("deterministic, mean preserving") {
        std::vector<double> data;
        auto rng = scenario_rng(11, 0);
        std::normal_distribution<double> z(0, 1);
        for (int i = 0; i < 500; ++i) data.push_back(z(rng));
        const auto a = kmeans_law(data, 10, 5);
        const auto b = kmeans_law(data, 10, 5);
        CHECK(to_json(a) == to_json(b));
        CHECK(a.size() == 10);
        const double mean = std::accumulate(data.begin(), data.end(), 0.0) / 500.0;
        CHECK(a.mean() == doctest::Approx(mean).epsilon(1e-9));
    }
    CHECK_THROWS_AS(kmeans_1d({1.0}, 2, 0), std::invalid_argument);
}

TEST_CASE("netload fitting") {
    const auto raw = synthetic_netload({}, 365, 2, 42);
    CHECK(raw.netload.size() == 2);
    CHECK(raw.netload[0].size() == 365u * 48u);
    const auto classes = build_periodicity_classes(364, 4, PeriodicityScheme::trimester);
    const auto laws = fit_netload_distributions(raw, classes, 10, 1);
    CHECK(laws.n_classes() == 4);
    CHECK(laws.for_class(3).size() == 48);
    CHECK(laws.for_class(1)[0].size() == 10);
    // summer (class 3) midday is sunnier than winter (class 1)
    CHECK(laws.for_class(3)[26].mean() < laws.for_class(1)[26].mean());

    auto tiny = raw;
    tiny.n_days = 1;
    for (auto& row : tiny.netload) row.resize(48);
    const auto one = build_periodicity_classes(0, 1, PeriodicityScheme::trimester);
    try {
        fit_netload_distributions(tiny, one, 3, 0);
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("class 1, slot 0") != std::string::npos);
    }
}

TEST_CASE("battery price scenarios") {
    PriceForecast f;
    CHECK(f.at_day(0) == 0.32);
    CHECK(f.at_day(365) == doctest::Approx(0.26));
    CHECK(f.at_day(10000) == 0.17);
    const auto a = gen_battery_price_scenarios(f, 400, 20, 9);
    const auto b = gen_battery_price_scenarios(f, 400, 20, 9);
    CHECK(a == b);
    for (const auto& path : a)
        for (double p : path) CHECK(p >= f.floor);
    f.sigma = 0.0;
    const auto flat = gen_battery_price_scenarios(f, 3, 2, 1);
    CHECK(flat[1][0] == 0.32);

    const auto laws = fit_price_laws(a, 5, 2);
    CHECK(laws.by_day.size() == 400);
    CHECK(laws.at(0).size() == 5);
}

TEST_CASE("white noise resample and csv round trip") {
    const auto raw = synthetic_netload({}, 365, 1, 3);
    const auto classes = build_periodicity_classes(9, 1, PeriodicityScheme::trimester);
    const auto laws = fit_netload_distributions(raw, build_periodicity_classes(364, 1, PeriodicityScheme::trimester), 4, 0);
    const auto prices = fit_price_laws(gen_battery_price_scenarios({}, 10, 30, 1), 3, 0);
    const auto s = white_noise_resample(laws, classes, prices, 3, 77);
    CHECK_NOTHROW(s.validate());
    CHECK(s.netload.size() == 3);
    CHECK(s.price[2].size() == 10);
    // every draw is an atom of its law
    const auto& law = laws.for_class(1)[5];
    bool found = false;
    for (std::size_t a = 0; a < law.size(); ++a) found = found || law.value(a) == s.load(1, 4, 5);
    CHECK(found);

    const auto dir = std::filesystem::temp_directory_path() / "twoscale_csv_test";
    std::filesystem::create_directories(dir);
    write_netload_csv(dir / "n.csv", s);
    write_price_csv(dir / "p.csv", s);
    const auto back = read_scenarios_csv(dir / "n.csv", dir / "p.csv");
    CHECK(back.netload == s.netload);
    CHECK(back.price == s.price);
    std::filesystem::remove_all(dir);
}
