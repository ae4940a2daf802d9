#include "twoscale/pipeline/pipeline.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "twoscale/core/serialize.hpp"
#include "twoscale/oracle/complexity.hpp"
#include "twoscale/oracle/suite.hpp"
#include "twoscale/policy/simulate.hpp"
#include "twoscale/slowscale/battery_bellman.hpp"
#include "twoscale/slowscale/value_seq.hpp"

namespace twoscale::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- config

void RunConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("config: " + m); };
    if (D < 0) fail("D must be >= 0");
    if (M < 1 || M > battery::kSlotsPerDay) fail("M must be in 1..48 (half-hour slots per day)");
    if (I < 1) fail("I must be >= 1");
    if (scheme != "trimester" && scheme != "custom") fail("scheme must be trimester or custom");
    if (h_step <= 0.0) fail("h_step must be positive");
    if (history_days < 1 || history_scenarios < 1) fail("history must be non-empty");
    if (k_netload < 1 || k_price < 1) fail("k must be >= 1");
    if (price_paths < k_price) fail("price_paths must be >= k_price");
    if (scenarios < 1) fail("scenarios must be >= 1");
    if (mode != "price" && mode != "resource" && mode != "both") fail("mode must be price, resource or both");
    if (threads < 0) fail("threads must be >= 0");
    try {
        battery.validate();
        grids.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (grids.capacity != battery.renewal_grid) fail("grids.capacity must equal battery.renewal_grid");
}

namespace {

json forecast_json(const battery::PriceForecast& f) {
    return {{"yearly", f.yearly}, {"sigma", f.sigma}, {"floor", f.floor}};
}

json synthetic_json(const battery::SyntheticNetload& s) {
    return {{"base_load", s.base_load}, {"evening_bump", s.evening_bump}, {"solar_peak", s.solar_peak},
            {"noise_sd", s.noise_sd}};
}

}  // namespace

json to_json(const RunConfig& c) {
    return {{"D", c.D},
            {"M", c.M},
            {"I", c.I},
            {"scheme", c.scheme},
            {"groups", c.groups},
            {"grids", twoscale::to_json(c.grids)},
            {"h_step", c.h_step},
            {"battery", battery::to_json(c.battery)},
            {"data",
             {{"netload_csv", c.netload_csv},
              {"history_days", c.history_days},
              {"history_scenarios", c.history_scenarios},
              {"synthetic", synthetic_json(c.synthetic)},
              {"k_netload", c.k_netload},
              {"price_forecast", forecast_json(c.price_forecast)},
              {"price_paths", c.price_paths},
              {"k_price", c.k_price}}},
            {"seed", c.seed},
            {"scenarios", c.scenarios},
            {"mode", c.mode},
            {"threads", c.threads},
            {"dump_trajectories", c.dump_trajectories}};
}

RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    try {
        c.D = j.value("D", c.D);
        c.M = j.value("M", c.M);
        c.I = j.value("I", c.I);
        c.scheme = j.value("scheme", c.scheme);
        if (j.contains("groups")) c.groups = j.at("groups").get<std::vector<std::vector<int>>>();
        if (j.contains("battery")) c.battery = battery::battery_config_from_json(j.at("battery"));
        // the capacity axis follows the renewal grid unless given
        c.grids.capacity = c.battery.renewal_grid;
        if (j.contains("grids")) {
            json g = j.at("grids");
            if (!g.contains("capacity")) g["capacity"] = c.battery.renewal_grid;
            c.grids = intraday_grids_from_json(g);
        }
        c.h_step = j.value("h_step", c.h_step);
        if (j.contains("data")) {
            const auto& d = j.at("data");
            c.netload_csv = d.value("netload_csv", c.netload_csv);
            c.history_days = d.value("history_days", c.history_days);
            c.history_scenarios = d.value("history_scenarios", c.history_scenarios);
            if (d.contains("synthetic")) {
                const auto& s = d.at("synthetic");
                c.synthetic.base_load = s.value("base_load", c.synthetic.base_load);
                c.synthetic.evening_bump = s.value("evening_bump", c.synthetic.evening_bump);
                c.synthetic.solar_peak = s.value("solar_peak", c.synthetic.solar_peak);
                c.synthetic.noise_sd = s.value("noise_sd", c.synthetic.noise_sd);
            }
            c.k_netload = d.value("k_netload", c.k_netload);
            if (d.contains("price_forecast")) {
                const auto& f = d.at("price_forecast");
                if (f.contains("yearly")) c.price_forecast.yearly = f.at("yearly").get<std::vector<double>>();
                c.price_forecast.sigma = f.value("sigma", c.price_forecast.sigma);
                c.price_forecast.floor = f.value("floor", c.price_forecast.floor);
            }
            c.price_paths = d.value("price_paths", c.price_paths);
            c.k_price = d.value("k_price", c.k_price);
        }
        c.seed = j.value("seed", c.seed);
        c.scenarios = j.value("scenarios", c.scenarios);
        c.mode = j.value("mode", c.mode);
        c.threads = j.value("threads", c.threads);
        c.dump_trajectories = j.value("dump_trajectories", c.dump_trajectories);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

RunConfig load_run_config(const fs::path& path) {
    if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
    json j;
    try {
        j = read_json_file(path);
    } catch (const std::exception& e) {
        throw ConfigError("config: cannot parse " + path.string() + ": " + e.what());
    }
    return run_config_from_json(j);
}

std::string config_hash(const RunConfig& c) {
    json j = to_json(c);
    j.erase("threads");
    j.erase("dump_trajectories");
    const std::string s = j.dump();  // object keys are sorted, so the text is canonical
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

PeriodicityClassMap make_classes(const RunConfig& c) {
    try {
        return build_periodicity_classes(
            c.D, c.I, c.scheme == "trimester" ? PeriodicityScheme::trimester : PeriodicityScheme::custom, c.groups);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

Stage stage_from_string(const std::string& s) {
    if (s == "fit") return Stage::fit;
    if (s == "intraday") return Stage::intraday;
    if (s == "bellman") return Stage::bellman;
    if (s == "simulate") return Stage::simulate;
    if (s == "report") return Stage::report;
    if (s == "verify") return Stage::verify;
    if (s == "complexity") return Stage::complexity;
    throw ConfigError("unknown stage " + s);
}

std::string to_string(Stage s) {
    switch (s) {
        case Stage::fit: return "fit";
        case Stage::intraday: return "intraday";
        case Stage::bellman: return "bellman";
        case Stage::simulate: return "simulate";
        case Stage::report: return "report";
        case Stage::verify: return "verify";
        case Stage::complexity: return "complexity";
    }
    return "?";
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const MissingDependency*>(&e)) return 3;
    if (dynamic_cast<const VerificationFailure*>(&e)) return 4;
    return 1;
}

// ---------------------------------------------------------------- artifacts

namespace {

struct Context {
    const RunConfig& cfg;
    const Options& opt;
    std::string hash;
    json manifest;
    json outputs = json::array();
    json timings = json::object();

    std::ostream& log() const { return opt.log ? *opt.log : std::cout; }
    fs::path dir(const std::string& sub) const { return opt.out / sub; }

    void wrote(const fs::path& p) { outputs.push_back(fs::relative(p, opt.out).generic_string()); }

    void require_stage(const std::string& stage, const std::string& what) const {
        if (!manifest.contains("stages") || !manifest["stages"].contains(stage))
            throw MissingDependency(what + " (run the '" + stage + "' stage first)");
        const std::string h = manifest["stages"][stage].value("config_hash", "");
        if (h != hash && !opt.force)
            throw ConfigError("config hash mismatch with the '" + stage + "' artifacts (" + h + " vs " + hash +
                              "); rerun that stage or pass --force");
    }

    void require_file(const fs::path& p, const std::string& what) const {
        if (!fs::exists(p)) throw MissingDependency(what + ": " + p.string() + " not found");
    }
};

json load_manifest(const fs::path& out) {
    const fs::path p = out / "manifest.json";
    if (!fs::exists(p)) return json{{"stages", json::object()}, {"metadata", json::object()}};
    return read_json_file(p);
}

std::string now_utc() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

bool wants(const RunConfig& c, const char* mode) { return c.mode == "both" || c.mode == mode; }

fs::path law_file(const fs::path& dir, int cls, int slot) {
    return dir / ("noise_class" + std::to_string(cls) + "_slot" + std::to_string(slot) + ".json");
}

battery::NetloadLaws read_netload_laws(const Context& cx, int n_classes) {
    battery::NetloadLaws laws;
    laws.by_class.resize(n_classes);
    for (int i = 1; i <= n_classes; ++i)
        for (int m = 0; m < cx.cfg.M; ++m) {
            const auto p = law_file(cx.dir("fit"), i, m);
            cx.require_file(p, "fitted netload laws missing");
            laws.by_class[i - 1].push_back(dist_from_json(read_json_file(p)));
        }
    return laws;
}

battery::PriceLaws read_price_laws(const Context& cx) {
    const auto p = cx.dir("fit") / "price_laws.json";
    cx.require_file(p, "fitted battery price laws missing");
    return battery::price_laws_from_json(read_json_file(p));
}

fs::path table_file(const Context& cx, char kind, int cls) {
    return cx.dir("intraday") / (std::string("intraday_") + kind + "_class" + std::to_string(cls) + ".json");
}
fs::path fast_file(const Context& cx, char kind, int cls) {
    return cx.dir("intraday") / (std::string("fast_") + kind + "_class" + std::to_string(cls) + ".bin");
}

std::vector<IntradayResourceTable> read_resource_tables(const Context& cx, int n_classes) {
    std::vector<IntradayResourceTable> out(n_classes);
    for (int i = 1; i <= n_classes; ++i) {
        cx.require_file(table_file(cx, 'R', i), "intraday tables missing");
        cx.require_file(fast_file(cx, 'R', i), "intraday tables missing");
        out[i - 1].cls = i;
        out[i - 1].table = grid_fn_from_json(read_json_file(table_file(cx, 'R', i)));
        out[i - 1].fast = read_fast_tables(fast_file(cx, 'R', i));
    }
    return out;
}

std::vector<IntradayPriceTable> read_price_tables(const Context& cx, int n_classes) {
    std::vector<IntradayPriceTable> out(n_classes);
    const std::size_t np = cx.cfg.grids.price.size();
    for (int i = 1; i <= n_classes; ++i) {
        cx.require_file(table_file(cx, 'P', i), "intraday tables missing");
        cx.require_file(fast_file(cx, 'P', i), "intraday tables missing");
        out[i - 1].cls = i;
        out[i - 1].table = grid_fn_from_json(read_json_file(table_file(cx, 'P', i)));
        auto flat = read_fast_tables(fast_file(cx, 'P', i));
        if (flat.size() % np != 0) throw MissingDependency("intraday price tables do not match the price grid");
        for (std::size_t k = 0; k < flat.size(); k += np)
            out[i - 1].fast.emplace_back(std::make_move_iterator(flat.begin() + static_cast<std::ptrdiff_t>(k)),
                                         std::make_move_iterator(flat.begin() + static_cast<std::ptrdiff_t>(k + np)));
    }
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- stages

void stage_fit(Context& cx) {
    const auto& c = cx.cfg;
    const auto t0 = std::chrono::steady_clock::now();
    const auto classes = make_classes(c);
    fs::create_directories(cx.dir("fit"));

    battery::ScenarioSet raw;
    if (c.netload_csv.empty()) {
        raw = battery::synthetic_netload(c.synthetic, c.history_days, c.history_scenarios, c.seed);
        const auto p = cx.dir("fit") / "history_netload.csv";
        battery::write_netload_csv(p, raw);
        cx.wrote(p);
    } else {
        raw = battery::read_scenarios_csv(c.netload_csv);
    }
    if (raw.n_slots < c.M) throw ConfigError("netload data has " + std::to_string(raw.n_slots) + " slots, M = " + std::to_string(c.M));
    if (raw.n_slots > c.M) {
        battery::ScenarioSet cut;
        cut.n_days = raw.n_days;
        cut.n_slots = c.M;
        for (const auto& row : raw.netload) {
            std::vector<double> r;
            for (int d = 0; d < raw.n_days; ++d)
                for (int m = 0; m < c.M; ++m) r.push_back(row[static_cast<std::size_t>(d * raw.n_slots + m)]);
            cut.netload.push_back(std::move(r));
        }
        raw = std::move(cut);
    }
    // history days are classified with the same scheme as the horizon
    PeriodicityClassMap hist;
    if (c.scheme == "trimester") {
        try {
            hist = build_periodicity_classes(raw.n_days - 1, c.I, PeriodicityScheme::trimester);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("history: ") + e.what());
        }
    } else {
        if (raw.n_days != c.D + 1) throw ConfigError("custom classes need a history covering days 0..D");
        hist = classes;
    }
    battery::NetloadLaws laws;
    try {
        laws = battery::fit_netload_distributions(raw, hist, c.k_netload, c.seed + 1);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    for (int i = 1; i <= laws.n_classes(); ++i)
        for (int m = 0; m < c.M; ++m) {
            const auto p = law_file(cx.dir("fit"), i, m);
            write_json_file(p, twoscale::to_json(laws.for_class(i)[m]));
            cx.wrote(p);
        }

    const auto paths = battery::gen_battery_price_scenarios(c.price_forecast, c.D + 1, c.price_paths, c.seed + 2);
    const auto prices = battery::fit_price_laws(paths, c.k_price, c.seed + 3);
    write_json_file(cx.dir("fit") / "price_laws.json", battery::to_json(prices));
    cx.wrote(cx.dir("fit") / "price_laws.json");
    write_json_file(cx.dir("fit") / "classes.json", json{{"class_of_day", classes.classes()}, {"I", classes.n_classes()}});
    cx.wrote(cx.dir("fit") / "classes.json");
    cx.timings["fit_seconds"] = seconds_since(t0);
    cx.log() << "fit: " << laws.n_classes() << " classes x " << c.M << " slots, k = " << c.k_netload << "; "
             << prices.by_day.size() << " daily price laws\n";
}

void stage_intraday(Context& cx) {
    const auto& c = cx.cfg;
    cx.require_stage("fit", "fitted laws missing");
    const auto laws = read_netload_laws(cx, c.I);
    fs::create_directories(cx.dir("intraday"));
    if (wants(c, "resource")) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto R = compute_resource_intraday_all(laws, c.battery, c.grids);
        cx.timings["intraday_resource_seconds"] = seconds_since(t0);
        for (const auto& t : R) {
            write_json_file(table_file(cx, 'R', t.cls), twoscale::to_json(t.table));
            write_fast_tables(fast_file(cx, 'R', t.cls), t.fast);
            cx.wrote(table_file(cx, 'R', t.cls));
            cx.wrote(fast_file(cx, 'R', t.cls));
        }
    }
    if (wants(c, "price")) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto P = compute_price_intraday_all(laws, c.battery, c.grids);
        cx.timings["intraday_price_seconds"] = seconds_since(t0);
        for (const auto& t : P) {
            write_json_file(table_file(cx, 'P', t.cls), twoscale::to_json(t.table));
            std::vector<FastTables> flat;
            for (const auto& row : t.fast) flat.insert(flat.end(), row.begin(), row.end());
            write_fast_tables(fast_file(cx, 'P', t.cls), flat);
            cx.wrote(table_file(cx, 'P', t.cls));
            cx.wrote(fast_file(cx, 'P', t.cls));
        }
    }
    cx.log() << "intraday: " << c.I << " classes, " << c.grids.capacity.size() << " capacities, "
             << c.grids.dh.size() << " dh points, " << c.grids.price.size() << " prices\n";
}

void stage_bellman(Context& cx) {
    const auto& c = cx.cfg;
    cx.require_stage("intraday", "intraday tables missing");
    const auto classes = make_classes(c);
    const auto prices = read_price_laws(cx);
    const Grid slow = battery_slow_grid(c.battery, c.h_step);
    const auto dir = cx.dir("bellman");
    fs::create_directories(dir);
    if (wants(c, "resource")) {
        const auto R = read_resource_tables(cx, c.I);
        const auto t0 = std::chrono::steady_clock::now();
        const auto V = resource_bellman_recursion(R, classes, prices, c.battery, slow);
        cx.timings["bellman_resource_seconds"] = seconds_since(t0);
        write_value_seq(dir, V);
        for (int d = 0; d <= c.D + 1; ++d) cx.wrote(dir / value_file_name(BoundKind::resource_upper, d));
        cx.log() << "bellman: upper bound at x0 = " << V.at(0).eval({0.0, 0.0}).value() << "\n";
    }
    if (wants(c, "price")) {
        const auto P = read_price_tables(cx, c.I);
        const auto t0 = std::chrono::steady_clock::now();
        const auto V = price_bellman_recursion(P, classes, prices, c.battery, slow);
        cx.timings["bellman_price_seconds"] = seconds_since(t0);
        write_value_seq(dir, V);
        for (int d = 0; d <= c.D + 1; ++d) cx.wrote(dir / value_file_name(BoundKind::price_lower, d));
        cx.log() << "bellman: lower bound at x0 = " << V.at(0).eval({0.0, 0.0}).value() << "\n";
    }
}

SlowValueSeq read_values(const Context& cx, BoundKind kind) {
    const auto p = cx.dir("bellman") / value_file_name(kind, 0);
    cx.require_file(p, "value functions missing");
    return read_value_seq(cx.dir("bellman"), kind, cx.cfg.D);
}

void stage_simulate(Context& cx) {
    const auto& c = cx.cfg;
    cx.require_stage("bellman", "value functions missing");
    const auto classes = make_classes(c);
    const auto laws = read_netload_laws(cx, c.I);
    const auto prices = read_price_laws(cx);
    const auto scen = battery::white_noise_resample(laws, classes, prices, c.scenarios, c.seed + 4);
    const auto dir = cx.dir("simulate");
    fs::create_directories(dir);

    std::vector<IntradayPriceTable> P;
    std::vector<IntradayResourceTable> R;
    SlowValueSeq VP, VR;
    policy::PolicyData data;
    data.cfg = &c.battery;
    data.grids = &c.grids;
    data.classes = &classes;
    data.prices = &prices;
    for (const char* mode : {"price", "resource"}) {
        if (!wants(c, mode)) continue;
        const auto m = policy::mode_from_string(mode);
        if (m == policy::Mode::price) {
            P = read_price_tables(cx, c.I);
            VP = read_values(cx, BoundKind::price_lower);
            data.price_tables = &P;
            data.price_values = &VP;
        } else {
            R = read_resource_tables(cx, c.I);
            VR = read_values(cx, BoundKind::resource_upper);
            data.resource_tables = &R;
            data.resource_values = &VR;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = policy::simulate_policy(scen, m, data);
        cx.timings[std::string("simulate_") + mode + "_seconds"] = seconds_since(t0);
        cx.timings[std::string("decision_time_us_") + mode] = res.summary.decision_us;
        const auto csv = dir / (std::string("simulation_") + mode + ".csv");
        const auto js = dir / (std::string("simulation_") + mode + ".json");
        policy::write_summary_csv(csv, res);
        auto sj = policy::summary_json(res);
        sj.erase("metadata");
        write_json_file(js, sj);
        cx.wrote(csv);
        cx.wrote(js);
        if (c.dump_trajectories) {
            const auto tp = dir / (std::string("trajectories_") + mode + ".csv");
            policy::write_trajectories_csv(tp, res);
            cx.wrote(tp);
        }
        cx.log() << "simulate " << mode << ": mean " << res.summary.mean << " +- " << res.summary.stderr_ << " over "
                 << res.summary.n << " scenarios, " << res.summary.violations << " admissibility violations\n";
    }
}

void stage_report(Context& cx) {
    const auto& c = cx.cfg;
    cx.require_stage("bellman", "value functions missing");
    if (c.mode != "both") throw ConfigError("report compares both bounds; run with mode = both");
    const auto VP = read_values(cx, BoundKind::price_lower);
    const auto VR = read_values(cx, BoundKind::resource_upper);
    const std::vector<double> x0{0.0, 0.0};
    const auto rep = check_sandwich(VP, VR, x0);

    // nonincreasing in h at fixed c, every day
    auto mono = [](const SlowValueSeq& s) {
        std::size_t bad = 0;
        for (const auto& f : s.days) {
            const std::size_t nh = f.grid().extent(0), nc = f.grid().extent(1);
            for (std::size_t ci = 0; ci < nc; ++ci)
                for (std::size_t i = 1; i < nh; ++i)
                    if (f[i * nc + ci] > f[(i - 1) * nc + ci] + 1e-9) ++bad;
        }
        return bad;
    };

    const auto dir = cx.dir("report");
    fs::create_directories(dir);
    const auto csv = dir / "bound_gaps.csv";
    {
        std::ofstream os(csv);
        os.precision(17);
        os << "day,lower_x0,upper_x0,gap_x0,max_rel_gap\n";
        for (std::size_t d = 0; d < rep.gap_at_x0.size(); ++d)
            os << d << ',' << rep.lower_at_x0[d] << ',' << rep.upper_at_x0[d] << ',' << rep.gap_at_x0[d] << ','
               << rep.max_rel_gap[d] << '\n';
    }
    cx.wrote(csv);
    double worst = 0.0;
    for (std::size_t d = 0; d + 1 < rep.max_rel_gap.size(); ++d) worst = std::max(worst, rep.max_rel_gap[d]);
    json j{{"lower_x0", rep.lower_at_x0.front()},
           {"upper_x0", rep.upper_at_x0.front()},
           {"gap_x0", rep.gap_at_x0.front()},
           {"max_rel_gap", worst},
           {"sandwich_violations", rep.violations},
           {"worst_violation", rep.worst_violation},
           {"monotonicity_violations", {{"price", mono(VP)}, {"resource", mono(VR)}}}};
    for (const char* mode : {"price", "resource"}) {
        const auto p = cx.dir("simulate") / (std::string("simulation_") + mode + ".json");
        if (fs::exists(p)) j["simulation"][mode] = read_json_file(p);
    }
    write_json_file(dir / "bound_report.json", j);
    cx.wrote(dir / "bound_report.json");
    cx.log() << std::setprecision(8) << "report: lower " << j["lower_x0"].get<double>() << " <= upper "
             << j["upper_x0"].get<double>() << ", gap at x0 " << 100.0 * rep.gap_at_x0.front()
             << "%, largest gap " << 100.0 * worst << "%, " << rep.violations << " sandwich violations\n";
}

void stage_verify(Context& cx) {
    const auto results = oracle::run_oracle_suite(50, cx.cfg.seed);
    json rows = json::array();
    bool ok = true;
    for (const auto& r : results) {
        cx.log() << std::left << std::setw(10) << r.name << (r.passed() ? " PASS" : " FAIL") << "  instances "
                 << r.instances << "  max error " << r.max_error << "  seeds " << cx.cfg.seed << ".."
                 << cx.cfg.seed + r.instances - 1;
        if (!r.passed()) {
            cx.log() << "  failing:";
            for (auto s : r.failing_seeds) cx.log() << ' ' << s;
        }
        cx.log() << '\n';
        ok = ok && r.passed();
        rows.push_back({{"property", r.name}, {"instances", r.instances}, {"failures", r.failures},
                        {"failing_seeds", r.failing_seeds}, {"max_error", r.max_error}});
        cx.timings["verify_" + r.name + "_seconds"] = r.seconds;
    }
    fs::create_directories(cx.dir("verify"));
    write_json_file(cx.dir("verify") / "verify.json", rows);
    cx.wrote(cx.dir("verify") / "verify.json");
    if (!ok) throw VerificationFailure("oracle verification failed");
}

void stage_complexity(Context& cx) {
    const auto e = oracle::complexity_estimate(cx.cfg.D + 1, cx.cfg.M, cx.cfg.I);
    cx.log() << "complexity (D = " << cx.cfg.D + 1 << ", M = " << cx.cfg.M << ", I = " << cx.cfg.I << "): R^R = "
             << e.ratio_R << ", R^P = " << e.ratio_P << "\n";
}

}  // namespace

void run_stage(Stage stage, const RunConfig& cfg, const Options& opt) {
    cfg.validate();
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    fs::create_directories(opt.out);
    Context cx{cfg, opt, config_hash(cfg), load_manifest(opt.out)};
    const auto t0 = std::chrono::steady_clock::now();
    switch (stage) {
        case Stage::fit: stage_fit(cx); break;
        case Stage::intraday: stage_intraday(cx); break;
        case Stage::bellman: stage_bellman(cx); break;
        case Stage::simulate: stage_simulate(cx); break;
        case Stage::report: stage_report(cx); break;
        case Stage::verify: stage_verify(cx); break;
        case Stage::complexity: stage_complexity(cx); return;  // nothing to record
    }
    const std::string name = to_string(stage);
    cx.manifest["config_hash"] = cx.hash;
    cx.manifest["config"] = to_json(cfg);
    cx.manifest["stages"][name] = {{"config_hash", cx.hash}, {"outputs", cx.outputs}};
    json meta = cx.timings;
    meta["finished_at"] = now_utc();
    meta["seconds"] = seconds_since(t0);
    meta["threads"] = omp_get_max_threads();
    cx.manifest["metadata"][name] = meta;
    write_json_file(opt.out / "manifest.json", cx.manifest);
}

void run_all(const RunConfig& cfg, const Options& opt) {
    for (Stage s : {Stage::fit, Stage::intraday, Stage::bellman, Stage::simulate})
        run_stage(s, cfg, opt);
    if (cfg.mode == "both") run_stage(Stage::report, cfg, opt);
}

}  // namespace twoscale::pipeline
