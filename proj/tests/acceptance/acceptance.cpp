// Acceptance run: one PASS/FAIL line per criterion.
#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "twoscale/core/serialize.hpp"
#include "twoscale/intraday/battery_intraday.hpp"
#include "twoscale/oracle/complexity.hpp"
#include "twoscale/oracle/suite.hpp"
#include "twoscale/pipeline/pipeline.hpp"

using namespace twoscale;
namespace fs = std::filesystem;

namespace {

struct Line {
    int id;
    bool pass;
    std::string text;
};

std::vector<Line> lines;

void report(int id, bool pass, const std::string& text) {
    lines.push_back({id, pass, text});
    std::cout << "criterion " << std::setw(2) << id << (pass ? "  PASS  " : "  FAIL  ") << text << std::endl;
}

double secs(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

std::string read_all(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream is(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::vector<double> split_numbers(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string c;
    while (std::getline(ss, c, ';'))
        if (!c.empty()) out.push_back(std::stod(c));
    return out;
}

// Runs the pipeline into `out` unless a finished run with the same config is there.
double desk_run(const pipeline::RunConfig& cfg, const fs::path& out, bool fresh) {
    const auto manifest = out / "manifest.json";
    if (!fresh && fs::exists(manifest)) {
        const auto m = read_json_file(manifest);
        if (m.value("config_hash", "") == pipeline::config_hash(cfg) && m["stages"].contains("report")) return 0.0;
    }
    fs::remove_all(out);
    std::ostringstream sink;
    pipeline::Options opt;
    opt.out = out;
    opt.log = &sink;
    const auto t0 = std::chrono::steady_clock::now();
    pipeline::run_all(cfg, opt);
    return secs(t0);
}

void oracle_criteria(const std::set<int>& want, std::uint64_t seed) {
    if (!(want.count(1) || want.count(2) || want.count(3) || want.count(4))) return;
    const auto res = oracle::run_oracle_suite(50, seed);
    std::map<std::string, const oracle::PropertyResult*> by;
    for (const auto& r : res) by[r.name] = &r;
    auto text = [](const oracle::PropertyResult& r, const std::string& what) {
        std::string t = what + ": " + std::to_string(r.instances - r.failures) + "/" + std::to_string(r.instances) +
                        " instances, max error " + fmt(r.max_error, 3) + ", " + fmt(r.seconds, 3) + " s";
        if (!r.passed()) {
            t += ", failing seeds";
            for (auto s : r.failing_seeds) t += " " + std::to_string(s);
        }
        return t;
    };
    if (want.count(1)) {
        const auto& r = *by["tree"];
        report(1, r.passed() && r.seconds < 60.0, text(r, "flat DP = tree optimization"));
    }
    if (want.count(2)) report(2, by["blocks"]->passed(), text(*by["blocks"], "block recursion = flat DP"));
    if (want.count(3)) report(3, by["monotone"]->passed(), text(*by["monotone"], "equality = inequality (monotone), <= (arbitrary)"));
    if (want.count(4)) report(4, by["sandwich"]->passed(), text(*by["sandwich"], "price <= exact <= resource"));
}

void periodicity_criterion(const pipeline::RunConfig& cfg, const fs::path& run) {
    // days 0 and 365 share a trimester class; compute their tables separately
    const auto classes = pipeline::make_classes(cfg);
    const int d1 = 0, d2 = std::min(cfg.D, 365);
    if (classes.class_of(d1) != classes.class_of(d2)) {
        report(5, false, "days " + std::to_string(d1) + " and " + std::to_string(d2) + " are not in the same class");
        return;
    }
    std::vector<DiscreteDist> laws;
    for (int m = 0; m < cfg.M; ++m)
        laws.push_back(dist_from_json(read_json_file(run / "fit" /
                                                     ("noise_class" + std::to_string(classes.class_of(d1)) + "_slot" +
                                                      std::to_string(m) + ".json"))));
    auto bytes = [&](int threads) {
        omp_set_num_threads(threads);
        battery::NetloadLaws nl;
        nl.by_class = {laws};
        const auto R = compute_resource_intraday_all(nl, cfg.battery, cfg.grids);
        const auto P = compute_price_intraday_all(nl, cfg.battery, cfg.grids);
        std::ostringstream os;
        write_binary(os, R[0].table);
        write_binary(os, P[0].table);
        for (const auto& f : R[0].fast)
            for (const auto& v : f) write_binary(os, v);
        return os.str();
    };
    const int hw = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    const auto a = bytes(1);
    const auto b = bytes(std::max(2, hw));
    omp_set_num_threads(hw);
    report(5, a == b && !a.empty(),
           "day " + std::to_string(d1) + " vs day " + std::to_string(d2) + " (class " +
               std::to_string(classes.class_of(d1)) + "): " + std::to_string(a.size()) + " bytes, " +
               (a == b ? "identical" : "different"));
}

void desk_criteria(const std::set<int>& want, const pipeline::RunConfig& cfg, const fs::path& run) {
    const auto rep = read_json_file(run / "report" / "bound_report.json");
    if (want.count(6)) {
        const auto p = rep["monotonicity_violations"]["price"].get<std::size_t>();
        const auto r = rep["monotonicity_violations"]["resource"].get<std::size_t>();
        report(6, p == 0 && r == 0,
               "nonincreasing in h over " + std::to_string(cfg.D + 2) + " days: " + std::to_string(p) +
                   " price and " + std::to_string(r) + " resource violations");
    }
    if (want.count(7)) {
        const double gap = rep["gap_x0"].get<double>();
        const auto viol = rep["sandwich_violations"].get<std::size_t>();
        report(7, viol == 0 && gap <= 0.15 && rep["lower_x0"].get<double>() <= rep["upper_x0"].get<double>(),
               "lower " + fmt(rep["lower_x0"].get<double>(), 8) + " <= upper " + fmt(rep["upper_x0"].get<double>(), 8) +
                   ", gap at x0 " + fmt(100 * gap) + "% (<= 15%), largest gap " +
                   fmt(100 * rep["max_rel_gap"].get<double>()) + "%, " + std::to_string(viol) + " grid violations");
    }
    if (want.count(8)) {
        const double lower = rep["lower_x0"].get<double>();
        bool ok = true;
        std::string text;
        for (const char* mode : {"price", "resource"}) {
            const auto s = read_json_file(run / "simulate" / (std::string("simulation_") + mode + ".json"));
            const double mean = s["mean_cost"].get<double>(), se = s["stderr"].get<double>();
            std::size_t bad = s["admissibility_violations"].get<std::size_t>();
            std::size_t renewals = 0, post = 0, mono = 0;
            const auto traj = read_csv(run / "simulate" / (std::string("trajectories_") + mode + ".csv"));
            std::map<std::pair<int, int>, std::array<double, 3>> at;
            for (const auto& row : traj) at[{std::stoi(row[0]), std::stoi(row[1])}] = {std::stod(row[2]), std::stod(row[3]), std::stod(row[4])};
            for (const auto& [key, x] : at) {
                const double cap_s = cfg.battery.soc_cap(x[2]), cap_h = cfg.battery.health_cap(x[2]);
                if (x[0] < -1e-6 || x[0] > cap_s + 1e-6 || x[1] < -1e-6 || x[1] > cap_h + 1e-6) ++bad;
            }
            for (const auto& row : read_csv(run / "simulate" / (std::string("simulation_") + mode + ".csv"))) {
                const int k = std::stoi(row[0]);
                const auto days = split_numbers(row.size() > 2 ? row[2] : "");
                const auto sizes = split_numbers(row.size() > 3 ? row[3] : "");
                std::set<int> renewal_days;
                for (std::size_t i = 0; i < days.size(); ++i) {
                    const int d = static_cast<int>(days[i]);
                    renewal_days.insert(d);
                    ++renewals;
                    const auto& x = at.at({k, d + 1});
                    if (!(x[0] == 0.0 && x[1] == cfg.battery.health_cap(sizes[i]) && x[2] == sizes[i])) ++post;
                }
                for (int d = 0; d <= cfg.D; ++d)
                    if (!renewal_days.count(d) && at.at({k, d + 1})[1] > at.at({k, d})[1] + 1e-9) ++mono;
            }
            const bool m_ok = mean >= lower - 3 * se && bad == 0 && post == 0 && mono == 0;
            ok = ok && m_ok;
            text += std::string(text.empty() ? "" : "; ") + mode + " mean " + fmt(mean, 8) + " +- " + fmt(se, 3) +
                    " vs lower " + fmt(lower, 8) + ", " + std::to_string(renewals) + " renewals, " +
                    std::to_string(bad + post + mono) + " invariant failures";
        }
        report(8, ok, text);
    }
}

void complexity_criterion() {
    const auto a = oracle::complexity_estimate(7300, 48, 4);
    const auto b = oracle::complexity_estimate(1040, 336, 4);
    const double ea = std::abs(a.ratio_R * 50.0 - 1.0), eb = std::abs(b.ratio_R * 150.0 - 1.0);
    report(9, ea <= 0.1 && eb <= 0.1,
           "R^R(7300,48,4) = 1/" + fmt(1 / a.ratio_R) + " vs 1/50, R^R(1040,336,4) = 1/" + fmt(1 / b.ratio_R) +
               " vs 1/150");
}

void determinism_criterion(const pipeline::RunConfig& cfg, const fs::path& out) {
    const auto a = out / "determinism_a", b = out / "determinism_b";
    desk_run(cfg, a, true);
    desk_run(cfg, b, true);
    std::size_t files = 0, diff = 0;
    std::string first;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file() || e.path().filename() == "manifest.json") continue;
        const auto rel = fs::relative(e.path(), a);
        ++files;
        if (!fs::exists(b / rel) || read_all(e.path()) != read_all(b / rel)) {
            ++diff;
            if (first.empty()) first = rel.string();
        }
    }
    report(10, files > 0 && diff == 0,
           std::to_string(files) + " artifacts compared, " + std::to_string(diff) + " differ" +
               (first.empty() ? "" : " (first: " + first + ")"));
}

void performance_criterion(const pipeline::RunConfig& cfg, const fs::path& out) {
    const int hw = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    omp_set_num_threads(std::min(hw, 8));
    const double total = desk_run(cfg, out / "timed", true);
    const auto laws_run = out / "timed";
    battery::NetloadLaws laws;
    laws.by_class.resize(cfg.I);
    for (int i = 1; i <= cfg.I; ++i)
        for (int m = 0; m < cfg.M; ++m)
            laws.by_class[i - 1].push_back(dist_from_json(read_json_file(
                laws_run / "fit" / ("noise_class" + std::to_string(i) + "_slot" + std::to_string(m) + ".json"))));
    auto intraday = [&](int threads) {
        omp_set_num_threads(threads);
        const auto t0 = std::chrono::steady_clock::now();
        const auto R = compute_resource_intraday_all(laws, cfg.battery, cfg.grids);
        const auto P = compute_price_intraday_all(laws, cfg.battery, cfg.grids);
        return secs(t0);
    };
    const double t1 = intraday(1), t8 = intraday(8);
    omp_set_num_threads(hw);
    const double speedup = t1 / t8;
    report(11, total < 900.0 && speedup >= 3.0,
           "end-to-end " + fmt(total, 3) + " s (< 900 s); intraday 1 thread " + fmt(t1, 3) + " s, 8 threads " +
               fmt(t8, 3) + " s, speedup " + fmt(speedup, 3) + "x (>= 3x) on " + std::to_string(hw) +
               " hardware thread(s)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::string out = "acceptance_runs";
    std::string config = std::string(TWOSCALE_SOURCE_DIR) + "/configs/desk.json";
    std::vector<int> only;
    app.add_option("--out", out, "scratch directory for pipeline runs");
    app.add_option("--config", config, "desk configuration")->check(CLI::ExistingFile);
    app.add_option("--criterion", only, "run only these criteria (1-11)")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    std::set<int> want(only.begin(), only.end());
    if (want.empty())
        for (int i = 1; i <= 11; ++i) want.insert(i);

    try {
        auto cfg = pipeline::load_run_config(config);
        cfg.dump_trajectories = true;
        const fs::path root(out);
        fs::create_directories(root);
        const fs::path desk = root / "desk";

        oracle_criteria(want, cfg.seed);
        if (want.count(5) || want.count(6) || want.count(7) || want.count(8)) desk_run(cfg, desk, false);
        if (want.count(5)) periodicity_criterion(cfg, desk);
        desk_criteria(want, cfg, desk);
        if (want.count(9)) complexity_criterion();
        if (want.count(10)) determinism_criterion(cfg, root);
        if (want.count(11)) performance_criterion(cfg, root);
    } catch (const std::exception& e) {
        std::cout << "acceptance aborted: " << e.what() << std::endl;
        return 2;
    }
    std::size_t failed = 0;
    for (const auto& l : lines) failed += !l.pass;
    std::cout << lines.size() - failed << "/" << lines.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
