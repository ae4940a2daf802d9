#include "twoscale/policy/simulate.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

namespace twoscale::policy {

using battery::BatteryState;

std::string_view to_string(Mode m) { return m == Mode::price ? "price" : "resource"; }

Mode mode_from_string(std::string_view s) {
    if (s == "price") return Mode::price;
    if (s == "resource") return Mode::resource;
    throw std::invalid_argument("unknown policy mode '" + std::string(s) + "' (price|resource)");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t capacity_index(const GridValueFn& v, double c) {
    const std::size_t ci = v.grid().find(1, c);
    if (ci == Grid::npos) throw std::invalid_argument("capacity " + std::to_string(c) + " is not on the slow grid");
    return ci;
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

PriceChoice select_price(const BatteryState& x, int d, const PolicyData& data) {
    require(data.price_tables && data.price_values, "price policy needs price tables and values");
    const auto& cfg = *data.cfg;
    const GridValueFn& next = data.price_values->at(d + 1);
    const int cls = data.classes->class_of(d);
    const auto g = continuation_row(next, cfg, data.prices->at(d), capacity_index(next, x.c));
    return price_choose(price_row(data.price_tables->at(cls - 1), x.c), next.grid().axis(0), g, x.h,
                        cfg.health_cap(x.c));
}

ResourceChoice select_resource(const BatteryState& x, int d, const PolicyData& data) {
    require(data.resource_tables && data.resource_values, "resource policy needs resource tables and values");
    const auto& cfg = *data.cfg;
    const GridValueFn& next = data.resource_values->at(d + 1);
    const int cls = data.classes->class_of(d);
    const auto g = continuation_row(next, cfg, data.prices->at(d), capacity_index(next, x.c));
    return resource_choose(resource_row(data.resource_tables->at(cls - 1), x.c), next.grid().axis(0), g, x.h,
                           cfg.health_cap(x.c));
}

namespace {

struct DayOutcome {
    double bill = 0.0;
    std::size_t decisions = 0;
};

class Replayer {
public:
    Replayer(const PolicyData& data, Mode mode) : data_(data), mode_(mode), cfg_(*data.cfg) {
        controls_ = control_axis(cfg_, data.grids->control_points);
    }

    // Runs one day from x (SOC carried over), updates x and the record.
    DayOutcome run_day(const battery::ScenarioSet& sc, std::size_t k, int d, BatteryState& x, SimulationRecord& rec) {
        const int cls = data_.classes->class_of(d);
        const double cap = cfg_.soc_cap(x.c);
        const double tol = 1e-9 * std::max(1.0, cap);
        double pi = 0.0, budget = 0.0;
        const FastTables* fast = nullptr;
        if (mode_ == Mode::price) {
            const auto choice = select_price(x, d, data_);
            pi = choice.pi;
            rec.decisions.push_back(pi);
            const auto& t = data_.price_tables->at(cls - 1);
            const std::size_t ci = t.table.grid().find(0, x.c), pj = t.table.grid().find(1, pi);
            fast = &t.fast.at(ci).at(pj);
        } else {
            const auto choice = select_resource(x, d, data_);
            rec.decisions.push_back(choice.target);
            budget = std::min(x.h - choice.target, data_.grids->dh.back());
            const auto& t = data_.resource_tables->at(cls - 1);
            fast = &t.fast.at(t.table.grid().find(1, x.c));
        }
        const std::size_t steps = fast->size() - 1;
        if (static_cast<std::size_t>(sc.n_slots) < steps) throw std::invalid_argument("scenario has fewer slots than the tables");

        DayOutcome out;
        for (std::size_t m = 0; m < steps; ++m) {
            const double w = sc.load(k, d, static_cast<int>(m));
            const double rate = cfg_.tariff.rate(static_cast<int>(m));
            const GridValueFn& next = (*fast)[m + 1];
            double best = kInf, best_u = 0.0, best_s = x.s;
            for (double u : controls_) {
                const double up = std::max(0.0, u), um = std::max(0.0, -u);
                const double used = up + um;
                double s1 = x.s + cfg_.rho_c * up - cfg_.rho_d * um;
                if (s1 < -tol || s1 > cap + tol) continue;
                if (used > x.h + 1e-9) continue;
                s1 = std::clamp(s1, 0.0, cap);
                double v = rate * std::max(0.0, w + up - um);
                if (mode_ == Mode::price) {
                    const std::array<double, 1> y{s1};
                    v += pi * used + next.eval_unchecked(y);
                } else {
                    if (used > budget + 1e-9) continue;
                    const std::array<double, 2> y{s1, std::max(0.0, budget - used)};
                    v += next.eval_unchecked(y);
                }
                if (v < best) {
                    best = v;
                    best_u = u;
                    best_s = s1;
                }
            }
            const double up = std::max(0.0, best_u), um = std::max(0.0, -best_u);
            if (std::abs(best_s - (x.s + cfg_.rho_c * up - cfg_.rho_d * um)) > 0.0) ++rec.clamped;
            out.bill += battery::stage_cost(cfg_.tariff, best_u, w, static_cast<int>(m));
            x.s = best_s;
            x.h = std::max(0.0, x.h - up - um);
            budget -= up + um;
            if (best_u < cfg_.u_min - 1e-12 || best_u > cfg_.u_max + 1e-12 || !battery::admissible(cfg_, x, 1e-6))
                ++rec.admissibility_violations;
            ++out.decisions;
        }
        return out;
    }

private:
    const PolicyData& data_;
    Mode mode_;
    const battery::BatteryConfig& cfg_;
    std::vector<double> controls_;
};

bool on_renewal_grid(const battery::BatteryConfig& cfg, double r) {
    return std::find(cfg.renewal_grid.begin(), cfg.renewal_grid.end(), r) != cfg.renewal_grid.end();
}

}  // namespace

SimulationResult simulate_policy(const battery::ScenarioSet& scenarios, Mode mode, const PolicyData& data,
                                 const BatteryState& x0) {
    require(data.cfg && data.grids && data.classes && data.prices, "policy data is incomplete");
    const SlowValueSeq* values = mode == Mode::price ? data.price_values : data.resource_values;
    require(values != nullptr, "policy values missing for this mode");
    scenarios.validate();
    const int D = values->horizon();
    if (scenarios.n_days < D + 1)
        throw std::invalid_argument("scenarios cover " + std::to_string(scenarios.n_days) + " days, horizon needs " +
                                    std::to_string(D + 1));
    if (scenarios.price.empty()) throw std::invalid_argument("scenarios carry no battery prices");
    const auto& cfg = *data.cfg;

    const std::size_t n = scenarios.size();
    SimulationResult res;
    res.records.resize(n);
    std::vector<double> ns(n, 0.0);
    std::vector<std::size_t> count(n, 0);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t ks = 0; ks < static_cast<std::int64_t>(n); ++ks) {
        const auto k = static_cast<std::size_t>(ks);
        SimulationRecord& rec = res.records[k];
        Replayer replay(data, mode);
        BatteryState x = x0;
        double disc = 1.0;
        rec.trajectory.push_back(x);
        if (!battery::admissible(cfg, x, 1e-6)) ++rec.admissibility_violations;
        for (int d = 0; d <= D; ++d) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto day = replay.run_day(scenarios, k, d, x, rec);
            ns[k] += std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0).count();
            count[k] += day.decisions;

            // renewal at the fictitious last step, after the battery price is seen
            const double p = scenarios.price[k][d];
            const auto& law = data.prices->at(d);
            const double p_atom = law.value(law.nearest_atom(p));
            const auto ren = decide_renewal(values->at(d + 1), cfg, x.h, x.c, p_atom);
            if (!on_renewal_grid(cfg, ren.r)) ++rec.admissibility_violations;
            rec.daily_bills.push_back(day.bill);
            rec.total_cost += disc * (day.bill + p * ren.r);
            if (ren.r > 0.0) {
                x = battery::renewal_dynamics(cfg, x, ren.r);
                rec.renewals.emplace_back(d, ren.r);
            }
            rec.trajectory.push_back(x);
            disc *= cfg.gamma;
        }
        rec.total_cost += disc * cfg.final_cost_at(x.h, x.c);
    }

    auto& s = res.summary;
    s.mode = mode;
    s.n = n;
    double sum = 0.0, tns = 0.0;
    std::size_t tcount = 0;
    for (std::size_t k = 0; k < n; ++k) {
        sum += res.records[k].total_cost;
        s.violations += res.records[k].admissibility_violations;
        s.clamped += res.records[k].clamped;
        tns += ns[k];
        tcount += count[k];
    }
    s.mean = n ? sum / static_cast<double>(n) : 0.0;
    double ss = 0.0;
    for (const auto& r : res.records) ss += (r.total_cost - s.mean) * (r.total_cost - s.mean);
    s.stderr_ = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    s.decision_us = tcount ? tns / static_cast<double>(tcount) / 1000.0 : 0.0;
    return res;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os.precision(17);
    return os;
}

}  // namespace

void write_summary_csv(const std::filesystem::path& path, const SimulationResult& r) {
    auto os = open_out(path);
    os << "scenario_id,total_cost,renewal_days,renewal_sizes\n";
    for (std::size_t k = 0; k < r.records.size(); ++k) {
        const auto& rec = r.records[k];
        std::string days, sizes;
        for (std::size_t i = 0; i < rec.renewals.size(); ++i) {
            if (i) {
                days += ';';
                sizes += ';';
            }
            days += std::to_string(rec.renewals[i].first);
            sizes += std::to_string(static_cast<long long>(std::llround(rec.renewals[i].second)));
        }
        os << k << ',' << rec.total_cost << ',' << days << ',' << sizes << '\n';
    }
}

nlohmann::json summary_json(const SimulationResult& r) {
    const auto& s = r.summary;
    std::size_t renewals = 0;
    for (const auto& rec : r.records) renewals += rec.renewals.size();
    return {{"mode", std::string(to_string(s.mode))},
            {"scenarios", s.n},
            {"mean_cost", s.mean},
            {"stderr", s.stderr_},
            {"admissibility_violations", s.violations},
            {"clamped_states", s.clamped},
            {"renewals", renewals},
            {"metadata", {{"decision_time_us", s.decision_us}}}};
}

void write_trajectories_csv(const std::filesystem::path& path, const SimulationResult& r) {
    auto os = open_out(path);
    os << "scenario_id,day,s,h,c,decision,bill\n";
    for (std::size_t k = 0; k < r.records.size(); ++k) {
        const auto& rec = r.records[k];
        for (std::size_t d = 0; d < rec.trajectory.size(); ++d) {
            const auto& x = rec.trajectory[d];
            os << k << ',' << d << ',' << x.s << ',' << x.h << ',' << x.c << ',';
            if (d < rec.decisions.size()) os << rec.decisions[d];
            os << ',';
            if (d < rec.daily_bills.size()) os << rec.daily_bills[d];
            os << '\n';
        }
    }
}

}  // namespace twoscale::policy
