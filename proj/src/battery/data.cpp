#include "twoscale/battery/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace twoscale::battery {

void ScenarioSet::validate() const {
    if (n_days <= 0 || n_slots <= 0) throw std::invalid_argument("ScenarioSet: empty shape");
    for (const auto& row : netload)
        if (row.size() != static_cast<std::size_t>(n_days * n_slots))
            throw std::invalid_argument("ScenarioSet: netload rows must have n_days * n_slots entries");
    for (const auto& row : price) {
        if (row.size() != static_cast<std::size_t>(n_days)) throw std::invalid_argument("ScenarioSet: price rows must have n_days entries");
        for (double p : row)
            if (!(p > 0.0)) throw std::invalid_argument("ScenarioSet: battery prices must be positive");
    }
    if (!netload.empty() && !price.empty() && netload.size() != price.size())
        throw std::invalid_argument("ScenarioSet: netload and price scenario counts differ");
}

std::mt19937_64 scenario_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

KMeansResult kmeans_1d(const std::vector<double>& data, int k, std::uint64_t seed, int max_iter) {
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (data.size() < static_cast<std::size_t>(k))
        throw std::invalid_argument("kmeans: " + std::to_string(data.size()) + " points for k = " + std::to_string(k));
    const std::size_t n = data.size();
    std::mt19937_64 rng(seed);

    // k-means++ seeding
    std::vector<double> centers;
    centers.push_back(data[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
    std::vector<double> d2(n);
    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (double c : centers) best = std::min(best, (data[i] - c) * (data[i] - c));
            d2[i] = best;
            total += best;
        }
        if (total == 0.0) {
            centers.push_back(centers.back());
            continue;
        }
        double r = std::uniform_real_distribution<double>(0.0, total)(rng);
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            r -= d2[i];
            if (r < 0.0) {
                pick = i;
                break;
            }
        }
        centers.push_back(data[pick]);
    }

    std::vector<int> assign(n, -1);
    std::vector<double> sum(k);
    std::vector<std::size_t> count(k);
    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double bd = std::abs(data[i] - centers[0]);
            for (int c = 1; c < k; ++c) {
                const double dd = std::abs(data[i] - centers[c]);
                if (dd < bd) {
                    bd = dd;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        std::fill(sum.begin(), sum.end(), 0.0);
        std::fill(count.begin(), count.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[assign[i]] += data[i];
            ++count[assign[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (count[c] > 0) {
                centers[c] = sum[c] / static_cast<double>(count[c]);
                continue;
            }
            // empty cluster: take over the point farthest from its own center
            std::size_t far = 0;
            double fd = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dd = std::abs(data[i] - centers[assign[i]]);
                if (dd > fd) {
                    fd = dd;
                    far = i;
                }
            }
            if (fd <= 0.0) continue;  // every point sits on a center already
            --count[assign[far]];
            assign[far] = c;
            count[c] = 1;
            centers[c] = data[far];
            changed = true;
        }
        if (!changed) break;
    }

    // final shares, merged duplicates, ascending order
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++count[assign[i]];
    std::vector<std::pair<double, std::size_t>> cs;
    for (int c = 0; c < k; ++c)
        if (count[c] > 0) cs.emplace_back(centers[c], count[c]);
    std::sort(cs.begin(), cs.end());
    KMeansResult out;
    for (const auto& [c, m] : cs) {
        if (!out.centers.empty() && out.centers.back() == c) {
            out.shares.back() += static_cast<double>(m);
            continue;
        }
        out.centers.push_back(c);
        out.shares.push_back(static_cast<double>(m));
    }
    for (double& s : out.shares) s /= static_cast<double>(n);
    return out;
}

DiscreteDist kmeans_law(const std::vector<double>& data, int k, std::uint64_t seed) {
    auto r = kmeans_1d(data, k, seed);
    // absorb the rounding of the shares in the largest atom
    double total = 0.0;
    for (double s : r.shares) total += s;
    auto big = std::max_element(r.shares.begin(), r.shares.end());
    *big += 1.0 - total;
    return DiscreteDist(std::move(r.centers), std::move(r.shares));
}

NetloadLaws fit_netload_distributions(const ScenarioSet& raw, const PeriodicityClassMap& classes, int k,
                                      std::uint64_t seed) {
    raw.validate();
    if (raw.netload.empty()) throw std::invalid_argument("fit: no netload data");
    if (classes.n_days() < raw.n_days) throw std::invalid_argument("fit: class map shorter than the data");
    const int I = classes.n_classes();
    const int S = raw.n_slots;
    std::vector<std::vector<std::vector<double>>> pool(I, std::vector<std::vector<double>>(S));
    for (std::size_t s = 0; s < raw.netload.size(); ++s)
        for (int d = 0; d < raw.n_days; ++d)
            for (int m = 0; m < S; ++m) pool[classes.class_of(d) - 1][m].push_back(raw.load(s, d, m));

    std::string missing;
    for (int i = 0; i < I; ++i)
        for (int m = 0; m < S; ++m)
            if (pool[i][m].size() < static_cast<std::size_t>(k))
                missing += " (class " + std::to_string(i + 1) + ", slot " + std::to_string(m) + ")";
    if (!missing.empty()) throw std::invalid_argument("fit: insufficient data for" + missing);

    NetloadLaws laws;
    laws.by_class.assign(I, std::vector<DiscreteDist>(S));
#pragma omp parallel for schedule(static)
    for (int cell = 0; cell < I * S; ++cell) {
        const int i = cell / S, m = cell % S;
        laws.by_class[i][m] = kmeans_law(pool[i][m], k, seed + static_cast<std::uint64_t>(cell));
    }
    return laws;
}

double PriceForecast::at_day(int day) const {
    if (yearly.empty()) throw std::invalid_argument("price forecast is empty");
    const double t = static_cast<double>(day) / 365.0;
    const auto i = static_cast<std::size_t>(std::floor(t));
    if (i + 1 >= yearly.size()) return yearly.back();
    const double f = t - static_cast<double>(i);
    return (1.0 - f) * yearly[i] + f * yearly[i + 1];
}

std::vector<std::vector<double>> gen_battery_price_scenarios(const PriceForecast& f, int n_days, int n,
                                                             std::uint64_t seed) {
    if (n < 1 || n_days < 1) throw std::invalid_argument("price scenarios: need n >= 1 and n_days >= 1");
    if (f.sigma < 0.0) throw std::invalid_argument("price scenarios: negative sigma");
    if (!(f.floor > 0.0)) throw std::invalid_argument("price scenarios: floor must be positive");
    std::vector<std::vector<double>> out(n, std::vector<double>(n_days));
    for (int s = 0; s < n; ++s) {
        auto rng = scenario_rng(seed, static_cast<std::uint64_t>(s));
        std::normal_distribution<double> z(0.0, 1.0);
        for (int d = 0; d < n_days; ++d) {
            const double noise = f.sigma > 0.0 ? f.sigma * z(rng) : 0.0;
            out[s][d] = std::max(f.floor, f.at_day(d) + noise);
        }
    }
    return out;
}

PriceLaws fit_price_laws(const std::vector<std::vector<double>>& paths, int k, std::uint64_t seed) {
    if (paths.empty()) throw std::invalid_argument("price laws: no paths");
    const std::size_t days = paths.front().size();
    PriceLaws out;
    out.by_day.resize(days);
#pragma omp parallel for schedule(static)
    for (std::size_t d = 0; d < days; ++d) {
        std::vector<double> col;
        col.reserve(paths.size());
        for (const auto& p : paths) col.push_back(p.at(d));
        out.by_day[d] = kmeans_law(col, std::min<int>(k, static_cast<int>(col.size())), seed + d);
    }
    return out;
}

namespace {

std::size_t sample(const DiscreteDist& law, std::mt19937_64& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    for (std::size_t a = 0; a < law.size(); ++a) {
        acc += law.prob(a);
        if (u < acc) return a;
    }
    return law.size() - 1;
}

}  // namespace

ScenarioSet white_noise_resample(const NetloadLaws& laws, const PeriodicityClassMap& classes,
                                 const PriceLaws& prices, int n, std::uint64_t seed) {
    const int days = classes.n_days();
    if (static_cast<int>(prices.by_day.size()) < days) throw std::invalid_argument("resample: price laws too short");
    ScenarioSet out;
    out.n_days = days;
    out.n_slots = static_cast<int>(laws.for_class(1).size());
    out.netload.assign(n, std::vector<double>(static_cast<std::size_t>(days * out.n_slots)));
    out.price.assign(n, std::vector<double>(days));
    for (int s = 0; s < n; ++s) {
        auto rng = scenario_rng(seed, static_cast<std::uint64_t>(s));
        for (int d = 0; d < days; ++d) {
            const auto& slot_laws = laws.for_class(classes.class_of(d));
            for (int m = 0; m < out.n_slots; ++m)
                out.netload[s][static_cast<std::size_t>(d * out.n_slots + m)] = slot_laws[m].value(sample(slot_laws[m], rng));
            out.price[s][d] = prices.at(d).value(sample(prices.at(d), rng));
        }
    }
    return out;
}

ScenarioSet synthetic_netload(const SyntheticNetload& cfg, int n_days, int n_scenarios, std::uint64_t seed) {
    ScenarioSet out;
    out.n_days = n_days;
    out.netload.assign(n_scenarios, std::vector<double>(static_cast<std::size_t>(n_days * kSlotsPerDay)));
    constexpr double pi = std::numbers::pi;
    for (int s = 0; s < n_scenarios; ++s) {
        auto rng = scenario_rng(seed, static_cast<std::uint64_t>(s));
        std::normal_distribution<double> z(0.0, 1.0);
        std::uniform_real_distribution<double> cloud(0.35, 1.0);
        for (int d = 0; d < n_days; ++d) {
            const double doy = static_cast<double>(d % 365);
            // production peaks around day 172, consumption is higher in winter
            const double season = 0.5 * (1.0 - std::cos(2.0 * pi * (doy + 10.0) / 365.0));
            const double heating = 1.0 + 0.25 * std::cos(2.0 * pi * (doy + 10.0) / 365.0);
            const double clear = cloud(rng);
            for (int m = 0; m < kSlotsPerDay; ++m) {
                const double hour = 0.5 * m;
                const double evening = std::exp(-0.5 * std::pow((hour - 19.0) / 1.8, 2.0));
                const double office = (hour >= 8.0 && hour < 18.0) ? 0.35 : 0.0;
                const double load = heating * cfg.base_load * (1.0 + office) + cfg.evening_bump * evening;
                const double sun = (hour > 6.0 && hour < 20.0) ? std::sin(pi * (hour - 6.0) / 14.0) : 0.0;
                const double solar = cfg.solar_peak * (0.25 + 0.75 * season) * clear * sun * sun;
                out.netload[s][static_cast<std::size_t>(d * kSlotsPerDay + m)] = load - solar + cfg.noise_sd * z(rng);
            }
        }
    }
    return out;
}

void write_netload_csv(const std::filesystem::path& path, const ScenarioSet& s) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os.precision(17);
    os << "scenario,day,slot,netload_kwh\n";
    for (std::size_t k = 0; k < s.netload.size(); ++k)
        for (int d = 0; d < s.n_days; ++d)
            for (int m = 0; m < s.n_slots; ++m) os << k << ',' << d << ',' << m << ',' << s.load(k, d, m) << '\n';
}

void write_price_csv(const std::filesystem::path& path, const ScenarioSet& s) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os.precision(17);
    os << "scenario,day,price_usd_per_kwh\n";
    for (std::size_t k = 0; k < s.price.size(); ++k)
        for (int d = 0; d < s.n_days; ++d) os << k << ',' << d << ',' << s.price[k][d] << '\n';
}

namespace {

std::vector<std::vector<double>> read_rows(const std::filesystem::path& path, std::size_t cols, const std::string& header) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    std::getline(is, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw std::runtime_error(path.string() + ": expected header '" + header + "'");
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != cols) throw std::runtime_error(path.string() + ": bad column count at line " + std::to_string(lineno));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

ScenarioSet read_scenarios_csv(const std::filesystem::path& netload, const std::filesystem::path& price) {
    ScenarioSet out;
    const auto rows = read_rows(netload, 4, "scenario,day,slot,netload_kwh");
    int ns = 0, nd = 0, nm = 0;
    for (const auto& r : rows) {
        ns = std::max(ns, static_cast<int>(r[0]) + 1);
        nd = std::max(nd, static_cast<int>(r[1]) + 1);
        nm = std::max(nm, static_cast<int>(r[2]) + 1);
    }
    out.n_days = nd;
    out.n_slots = nm;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.netload.assign(ns, std::vector<double>(static_cast<std::size_t>(nd * nm), nan));
    for (const auto& r : rows)
        out.netload[static_cast<std::size_t>(r[0])][static_cast<std::size_t>(r[1] * nm + r[2])] = r[3];
    for (const auto& row : out.netload)
        for (double v : row)
            if (std::isnan(v)) throw std::runtime_error(netload.string() + ": scenario grid is not rectangular");
    if (!price.empty()) {
        const auto prow = read_rows(price, 3, "scenario,day,price_usd_per_kwh");
        out.price.assign(ns, std::vector<double>(nd, nan));
        for (const auto& r : prow) {
            if (r[0] >= ns || r[1] >= nd) throw std::runtime_error(price.string() + ": index outside the netload grid");
            out.price[static_cast<std::size_t>(r[0])][static_cast<std::size_t>(r[1])] = r[2];
        }
    }
    out.validate();
    return out;
}

}  // namespace twoscale::battery
