#include "twoscale/slowscale/value_seq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "twoscale/core/serialize.hpp"

namespace twoscale {

std::string_view to_string(BoundKind k) {
    switch (k) {
        case BoundKind::price_lower: return "P";
        case BoundKind::resource_upper: return "R";
        default: return "E";
    }
}

BoundKind bound_kind_from_string(std::string_view s) {
    if (s == "P" || s == "price") return BoundKind::price_lower;
    if (s == "R" || s == "resource") return BoundKind::resource_upper;
    if (s == "E" || s == "exact") return BoundKind::exact;
    throw std::invalid_argument("unknown bound kind: " + std::string(s));
}

std::string value_file_name(BoundKind kind, int d) {
    return "bellman_" + std::string(to_string(kind)) + "_d" + std::to_string(d) + ".json";
}

void write_value_seq(const std::filesystem::path& dir, const SlowValueSeq& seq) {
    std::filesystem::create_directories(dir);
    for (std::size_t d = 0; d < seq.days.size(); ++d)
        write_json_file(dir / value_file_name(seq.kind, static_cast<int>(d)), to_json(seq.days[d]));
}

SlowValueSeq read_value_seq(const std::filesystem::path& dir, BoundKind kind, int D) {
    SlowValueSeq seq{kind, {}};
    for (int d = 0; d <= D + 1; ++d) {
        const auto p = dir / value_file_name(kind, d);
        if (!std::filesystem::exists(p)) throw std::runtime_error("missing value function file " + p.string());
        seq.days.push_back(grid_fn_from_json(read_json_file(p)));
    }
    return seq;
}

double relative_gap(double lower, double upper) {
    if (lower == upper) return 0.0;  // also covers equal infinities
    return (upper - lower) / std::max(std::abs(lower), 1e-9);
}

BoundReport check_sandwich(const SlowValueSeq& lower, const SlowValueSeq& upper, std::span<const double> x0) {
    if (lower.days.size() != upper.days.size()) throw std::invalid_argument("check_sandwich: day counts differ");
    BoundReport rep;
    for (std::size_t d = 0; d < lower.days.size(); ++d) {
        const auto& lo = lower.days[d];
        const auto& up = upper.days[d];
        if (!(lo.grid() == up.grid())) throw std::invalid_argument("check_sandwich: grid mismatch at day " + std::to_string(d));
        double worst = 0.0;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            const double g = relative_gap(lo[i], up[i]);
            if (std::isnan(g)) continue;
            worst = std::max(worst, g);
            if (g < -1e-6) {
                ++rep.violations;
                rep.worst_violation = std::max(rep.worst_violation, -g);
            }
        }
        rep.max_rel_gap.push_back(worst);
        const double l0 = lo.eval(x0).value();
        const double u0 = up.eval(x0).value();
        rep.lower_at_x0.push_back(l0);
        rep.upper_at_x0.push_back(u0);
        rep.gap_at_x0.push_back(relative_gap(l0, u0));
    }
    return rep;
}

}  // namespace twoscale
