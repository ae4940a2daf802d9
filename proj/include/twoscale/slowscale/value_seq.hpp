#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twoscale/core/grid_value_fn.hpp"

namespace twoscale {

enum class BoundKind { price_lower, resource_upper, exact };

std::string_view to_string(BoundKind k);
BoundKind bound_kind_from_string(std::string_view s);

/// Slow-scale value functions for d = 0..D+1.
struct SlowValueSeq {
    BoundKind kind = BoundKind::exact;
    std::vector<GridValueFn> days;

    int horizon() const { return static_cast<int>(days.size()) - 2; }  // D
    const GridValueFn& at(int d) const { return days.at(d); }
};

/// bellman_{P|R}_d{d}.json for every day.
void write_value_seq(const std::filesystem::path& dir, const SlowValueSeq& seq);
SlowValueSeq read_value_seq(const std::filesystem::path& dir, BoundKind kind, int D);
std::string value_file_name(BoundKind kind, int d);

struct BoundReport {
    std::vector<double> max_rel_gap;  // per day over the grid
    std::vector<double> gap_at_x0;    // per day
    std::vector<double> lower_at_x0;
    std::vector<double> upper_at_x0;
    std::size_t violations = 0;       // grid points with lower > upper + tol
    double worst_violation = 0.0;     // largest relative excess
};

/// relative gap = (upper - lower) / max(|lower|, 1e-9); lower > upper counts
/// as a violation when it exceeds 1e-6 relative.
BoundReport check_sandwich(const SlowValueSeq& lower, const SlowValueSeq& upper, std::span<const double> x0);

double relative_gap(double lower, double upper);

}  // namespace twoscale
