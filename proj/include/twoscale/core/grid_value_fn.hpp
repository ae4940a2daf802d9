#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include "twoscale/core/ext_real.hpp"
#include "twoscale/core/grid.hpp"

namespace twoscale {

enum class Interp {
    nearest,      // value at the closest breakpoint, ties toward the smaller index
    multilinear,  // convex blend of the cell vertices; +inf at any weighted vertex wins
};

std::string_view to_string(Interp mode);
Interp interp_from_string(std::string_view s);

/// Extended-real function tabulated on a Grid. Queries outside the bounding
/// box are clamped to the boundary.
class GridValueFn {
public:
    GridValueFn() = default;
    GridValueFn(Grid grid, std::vector<double> values, Interp mode = Interp::multilinear);
    GridValueFn(Grid grid, double fill, Interp mode = Interp::multilinear);

    static GridValueFn tabulate(Grid grid, const std::function<double(std::span<const double>)>& f,
                                Interp mode = Interp::multilinear);

    const Grid& grid() const { return grid_; }
    Interp mode() const { return mode_; }
    void set_mode(Interp m) { mode_ = m; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    std::size_t size() const { return values_.size(); }
    ExtReal at(std::size_t flat) const { return ExtReal(values_[flat]); }
    double& operator[](std::size_t flat) { return values_[flat]; }
    double operator[](std::size_t flat) const { return values_[flat]; }

    /// Throws std::invalid_argument on dimension mismatch.
    ExtReal eval(std::span<const double> x) const;
    ExtReal eval(std::initializer_list<double> x) const {
        return eval(std::span<const double>(x.begin(), x.size()));
    }

    /// Unchecked evaluation for inner loops; x.size() must equal dims().
    double eval_unchecked(std::span<const double> x) const;

    friend bool operator==(const GridValueFn& a, const GridValueFn& b) {
        return a.mode_ == b.mode_ && a.grid_ == b.grid_ && a.values_ == b.values_;
    }

private:
    double eval_nearest(std::span<const double> x) const;
    double eval_multilinear(std::span<const double> x) const;

    Grid grid_;
    std::vector<double> values_;
    Interp mode_ = Interp::multilinear;
};

}  // namespace twoscale
