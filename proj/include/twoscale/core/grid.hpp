#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace twoscale {

/// Rectangular grid: one strictly increasing breakpoint list per dimension.
/// Multi-indices are flattened row-major (last dimension fastest).
class Grid {
public:
    static constexpr std::size_t kMaxDims = 8;

    Grid() = default;
    explicit Grid(std::vector<std::vector<double>> axes);

    /// n uniform points on [lo, hi]; n == 1 gives {lo}.
    static Grid uniform(double lo, double hi, std::size_t n);
    static Grid product(const std::vector<Grid>& factors);

    std::size_t dims() const { return axes_.size(); }
    std::size_t size() const { return size_; }
    const std::vector<double>& axis(std::size_t d) const { return axes_[d]; }
    const std::vector<std::vector<double>>& axes() const { return axes_; }
    std::size_t extent(std::size_t d) const { return axes_[d].size(); }
    std::size_t stride(std::size_t d) const { return strides_[d]; }

    std::size_t flat_index(std::span<const std::size_t> idx) const;
    void unflatten(std::size_t flat, std::span<std::size_t> idx) const;
    void point(std::size_t flat, std::span<double> out) const;
    std::vector<double> point(std::size_t flat) const;

    /// Cell containing x along dimension d after clamping to the axis range:
    /// x = (1 - t) * axis[lo] + t * axis[lo + 1], with t in [0, 1].
    /// For single-point axes lo = 0, t = 0.
    struct Bracket {
        std::size_t lo;
        double t;
    };
    Bracket bracket(std::size_t d, double x) const;

    /// Closest breakpoint along dimension d; ties go to the smaller index.
    std::size_t nearest(std::size_t d, double x) const;

    /// Index of a breakpoint equal to x within tol, or npos.
    std::size_t find(std::size_t d, double x, double tol = 1e-9) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend bool operator==(const Grid& a, const Grid& b) { return a.axes_ == b.axes_; }

private:
    std::vector<std::vector<double>> axes_;
    std::vector<std::size_t> strides_;
    std::vector<double> uniform_step_;  // 0 when the axis is not uniform
    std::size_t size_ = 0;
};

}  // namespace twoscale
