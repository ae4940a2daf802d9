#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "twoscale/core/ext_real.hpp"

namespace twoscale {

/// Finite-support law. Atoms are vectors of a common dimension, stored
/// contiguously.
class DiscreteDist {
public:
    DiscreteDist() = default;
    /// Scalar atoms.
    DiscreteDist(std::vector<double> atoms, std::vector<double> probs);
    /// Vector atoms of dimension `dim`, flattened atom-major.
    DiscreteDist(std::size_t dim, std::vector<double> flat_atoms, std::vector<double> probs);

    static DiscreteDist dirac(double x) { return DiscreteDist({x}, {1.0}); }

    std::size_t size() const { return probs_.size(); }
    std::size_t dim() const { return dim_; }
    double prob(std::size_t i) const { return probs_[i]; }
    std::span<const double> probs() const { return probs_; }
    std::span<const double> atom(std::size_t i) const { return {atoms_.data() + i * dim_, dim_}; }
    /// First coordinate of atom i (the only one for scalar laws).
    double value(std::size_t i) const { return atoms_[i * dim_]; }
    std::span<const double> flat_atoms() const { return atoms_; }

    double mean() const;  // scalar laws only

    /// Index of the atom closest to x (scalar laws), ties toward the smaller index.
    std::size_t nearest_atom(double x) const;

    friend bool operator==(const DiscreteDist&, const DiscreteDist&) = default;

private:
    void validate() const;

    std::size_t dim_ = 1;
    std::vector<double> atoms_;
    std::vector<double> probs_;
};

/// Sum of p_i * f(s_i) under lower addition; atoms with p_i = 0 are skipped.
ExtReal expectation(const DiscreteDist& dist, const std::function<ExtReal(std::span<const double>)>& f);

}  // namespace twoscale
