#include "twoscale/core/discrete_dist.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twoscale {

DiscreteDist::DiscreteDist(std::vector<double> atoms, std::vector<double> probs)
    : dim_(1), atoms_(std::move(atoms)), probs_(std::move(probs)) {
    validate();
}

DiscreteDist::DiscreteDist(std::size_t dim, std::vector<double> flat_atoms, std::vector<double> probs)
    : dim_(dim), atoms_(std::move(flat_atoms)), probs_(std::move(probs)) {
    validate();
}

void DiscreteDist::validate() const {
    if (dim_ == 0) throw std::invalid_argument("DiscreteDist: zero atom dimension");
    if (probs_.empty()) throw std::invalid_argument("DiscreteDist: empty support");
    if (atoms_.size() != probs_.size() * dim_)
        throw std::invalid_argument("DiscreteDist: " + std::to_string(probs_.size()) + " probabilities for " +
                                    std::to_string(atoms_.size() / dim_) + " atoms");
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw std::invalid_argument("DiscreteDist: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("DiscreteDist: probabilities sum to " + std::to_string(total));
}

double DiscreteDist::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) m += probs_[i] * value(i);
    return m;
}

std::size_t DiscreteDist::nearest_atom(double x) const {
    std::size_t best = 0;
    double best_d = std::abs(value(0) - x);
    for (std::size_t i = 1; i < size(); ++i) {
        const double d = std::abs(value(i) - x);
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

ExtReal expectation(const DiscreteDist& dist, const std::function<ExtReal(std::span<const double>)>& f) {
    ExtReal acc(0.0);
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double p = dist.prob(i);
        if (p == 0.0) continue;
        acc = acc + ExtReal(p * f(dist.atom(i)).value());
    }
    return acc;
}

}  // namespace twoscale
