#include "twoscale/intraday/periodicity.hpp"

#include <stdexcept>

namespace twoscale {

PeriodicityClassMap::PeriodicityClassMap(std::vector<int> class_of_day, int n_classes)
    : class_of_day_(std::move(class_of_day)), representative_(n_classes, -1), n_classes_(n_classes) {
    for (int d = 0; d < static_cast<int>(class_of_day_.size()); ++d) {
        const int c = class_of_day_[d];
        if (c < 1 || c > n_classes) throw std::invalid_argument("class id out of range at day " + std::to_string(d));
        if (representative_[c - 1] < 0) representative_[c - 1] = d;
    }
    for (int c = 1; c <= n_classes; ++c)
        if (representative_[c - 1] < 0) throw std::invalid_argument("class " + std::to_string(c) + " has no day");
}

int trimester_of(int day) {
    const int doy = day % 365;
    if (doy < 90) return 1;
    if (doy < 181) return 2;
    if (doy < 273) return 3;
    return 4;
}

PeriodicityClassMap build_periodicity_classes(int D, int I, PeriodicityScheme scheme,
                                              const std::vector<std::vector<int>>& groups) {
    if (D < 0) throw std::invalid_argument("periodicity: negative horizon");
    if (I < 1) throw std::invalid_argument("periodicity: need at least one class");
    std::vector<int> cls(D + 1, 0);
    if (scheme == PeriodicityScheme::trimester) {
        if (I != 1 && I != 4) throw std::invalid_argument("periodicity: trimester scheme needs I = 4 (or 1)");
        for (int d = 0; d <= D; ++d) cls[d] = I == 1 ? 1 : trimester_of(d);
        // short horizons may not reach every trimester
        int present = 0;
        for (int c = 1; c <= I; ++c)
            for (int d = 0; d <= D; ++d)
                if (cls[d] == c) {
                    ++present;
                    break;
                }
        if (present != I) throw std::invalid_argument("periodicity: horizon does not cover all trimesters");
        return PeriodicityClassMap(std::move(cls), I);
    }
    if (static_cast<int>(groups.size()) != I)
        throw std::invalid_argument("periodicity: custom scheme lists " + std::to_string(groups.size()) +
                                    " classes, expected " + std::to_string(I));
    for (int c = 0; c < I; ++c) {
        if (groups[c].empty()) throw std::invalid_argument("periodicity: empty class " + std::to_string(c + 1));
        for (int d : groups[c]) {
            if (d < 0 || d > D) throw std::invalid_argument("periodicity: day " + std::to_string(d) + " out of range");
            if (cls[d] != 0) throw std::invalid_argument("periodicity: day " + std::to_string(d) + " in two classes");
            cls[d] = c + 1;
        }
    }
    for (int d = 0; d <= D; ++d)
        if (cls[d] == 0) throw std::invalid_argument("periodicity: day " + std::to_string(d) + " has no class");
    return PeriodicityClassMap(std::move(cls), I);
}

}  // namespace twoscale
