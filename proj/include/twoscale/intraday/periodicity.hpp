#pragma once

#include <string>
#include <vector>

namespace twoscale {

/// Day -> class map. Class ids are 1..I; representatives are the first day of
/// each class.
class PeriodicityClassMap {
public:
    PeriodicityClassMap() = default;
    PeriodicityClassMap(std::vector<int> class_of_day, int n_classes);

    int n_classes() const { return n_classes_; }
    int n_days() const { return static_cast<int>(class_of_day_.size()); }
    int class_of(int day) const { return class_of_day_.at(day); }
    int representative(int cls) const { return representative_.at(cls - 1); }
    const std::vector<int>& classes() const { return class_of_day_; }

private:
    std::vector<int> class_of_day_;
    std::vector<int> representative_;
    int n_classes_ = 0;
};

enum class PeriodicityScheme { trimester, custom };

/// Trimester: day-of-year (d mod 365) ranges [0,90), [90,181), [181,273),
/// [273,365) give classes 1..4, repeating every year; I must be 4 (or 1,
/// which lumps everything). Custom: `groups` lists the days of each class
/// and must partition 0..D.
PeriodicityClassMap build_periodicity_classes(int D, int I, PeriodicityScheme scheme,
                                              const std::vector<std::vector<int>>& groups = {});

int trimester_of(int day);  // 1..4

}  // namespace twoscale
