#pragma once

#include <compare>

namespace twoscale {

/// (day, fast step) coordinate. Step M+1 is the fictitious renewal step of a
/// day; the terminal index (D+1, 0) closes the horizon.
struct TwoScaleIndex {
    int day = 0;
    int step = 0;

    // Member order makes the defaulted comparison lexicographic: day first.
    friend constexpr auto operator<=>(const TwoScaleIndex&, const TwoScaleIndex&) = default;
};

constexpr std::strong_ordering lex_compare(TwoScaleIndex a, TwoScaleIndex b) { return a <=> b; }

/// Validity for a horizon of D+1 days with M+1 fast steps per day.
constexpr bool is_valid(TwoScaleIndex i, int D, int M) {
    if (i.day < 0 || i.day > D + 1 || i.step < 0 || i.step > M + 1) return false;
    return i.day <= D || i.step == 0;
}

}  // namespace twoscale
