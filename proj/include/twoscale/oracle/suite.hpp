#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace twoscale::oracle {

struct PropertyResult {
    std::string name;
    std::size_t instances = 0;
    std::size_t failures = 0;
    std::vector<std::uint64_t> failing_seeds;
    double max_error = 0.0;  // largest violation seen (0 when the property holds exactly)
    double seconds = 0.0;

    bool passed() const { return failures == 0; }
};

/// Runs the desk-scale theorem checks on n seeded tiny instances (seeds
/// seed0 .. seed0 + n - 1):
///   tree        flat DP = scenario-tree optimization, both dynamics variants
///   blocks      block recursion = flat DP at every day and state
///   monotone    equality = inequality value on monotone instances,
///               inequality <= equality on arbitrary ones
///   sandwich    price recursion <= flat DP <= resource recursion (monotone)
std::vector<PropertyResult> run_oracle_suite(std::size_t n, std::uint64_t seed0, double tol = 1e-9);

}  // namespace twoscale::oracle
