#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "twoscale/battery/data.hpp"
#include "twoscale/battery/model.hpp"
#include "twoscale/intraday/battery_intraday.hpp"
#include "twoscale/intraday/periodicity.hpp"

namespace twoscale::pipeline {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingDependency : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int D = 365;         // last day index; days 0..D
    int M = 48;          // half-hour slots per day (at most 48)
    int I = 4;
    std::string scheme = "trimester";
    std::vector<std::vector<int>> groups;  // custom scheme only
    IntradayGrids grids;
    double h_step = 40.0;
    battery::BatteryConfig battery;

    // data: CSV paths, or the synthetic generator when netload_csv is empty
    std::string netload_csv;
    int history_days = 365;
    int history_scenarios = 3;
    battery::SyntheticNetload synthetic;
    int k_netload = 10;
    battery::PriceForecast price_forecast;
    int price_paths = 200;
    int k_price = 5;

    std::uint64_t seed = 20240101;
    int scenarios = 100;
    std::string mode = "both";  // price | resource | both
    int threads = 0;            // 0: OpenMP default
    bool dump_trajectories = false;

    void validate() const;  // throws ConfigError
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);  // missing keys keep defaults
RunConfig load_run_config(const std::filesystem::path& path);

/// FNV-1a 64 over the canonical JSON of the fields that shape the artifacts
/// (threads and output switches excluded). Hex string.
std::string config_hash(const RunConfig& c);

PeriodicityClassMap make_classes(const RunConfig& c);

enum class Stage { fit, intraday, bellman, simulate, report, verify, complexity };
Stage stage_from_string(const std::string& s);
std::string to_string(Stage s);

struct Options {
    std::filesystem::path out = "runs/default";
    bool force = false;
    std::ostream* log = nullptr;
};

/// Runs one stage. Stages read their inputs from `out` and record outputs
/// and timings in out/manifest.json.
void run_stage(Stage stage, const RunConfig& cfg, const Options& opt);

/// fit, intraday, bellman, simulate, report in order.
void run_all(const RunConfig& cfg, const Options& opt);

/// Exit code for an exception thrown by run_stage: 2 config, 3 missing
/// dependency, 4 verification failure, 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace twoscale::pipeline
