#ifndef SOLSCHED_HARNESS_HPP
#define SOLSCHED_HARNESS_HPP

#include "solsched/model.hpp"
#include "solsched/workload.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Experiment runner: builds independent per-server instances, runs the
// requested scheduler on each, validates every schedule and sums revenues
// across servers. Sweep points fan out across worker threads; results are
// collected by index, so parallel runs reproduce the same bytes.

namespace solsched {

/// Raised for malformed experiment configuration; the message names the
/// offending field.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    // fleet
    int es_count = 1;
    std::uint64_t es_seed_stride = 1; ///< 0 makes every server identical

    // workload
    int task_count = 100000;
    int total_slots = 1440;
    std::vector<double> rho_values{0.05, 0.1, 0.2, 0.4, 0.8};
    double u_mean = 1.0;
    double u_sigma = 0.3;
    std::string arrival_pattern = "uniform"; ///< uniform | diurnal

    // server
    double static_power = 20.0;
    double max_power = 2000.0;
    double max_util = 100.0;
    std::vector<double> battery_capacities{0.0, 2000.0, 7000.0, 10000.0, kInfiniteBattery};

    // solar
    std::string solar_source = "synthetic"; ///< "synthetic" or a CSV path
    double solar_peak = 2000.0;

    // schedulers: offline | snb | sib | sfb | maxflow | baseline:<policy> | online
    std::vector<std::string> schedulers{"offline"};

    // online deviations: (solar_pct, task_pct) pairs; offline rows ignore them
    std::vector<std::pair<double, double>> deviations{{0.0, 0.0}};
    std::vector<double> solar_spike_rates{0.0};
    std::vector<double> task_spike_rates{0.0};
    double spike_drop_factor = 0.2;
    double spike_burst_factor = 5.0;

    // seeds
    std::uint64_t base_seed = 1;
    int seed_count = 1;

    // execution
    int threads = 1;
    std::string out_dir = "out";
};

/// One validated run: a (scheduler, battery, rho, deviation, spikes, seed)
/// point summed over every edge server.
struct RunRecord {
    std::string scheduler;
    double battery_capacity = 0.0;
    double rho = 0.0;
    double solar_deviation_pct = 0.0;
    double task_deviation_pct = 0.0;
    double solar_spike_rate = 0.0;
    double task_spike_rate = 0.0;
    int seed_index = 0;
    int es_count = 1;
    double revenue = 0.0;
    double revenue_pct = 100.0; ///< vs the offline plan; 100 for offline rows
    std::int64_t completed = 0;
    std::int64_t dropped = 0;
    double energy_consumed = 0.0;  ///< watt-slots actually drawn
    double energy_harvested = 0.0; ///< watt-slots of (actual) solar
};

struct SweepResult {
    std::vector<RunRecord> runs;
};

/// Builds the instance for one server of one sweep point. Exposed so the
/// acceptance suite and CLI can reproduce exactly what the sweep ran.
Instance build_instance(const ExperimentConfig& cfg, double rho, double battery_capacity,
                        int seed_index, int es_index, GeneratedTasks* generated_out = nullptr);

/// Derives the per-server instance seed. Documented scheme:
/// base_seed + seed_index * 1000003 + es_index * es_seed_stride.
std::uint64_t instance_seed(const ExperimentConfig& cfg, int seed_index, int es_index);

/// Runs every sweep point. Throws ConfigError for invalid configuration
/// and std::runtime_error when any schedule fails validation (the message
/// carries the run key and the violated constraints).
SweepResult run_experiment(const ExperimentConfig& cfg);

/// Parses the key = value configuration file (see README for the schema).
ExperimentConfig parse_experiment_config(const std::string& path);

/// Applies one "key=value" override on top of a parsed config.
void apply_config_override(ExperimentConfig& cfg, const std::string& key,
                           const std::string& value);

} // namespace solsched

#endif // SOLSCHED_HARNESS_HPP
