#ifndef SOLSCHED_WORKLOAD_HPP
#define SOLSCHED_WORKLOAD_HPP

#include "solsched/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Synthetic workloads and the deviation model. Generation is a pure
// function of (spec, seed): identical inputs produce bit-identical task
// sets and profiles.

namespace solsched {

/// Parameters for the synthetic task generator. `rho` is the target ratio
/// mean(util) / mean(deadline - arrival); utilizations are drawn from a
/// Gaussian and then rescaled uniformly so the realized ratio matches.
struct GenSpec {
    double rho = 0.1;
    int task_count = 100000;
    int total_slots = 1440;
    double u_mean = 1.0;
    double u_sigma = 0.3;
    std::vector<double> arrival_weights; ///< per-slot intensity; empty = uniform
    std::uint64_t seed = 1;
    double max_util = 100.0; ///< clamp ceiling for drawn utilizations
};

/// Deviation of the actual stream from the predicted one, in percent.
struct DeviationSpec {
    double solar_pct = 0.0; ///< each slot's actual solar within +-pct of predicted
    double task_pct = 0.0;  ///< share of predicted tasks replaced by fresh ones
    std::uint64_t seed = 1;
};

/// Generated tasks plus the utilization scale that was applied to hit
/// `rho`; resampling (replacement tasks, spike bursts) reuses the scale so
/// fresh tasks follow the same effective distribution.
struct GeneratedTasks {
    std::vector<Task> tasks;
    double util_scale = 1.0;
};

/// Draws arrivals from the weight vector, utilizations from the Gaussian
/// (clamped to (0, max_util]), deadlines as arrival + 1 + k with k uniform
/// in 0..5, then rescales utilizations so the realized rho lands within
/// 5% of the target and recomputes revenues. Throws std::invalid_argument
/// for degenerate weights or a rho that would need mean util > max_util.
GeneratedTasks generate_tasks(const GenSpec& spec);

/// Loads a two-column CSV (slot-or-timestamp, watts), resamples to
/// `total_slots` rows by averaging equal blocks (row count must be a
/// multiple of the slot count) and rescales linearly so the maximum maps
/// to `peak_watts`. Throws std::runtime_error on malformed rows,
/// non-increasing first columns, an all-zero profile or a row count that
/// cannot be resampled.
SolarProfile load_solar(const std::string& path, int total_slots, double peak_watts);

/// Clear-sky synthetic day: zero outside [sunrise, sunset], a smooth bell
/// peaking at `peak_watts` in between. Defaults put daylight at
/// slots 360..1080 of a 1440-slot day, scaled proportionally otherwise.
SolarProfile synthetic_solar(int total_slots, double peak_watts);

/// Per-slot multiplicative deviation within [1 - pct/100, 1 + pct/100].
/// Where the predicted profile is rising or falling the multiplier is
/// drawn from the upper half of the band (the real profile climbs faster
/// and decays slower than the prediction); flat stretches draw from the
/// full band. Clamped to [0, max_power]. solar_pct == 0 returns the
/// prediction unchanged.
SolarProfile derive_actual_solar(const SolarProfile& predicted, const DeviationSpec& deviation,
                                 const EsConfig& cfg);

/// Keeps a uniformly chosen (100 - task_pct)% of the predicted tasks
/// unchanged and replaces the rest with fresh tasks at the same arrival
/// slots (new ids, resampled utilization/deadline/revenue drawn per
/// `spec` and `util_scale`).
std::vector<Task> derive_actual_tasks(const std::vector<Task>& predicted, const GenSpec& spec,
                                      double util_scale, const DeviationSpec& deviation);

/// Multiplies the solar of round(rate_pct% * slots) randomly chosen slots
/// by `drop_factor`.
SolarProfile inject_solar_spikes(const SolarProfile& predicted, double rate_pct,
                                 double drop_factor, std::uint64_t seed);

/// Adds a burst of fresh tasks at round(rate_pct% * slots) randomly chosen
/// slots: each spiked slot gains burst_factor times its predicted arrival
/// count. Fresh tasks use ids above every existing one.
std::vector<Task> inject_task_spikes(const std::vector<Task>& tasks, const GenSpec& spec,
                                     double util_scale, double rate_pct, double burst_factor,
                                     std::uint64_t seed);

/// Number of slots touched by a spike rate over a horizon (rounded).
int spike_slot_count(int total_slots, double rate_pct);

} // namespace solsched

#endif // SOLSCHED_WORKLOAD_HPP
