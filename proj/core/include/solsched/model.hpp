#ifndef SOLSCHED_MODEL_HPP
#define SOLSCHED_MODEL_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

// Domain types and the power/revenue formulas shared by every scheduler.
//
// Conventions used throughout the library:
//  - timeslots are 1-based: valid slots are 1..total_slots;
//  - per-slot vectors are sized total_slots + 1 and index 0 is unused;
//  - an infinite battery is encoded as battery capacity = +infinity.

namespace solsched {

/// Sentinel encoding an unbounded battery.
inline constexpr double kInfiniteBattery = std::numeric_limits<double>::infinity();

/// Absolute slack used by the feasibility validator when comparing
/// recomputed floating-point trajectories against their bounds. Scheduler
/// admission checks are exact; the validator tolerates summation-order
/// noise far below any real violation (task utilizations are macroscopic).
inline constexpr double kFeasibilityTolerance = 1e-6;

/// One offloadable job. `exec_slots` is fixed to 1 by the generators in
/// this work but carried explicitly. `vehicle_tag` is an opaque label of
/// the producing vehicle; scheduling never reads it.
struct Task {
    std::int64_t id = 0;
    int arrival = 1;      ///< first slot the task may run in
    int exec_slots = 1;   ///< slots of execution once started
    int deadline = 2;     ///< slot by which execution must complete
    double util = 1.0;    ///< cores demanded while running
    double revenue = 0.0; ///< payout on completion within the deadline
    std::int64_t vehicle_tag = 0;

    bool operator==(const Task&) const = default;
};

/// Last slot a task may start in and still meet its deadline.
inline int latest_start(const Task& t) { return t.deadline - t.exec_slots + 1; }

/// Whether `slot` lies in the task's execution window [arrival, latest_start].
inline bool window_contains(const Task& t, int slot) {
    return slot >= t.arrival && slot <= latest_start(t);
}

/// Static parameters of one edge server.
struct EsConfig {
    double static_power = 20.0;     ///< draw when powered on, watts
    double max_power = 2000.0;      ///< draw at full utilization, watts
    double max_util = 100.0;        ///< total cores
    double battery_capacity = 0.0;  ///< watt-slots; kInfiniteBattery for unbounded

    bool infinite_battery() const { return battery_capacity == kInfiniteBattery; }
};

/// Harvested power per slot.
struct SolarProfile {
    std::vector<double> watts; ///< watts[t] for t in 1..size; watts[0] unused

    int total_slots() const { return static_cast<int>(watts.size()) - 1; }
    double at(int slot) const { return watts[static_cast<std::size_t>(slot)]; }

    static SolarProfile zeros(int total_slots) {
        SolarProfile p;
        p.watts.assign(static_cast<std::size_t>(total_slots) + 1, 0.0);
        return p;
    }
};

/// A complete single-server scheduling problem.
struct Instance {
    EsConfig config;
    SolarProfile solar;
    std::vector<Task> tasks;
    int total_slots = 0;

    const Task* find_task(std::int64_t id) const;
};

/// Throws std::invalid_argument if the instance violates its structural
/// invariants (task windows inside the horizon, utilizations in range,
/// solar within [0, max_power], consistent config).
void check_instance(const Instance& instance);

/// Map task id -> executed slot. A task absent from the map was dropped.
using Assignment = std::map<std::int64_t, int>;

/// A scheduler's output: the assignment plus the trajectories it induces.
/// All derived fields are canonical functions of the assignment (see
/// schedule_from_assignment); validators recompute and compare them.
struct Schedule {
    Assignment assignment;
    std::vector<double> util;    ///< cores used per slot
    std::vector<double> power;   ///< watts consumed per slot
    std::vector<double> battery; ///< charge at slot start, watt-slots
    double revenue = 0.0;
};

/// Revenue of completing a task with utilization `util`, arriving at
/// `arrival` and due at `deadline`: util^2 / (1 + (deadline - arrival)^2).
/// Throws std::invalid_argument for util <= 0 or deadline < arrival.
double revenue_of(double util, int arrival, int deadline);

/// Power drawn when running `util` cores: 0 when idle (the server is
/// gated off), otherwise static_power plus the cubic dynamic term.
/// Exactly max_power at util == max_util. Throws std::invalid_argument
/// for util outside [0, max_util].
double power_of(double util, const EsConfig& cfg);

/// Inverse of the cubic branch: the utilization sustainable at `power`
/// watts. 0 at or below static power; clamped to max_util above
/// max_power. Continuous and monotone non-decreasing; never throws.
double utilization_of(double power, const EsConfig& cfg);

/// Utilization ceiling at a slot funded by `solar` plus `stored` charge.
double usable_utilization(double solar, double stored, const EsConfig& cfg);

/// Builds the canonical Schedule for an assignment: per-slot utilization
/// summed in ascending task-id order, gated power, the battery recurrence
/// (charge starts at 0, surplus stored up to capacity), total revenue.
/// Throws std::invalid_argument if an assigned id is unknown.
Schedule schedule_from_assignment(const Instance& instance, const Assignment& assignment);

/// One violated constraint. `constraint` is a stable code:
///   unknown-task, slot-range, window, utilization-cap, power-cap,
///   battery-trajectory, battery-range, stored-utilization-mismatch,
///   stored-power-mismatch, stored-battery-mismatch, revenue-mismatch.
struct ValidationIssue {
    std::string constraint;
    int slot = 0;              ///< 0 when not slot-specific
    std::int64_t task_id = -1; ///< -1 when not task-specific
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    double recomputed_revenue = 0.0;

    bool accepted() const { return issues.empty(); }
    std::string summary(std::size_t max_issues = 8) const;
};

/// Recomputes every trajectory from the assignment alone and checks each
/// schedule invariant against the instance. Violations are data, not
/// errors: the report lists them with slot/task identifiers.
ValidationReport validate(const Schedule& schedule, const Instance& instance);

} // namespace solsched

#endif // SOLSCHED_MODEL_HPP
