#ifndef SOLSCHED_OFFLINE_HPP
#define SOLSCHED_OFFLINE_HPP

#include "solsched/model.hpp"

#include <cstdint>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

// Offline heuristics. All three start from the reverse-sweep no-battery
// schedule; the battery variants then iteratively drop low-revenue tasks
// at the most loaded slot and re-execute queued tasks at lightly loaded
// later slots, funding them with the freed power. Because the power curve
// is strictly convex, shifting load from busy to idle slots lowers total
// consumption and lets stored energy complete additional tasks.
//
// Determinism: ties on revenue break toward the smaller task id; ties on
// slot load break toward the earlier slot. Identical instances therefore
// produce bit-identical schedules.

namespace solsched {

/// Mutable bookkeeping shared by the offline schedulers: per-slot
/// executed-task sets, per-slot utilization and the induced power/battery
/// trajectories, and the queue of not-yet-scheduled tasks ordered by
/// revenue. All values are recomputed canonically after each mutation, so
/// a drop followed by re-execution restores the state bit for bit.
class SchedulerState {
  public:
    /// `effective_battery` overrides the instance's battery capacity for
    /// capacity computations (the no-battery sweep passes 0).
    SchedulerState(const Instance& instance, double effective_battery);

    /// Switches the capacity used for the battery trajectory and
    /// recomputes it (the battery loops run the no-battery sweep first,
    /// then continue under the real capacity).
    void set_effective_battery(double capacity);

    /// Executes `task_id` at `slot` when the added utilization fits under
    /// the slot's usable capacity. Returns whether the task was placed.
    /// Throws std::invalid_argument when the slot lies outside the task's
    /// window, std::logic_error when the task is not queued.
    bool try_execute(std::int64_t task_id, int slot);

    /// Removes an executed task from `slot`, returns it to the queue and
    /// reports the power freed at that slot. Throws std::logic_error when
    /// the task is not executed there.
    double drop_task(std::int64_t task_id, int slot);

    /// Usable utilization at `slot` under the current power plan:
    /// min(max_util, inverse-power of solar + stored charge).
    double usable_cap(int slot) const;

    double slot_util(int slot) const { return util_[static_cast<std::size_t>(slot)]; }
    double slot_power(int slot) const;
    double slot_battery(int slot) const { return battery_[static_cast<std::size_t>(slot)]; }
    int executed_count(int slot) const;

    /// Lowest-revenue task executed at `slot`, or -1 when the slot is empty.
    std::int64_t min_revenue_executed(int slot) const;

    /// Queued tasks whose window covers `slot`, highest revenue first.
    std::vector<std::int64_t> queued_available(int slot) const;

    bool queued(std::int64_t task_id) const;
    const Task& task(std::int64_t task_id) const;
    double total_revenue() const;
    Assignment assignment() const;
    const Instance& instance() const { return *instance_; }
    int total_slots() const { return instance_->total_slots; }

  private:
    struct ByRevenueDescIdAsc {
        bool operator()(const std::pair<double, std::int64_t>& a,
                        const std::pair<double, std::int64_t>& b) const {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        }
    };
    using RevenueQueue = std::set<std::pair<double, std::int64_t>, ByRevenueDescIdAsc>;

    void recompute_slot_util(int slot);
    void recompute_battery_from(int slot);

    const Instance* instance_;
    double effective_battery_;
    std::unordered_map<std::int64_t, const Task*> tasks_by_id_;
    std::vector<std::set<std::int64_t>> executed_; // per slot, ascending id (canonical sums)
    RevenueQueue queue_;                           // unscheduled tasks, highest revenue first
    std::vector<RevenueQueue> available_;          // queue members indexed by coverable slot
    std::vector<double> util_;
    std::vector<double> battery_;
};

/// Reverse-sweep heuristic for the no-battery problem: walks slots from
/// the horizon back to slot 1 and at each slot tries every window-eligible
/// queued task in revenue order. Stored energy is ignored; the output
/// never consumes more than the same slot's solar.
Schedule schedule_no_battery(const Instance& instance);

/// Improvement loop for an unbounded battery. Each round drops the
/// cheapest task at the fullest slot and re-executes queued tasks at the
/// emptiest later slots while the freed power lasts; a round is kept only
/// when total revenue strictly increases, otherwise it is rolled back and
/// the loop stops. Requires instance.config.battery_capacity == infinity.
Schedule schedule_infinite_battery(const Instance& instance);

/// Improvement loop for a finite battery. Power is shifted from the peak
/// slot to the next later slot running below the initial average power,
/// bounded by the battery headroom over the storage interval. Requires a
/// finite battery capacity.
Schedule schedule_finite_battery(const Instance& instance);

/// Dispatch on battery capacity: zero -> no-battery sweep, infinite ->
/// infinite-battery loop, otherwise the finite-battery loop.
Schedule schedule_offline(const Instance& instance);

} // namespace solsched

#endif // SOLSCHED_OFFLINE_HPP
