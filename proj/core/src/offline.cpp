#include "solsched/offline.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace solsched {

SchedulerState::SchedulerState(const Instance& instance, double effective_battery)
    : instance_(&instance), effective_battery_(effective_battery) {
    const std::size_t slots = static_cast<std::size_t>(instance.total_slots) + 1;
    executed_.assign(slots, {});
    available_.assign(slots, {});
    util_.assign(slots, 0.0);
    battery_.assign(slots, 0.0);
    tasks_by_id_.reserve(instance.tasks.size());
    for (const Task& task : instance.tasks) {
        tasks_by_id_.emplace(task.id, &task);
        queue_.insert({task.revenue, task.id});
        const int last = std::min(latest_start(task), instance.total_slots);
        for (int t = task.arrival; t <= last; ++t)
            available_[static_cast<std::size_t>(t)].insert({task.revenue, task.id});
    }
}

void SchedulerState::set_effective_battery(double capacity) {
    effective_battery_ = capacity;
    recompute_battery_from(2);
}

const Task& SchedulerState::task(std::int64_t task_id) const {
    auto it = tasks_by_id_.find(task_id);
    if (it == tasks_by_id_.end())
        throw std::invalid_argument("unknown task id " + std::to_string(task_id));
    return *it->second;
}

bool SchedulerState::queued(std::int64_t task_id) const {
    const Task& t = task(task_id);
    return queue_.count({t.revenue, t.id}) != 0;
}

double SchedulerState::slot_power(int slot) const {
    const auto si = static_cast<std::size_t>(slot);
    return executed_[si].empty() ? 0.0 : power_of(util_[si], instance_->config);
}

int SchedulerState::executed_count(int slot) const {
    return static_cast<int>(executed_[static_cast<std::size_t>(slot)].size());
}

double SchedulerState::usable_cap(int slot) const {
    return usable_utilization(instance_->solar.at(slot),
                              battery_[static_cast<std::size_t>(slot)], instance_->config);
}

void SchedulerState::recompute_slot_util(int slot) {
    const auto si = static_cast<std::size_t>(slot);
    double sum = 0.0;
    for (std::int64_t id : executed_[si]) sum += tasks_by_id_.at(id)->util;
    util_[si] = sum;
}

void SchedulerState::recompute_battery_from(int slot) {
    for (int t = std::max(2, slot); t <= instance_->total_slots; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        battery_[ti] = std::min(effective_battery_,
                                battery_[ti - 1] + instance_->solar.at(t - 1) - slot_power(t - 1));
    }
}

bool SchedulerState::try_execute(std::int64_t task_id, int slot) {
    const Task& t = task(task_id);
    if (!window_contains(t, slot) || slot > instance_->total_slots)
        throw std::invalid_argument("slot " + std::to_string(slot) +
                                    " outside the window of task " + std::to_string(task_id));
    if (!queue_.count({t.revenue, t.id}))
        throw std::logic_error("task " + std::to_string(task_id) + " is not queued");

    const auto si = static_cast<std::size_t>(slot);
    if (util_[si] + t.util > usable_cap(slot)) return false;

    queue_.erase({t.revenue, t.id});
    const int last = std::min(latest_start(t), instance_->total_slots);
    for (int s = t.arrival; s <= last; ++s)
        available_[static_cast<std::size_t>(s)].erase({t.revenue, t.id});
    executed_[si].insert(task_id);
    recompute_slot_util(slot);
    recompute_battery_from(slot + 1);
    return true;
}

double SchedulerState::drop_task(std::int64_t task_id, int slot) {
    const Task& t = task(task_id);
    const auto si = static_cast<std::size_t>(slot);
    if (!executed_[si].count(task_id))
        throw std::logic_error("task " + std::to_string(task_id) + " is not executed at slot " +
                               std::to_string(slot));
    const double power_before = slot_power(slot);
    executed_[si].erase(task_id);
    recompute_slot_util(slot);
    const double freed = power_before - slot_power(slot);

    queue_.insert({t.revenue, t.id});
    const int last = std::min(latest_start(t), instance_->total_slots);
    for (int s = t.arrival; s <= last; ++s)
        available_[static_cast<std::size_t>(s)].insert({t.revenue, t.id});
    recompute_battery_from(slot + 1);
    return freed;
}

std::int64_t SchedulerState::min_revenue_executed(int slot) const {
    const auto& ids = executed_[static_cast<std::size_t>(slot)];
    std::int64_t best = -1;
    double best_revenue = 0.0;
    for (std::int64_t id : ids) {
        const double r = tasks_by_id_.at(id)->revenue;
        if (best == -1 || r < best_revenue) {
            best = id;
            best_revenue = r;
        }
    }
    return best;
}

std::vector<std::int64_t> SchedulerState::queued_available(int slot) const {
    std::vector<std::int64_t> out;
    const auto& avail = available_[static_cast<std::size_t>(slot)];
    out.reserve(avail.size());
    for (const auto& [revenue, id] : avail) out.push_back(id);
    return out;
}

double SchedulerState::total_revenue() const {
    double sum = 0.0;
    for (const auto& [id, slot] : assignment()) sum += tasks_by_id_.at(id)->revenue;
    return sum;
}

Assignment SchedulerState::assignment() const {
    Assignment a;
    for (int t = 1; t <= instance_->total_slots; ++t)
        for (std::int64_t id : executed_[static_cast<std::size_t>(t)]) a.emplace(id, t);
    return a;
}

namespace {

// Walks slots from the horizon backwards; at each slot every window-
// eligible queued task is tried in revenue order. A task enters the
// eligible set at its latest start and leaves once the sweep passes its
// arrival, so each task is scanned at most once per window slot.
void reverse_sweep(SchedulerState& state) {
    const Instance& instance = state.instance();
    const int total = instance.total_slots;
    std::vector<std::vector<std::int64_t>> entering(static_cast<std::size_t>(total) + 1);
    for (const Task& task : instance.tasks) {
        const int entry = std::min(latest_start(task), total);
        entering[static_cast<std::size_t>(entry)].push_back(task.id);
    }
    std::set<std::pair<double, std::int64_t>,
             std::greater<std::pair<double, std::int64_t>>>
        eligible_raw;
    // (revenue desc, id desc) would break ties the wrong way; order pairs
    // as (revenue, -id) so reverse ordering yields id-ascending ties.
    auto key = [&state](std::int64_t id) {
        return std::make_pair(state.task(id).revenue, -id);
    };
    for (int t = total; t >= 1; --t) {
        for (std::int64_t id : entering[static_cast<std::size_t>(t)]) eligible_raw.insert(key(id));
        std::vector<std::int64_t> round;
        round.reserve(eligible_raw.size());
        for (const auto& [revenue, neg_id] : eligible_raw) round.push_back(-neg_id);
        for (std::int64_t id : round) {
            if (state.try_execute(id, t)) eligible_raw.erase(key(id));
        }
        // tasks arriving at t are no longer eligible below t
        for (auto it = eligible_raw.begin(); it != eligible_raw.end();) {
            if (state.task(-it->second).arrival == t)
                it = eligible_raw.erase(it);
            else
                ++it;
        }
    }
}

// Forward admission pass run once the battery trajectory is live: queued
// tasks are placed wherever the charge the base sweep left stranded (it
// never looks past same-slot solar) already funds them. Every admission
// re-derives the trajectory, and base commitments never lean on stored
// charge, so the pass cannot invalidate a later slot.
void stored_surplus_admission(SchedulerState& state) {
    for (int t = 1; t <= state.total_slots(); ++t) {
        while (true) {
            bool admitted = false;
            for (std::int64_t id : state.queued_available(t)) {
                if (state.try_execute(id, t)) {
                    admitted = true;
                    break;
                }
            }
            if (!admitted) break;
        }
    }
}

struct RoundLog {
    std::vector<std::pair<std::int64_t, int>> dropped;  // (task, slot) in order
    std::vector<std::pair<std::int64_t, int>> executed; // (task, slot) in order
    double revenue_dropped = 0.0;
    double revenue_added = 0.0;
};

void revert_round(SchedulerState& state, const RoundLog& log) {
    for (auto it = log.executed.rbegin(); it != log.executed.rend(); ++it)
        state.drop_task(it->first, it->second);
    for (auto it = log.dropped.rbegin(); it != log.dropped.rend(); ++it) {
        const bool placed = state.try_execute(it->first, it->second);
        assert(placed);
        (void)placed;
    }
}

// Most loaded slot holding at least one task; ties break to the earlier
// slot. Returns 0 when nothing is scheduled anywhere.
int busiest_slot(const SchedulerState& state, const std::vector<bool>* excluded = nullptr) {
    int best = 0;
    for (int t = 1; t <= state.total_slots(); ++t) {
        if (state.executed_count(t) == 0) continue;
        if (excluded && (*excluded)[static_cast<std::size_t>(t)]) continue;
        if (best == 0 || state.slot_util(t) > state.slot_util(best)) best = t;
    }
    return best;
}

// Executes the highest-revenue queued task available at `slot` whose
// utilization fits the slot's usable capacity and whose power increment
// fits `budget`. Returns the measured power increment, or 0 when nothing
// fits.
double refill_one(SchedulerState& state, int slot, double budget, RoundLog& log) {
    const double power_before = state.slot_power(slot);
    for (std::int64_t id : state.queued_available(slot)) {
        const Task& task = state.task(id);
        const double predicted =
            power_of(std::min(state.slot_util(slot) + task.util, state.instance().config.max_util),
                     state.instance().config) -
            power_before;
        if (predicted > budget) continue;
        if (!state.try_execute(id, slot)) continue;
        log.executed.emplace_back(id, slot);
        log.revenue_added += task.revenue;
        return state.slot_power(slot) - power_before;
    }
    return 0.0;
}

} // namespace

Schedule schedule_no_battery(const Instance& instance) {
    SchedulerState state(instance, 0.0);
    reverse_sweep(state);
    return schedule_from_assignment(instance, state.assignment());
}

Schedule schedule_infinite_battery(const Instance& instance) {
    if (!instance.config.infinite_battery())
        throw std::invalid_argument("schedule_infinite_battery requires an infinite battery");
    SchedulerState state(instance, 0.0);
    reverse_sweep(state);
    state.set_effective_battery(kInfiniteBattery);
    stored_surplus_admission(state);

    const int total = instance.total_slots;
    while (true) {
        const int t_peak = busiest_slot(state);
        if (t_peak == 0) break;

        RoundLog log;
        const std::int64_t drop_id = state.min_revenue_executed(t_peak);
        double freed = state.drop_task(drop_id, t_peak);
        log.dropped.emplace_back(drop_id, t_peak);
        log.revenue_dropped = state.task(drop_id).revenue;

        std::vector<bool> exhausted(static_cast<std::size_t>(total) + 1, false);
        while (freed > 0.0) {
            int t_fill = 0;
            for (int t = t_peak + 1; t <= total; ++t) {
                if (exhausted[static_cast<std::size_t>(t)]) continue;
                if (t_fill == 0 || state.slot_util(t) < state.slot_util(t_fill)) t_fill = t;
            }
            if (t_fill == 0) break; // leftover power stays in the battery
            const double spent = refill_one(state, t_fill, freed, log);
            if (spent > 0.0)
                freed -= spent;
            else
                exhausted[static_cast<std::size_t>(t_fill)] = true;
        }

        if (!(log.revenue_added > log.revenue_dropped)) {
            revert_round(state, log);
            break;
        }
    }
    return schedule_from_assignment(instance, state.assignment());
}

Schedule schedule_finite_battery(const Instance& instance) {
    const double capacity = instance.config.battery_capacity;
    if (!(capacity >= 0.0) || instance.config.infinite_battery())
        throw std::invalid_argument("schedule_finite_battery requires a finite battery");
    SchedulerState state(instance, 0.0);
    reverse_sweep(state);
    state.set_effective_battery(capacity);
    stored_surplus_admission(state);

    const int total = instance.total_slots;
    double average_power = 0.0;
    for (int t = 1; t <= total; ++t) average_power += state.slot_power(t);
    average_power /= static_cast<double>(total);

    while (true) {
        // Locate a peak slot and the first later slot running below the
        // average; peaks with no such partner are set aside.
        std::vector<bool> marked(static_cast<std::size_t>(total) + 1, false);
        int t_peak = 0;
        int t_fill = 0;
        double move_quota = 0.0;
        while (true) {
            t_peak = 0;
            for (int t = 1; t <= total; ++t) {
                if (marked[static_cast<std::size_t>(t)] || state.executed_count(t) == 0) continue;
                if (t_peak == 0 || state.slot_power(t) > state.slot_power(t_peak)) t_peak = t;
            }
            if (t_peak == 0) return schedule_from_assignment(instance, state.assignment());

            t_fill = 0;
            for (int t = t_peak + 1; t <= total; ++t) {
                if (state.slot_power(t) < average_power) {
                    t_fill = t;
                    break;
                }
            }
            if (t_fill == 0) {
                marked[static_cast<std::size_t>(t_peak)] = true;
                continue;
            }
            double interval_peak_charge = 0.0;
            for (int t = t_peak + 1; t <= t_fill; ++t)
                interval_peak_charge = std::max(interval_peak_charge, state.slot_battery(t));
            move_quota = std::min({capacity - interval_peak_charge,
                                   state.slot_power(t_peak) - average_power,
                                   average_power - state.slot_power(t_fill)});
            break;
        }
        if (!(move_quota > 0.0)) return schedule_from_assignment(instance, state.assignment());

        RoundLog log;
        double quota = move_quota;
        while (quota > 0.0 && state.executed_count(t_peak) > 0) {
            const std::int64_t drop_id = state.min_revenue_executed(t_peak);
            const double freed = state.drop_task(drop_id, t_peak);
            log.dropped.emplace_back(drop_id, t_peak);
            log.revenue_dropped += state.task(drop_id).revenue;

            // Refills are capped by both the power this drop freed and the
            // remaining transfer quota; the quota keeps the moved energy
            // within the battery headroom measured over the interval.
            double spend = std::min(freed, quota);
            while (spend > 0.0) {
                const double spent = refill_one(state, t_fill, spend, log);
                if (spent <= 0.0) break;
                spend -= spent;
            }
            quota = std::max(0.0, quota - freed);
        }

        if (!(log.revenue_added > log.revenue_dropped)) {
            revert_round(state, log);
            return schedule_from_assignment(instance, state.assignment());
        }
    }
}

Schedule schedule_offline(const Instance& instance) {
    if (instance.config.battery_capacity == 0.0) return schedule_no_battery(instance);
    if (instance.config.infinite_battery()) return schedule_infinite_battery(instance);
    return schedule_finite_battery(instance);
}

} // namespace solsched
