#include "solsched/online.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace solsched {

namespace {

struct HeapEntry {
    double revenue = 0.0;
    std::int64_t id = 0;
};

struct MinByRevenue {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.revenue != b.revenue) return a.revenue > b.revenue; // smallest on top
        return a.id > b.id;
    }
};

struct MaxByRevenue {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.revenue != b.revenue) return a.revenue < b.revenue; // largest on top
        return a.id > b.id; // smaller id wins ties
    }
};

using ExecHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, MinByRevenue>;
using WaitHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, MaxByRevenue>;

} // namespace

OnlineResult run_online(const OnlineContext& context) {
    const Instance& predicted = *context.predicted;
    const Instance& actual = *context.actual;
    const Schedule& plan = *context.offline_schedule;
    if (predicted.total_slots != actual.total_slots)
        throw std::invalid_argument("predicted and actual horizons differ");
    const EsConfig& cfg = actual.config;
    if (cfg.battery_capacity != predicted.config.battery_capacity)
        throw std::invalid_argument("predicted and actual battery capacities differ");
    const int total = actual.total_slots;

    std::unordered_map<std::int64_t, const Task*> actual_by_id;
    actual_by_id.reserve(actual.tasks.size());
    for (const Task& t : actual.tasks) actual_by_id.emplace(t.id, &t);

    // Planned tasks grouped by their offline slot; only those that really
    // arrive are committed. Every arriving task without a planned slot
    // joins the waiting queue the moment it arrives.
    std::vector<std::vector<const Task*>> planned_at(static_cast<std::size_t>(total) + 1);
    std::unordered_set<std::int64_t> planned_ids;
    planned_ids.reserve(plan.assignment.size());
    for (const auto& [id, slot] : plan.assignment) {
        planned_ids.insert(id);
        auto it = actual_by_id.find(id);
        if (it != actual_by_id.end())
            planned_at[static_cast<std::size_t>(slot)].push_back(it->second);
    }
    std::vector<std::vector<const Task*>> arriving(static_cast<std::size_t>(total) + 1);
    for (const Task& t : actual.tasks)
        arriving[static_cast<std::size_t>(t.arrival)].push_back(&t);

    // Planned power per slot from the *predicted* task data: the anchor of
    // the admission budget.
    std::vector<double> planned_power(static_cast<std::size_t>(total) + 1, 0.0);
    {
        std::unordered_map<std::int64_t, const Task*> predicted_by_id;
        predicted_by_id.reserve(predicted.tasks.size());
        for (const Task& t : predicted.tasks) predicted_by_id.emplace(t.id, &t);
        std::vector<double> planned_util(static_cast<std::size_t>(total) + 1, 0.0);
        std::vector<bool> planned_busy(static_cast<std::size_t>(total) + 1, false);
        for (const auto& [id, slot] : plan.assignment) {
            planned_util[static_cast<std::size_t>(slot)] += predicted_by_id.at(id)->util;
            planned_busy[static_cast<std::size_t>(slot)] = true;
        }
        for (int t = 1; t <= total; ++t)
            planned_power[static_cast<std::size_t>(t)] =
                planned_busy[static_cast<std::size_t>(t)]
                    ? power_of(std::min(planned_util[static_cast<std::size_t>(t)], cfg.max_util),
                               cfg)
                    : 0.0;
    }

    WaitHeap waiting;
    std::unordered_set<std::int64_t> waiting_live; // ids currently poppable
    auto push_waiting = [&](const Task& t) {
        waiting.push({t.revenue, t.id});
        waiting_live.insert(t.id);
    };

    OnlineResult result;
    result.trace.reserve(static_cast<std::size_t>(total));
    Assignment assignment;
    double battery = 0.0;
    double revenue_cum = 0.0;

    for (int t = 1; t <= total; ++t) {
        OnlineTraceRow row;
        row.slot = t;
        row.solar_predicted = predicted.solar.at(t);
        row.solar_actual = actual.solar.at(t);
        row.battery = battery;

        for (const Task* task : arriving[static_cast<std::size_t>(t)]) {
            if (!planned_ids.count(task->id)) push_waiting(*task);
        }

        // Commit the planned tasks that actually arrived.
        ExecHeap committed;
        std::vector<const Task*> committed_tasks;
        double util = 0.0;
        std::unordered_map<std::int64_t, const Task*> committed_by_id;
        for (const Task* task : planned_at[static_cast<std::size_t>(t)]) {
            committed.push({task->revenue, task->id});
            committed_by_id.emplace(task->id, task);
            util += task->util;
        }
        auto current_power = [&]() {
            return committed_by_id.empty() ? 0.0
                                           : power_of(std::min(util, cfg.max_util), cfg);
        };

        const double solar_surplus = std::max(0.0, row.solar_actual - row.solar_predicted);
        const double budget =
            std::min(row.solar_actual + battery,
                     planned_power[static_cast<std::size_t>(t)] + solar_surplus);

        // Shortfall: push the cheapest committed tasks back to the queue
        // until the slot's power need fits the budget.
        while (!committed.empty() && current_power() > budget) {
            const HeapEntry evicted = committed.top();
            committed.pop();
            const Task* task = committed_by_id.at(evicted.id);
            committed_by_id.erase(evicted.id);
            util -= task->util;
            if (committed_by_id.empty()) util = 0.0;
            push_waiting(*task);
            ++row.evictions;
        }

        // Headroom: admit the dearest waiting tasks that fit. Entries whose
        // windows have closed are discarded lazily; entries that do not fit
        // right now are set aside and restored afterwards.
        std::vector<HeapEntry> misfits;
        const double util_budget = std::min(cfg.max_util, utilization_of(budget, cfg));
        while (!waiting.empty()) {
            if (util >= util_budget) break;
            const HeapEntry top = waiting.top();
            waiting.pop();
            if (!waiting_live.count(top.id)) continue; // superseded entry
            const Task* task = actual_by_id.at(top.id);
            if (latest_start(*task) < t) {
                waiting_live.erase(top.id); // window closed, dropped for good
                continue;
            }
            if (!window_contains(*task, t)) { // not yet startable (defensive)
                misfits.push_back(top);
                continue;
            }
            const double would = util + task->util;
            const double power_after = power_of(std::min(would, cfg.max_util), cfg);
            if (would <= util_budget && power_after <= budget) {
                committed.push(top);
                committed_by_id.emplace(task->id, task);
                util = would;
                waiting_live.erase(top.id);
                ++row.admissions;
            } else {
                misfits.push_back(top);
            }
        }
        for (const HeapEntry& entry : misfits) waiting.push(entry);

        // Book the slot.
        for (const auto& [id, task] : committed_by_id) {
            assignment.emplace(id, t);
            revenue_cum += task->revenue;
        }
        row.committed = static_cast<int>(committed_by_id.size());
        row.power = current_power();
        battery = std::min(cfg.battery_capacity, battery + row.solar_actual - row.power);
        row.revenue_cum = revenue_cum;
        result.metrics.evictions += row.evictions;
        result.metrics.admissions += row.admissions;
        result.trace.push_back(row);
    }

    result.schedule = schedule_from_assignment(actual, assignment);
    result.metrics.revenue = result.schedule.revenue;
    result.metrics.offline_revenue = plan.revenue;
    result.metrics.revenue_pct =
        plan.revenue > 0.0 ? 100.0 * result.schedule.revenue / plan.revenue : 100.0;
    result.metrics.completed = static_cast<int>(assignment.size());
    result.metrics.dropped = static_cast<int>(actual.tasks.size() - assignment.size());
    return result;
}

} // namespace solsched
