#include "solsched/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>
#include <vector>

namespace solsched {

BaselinePolicy baseline_policy_from_string(const std::string& name) {
    std::string lower;
    lower.reserve(name.size());
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "npedf") return BaselinePolicy::Npedf;
    if (lower == "asap-huf" || lower == "huf") return BaselinePolicy::AsapHuf;
    if (lower == "asap-luf" || lower == "luf") return BaselinePolicy::AsapLuf;
    if (lower == "ea") return BaselinePolicy::ExecuteOnArrival;
    throw std::invalid_argument("unknown baseline policy '" + name +
                                "' (expected npedf | asap-huf | asap-luf | ea)");
}

std::string to_string(BaselinePolicy policy) {
    switch (policy) {
    case BaselinePolicy::Npedf: return "npedf";
    case BaselinePolicy::AsapHuf: return "asap-huf";
    case BaselinePolicy::AsapLuf: return "asap-luf";
    case BaselinePolicy::ExecuteOnArrival: return "ea";
    }
    return "?";
}

namespace {

// Pending tasks keep a static sort key per policy: slack ordering by
// deadline (the -t term is common to every pending task at a slot),
// utilization up or down, or revenue for execute-on-arrival. Ties break
// toward the smaller id.
struct PendingKey {
    double primary = 0.0;
    std::int64_t id = 0;
    bool operator<(const PendingKey& other) const {
        if (primary != other.primary) return primary < other.primary;
        return id < other.id;
    }
};

PendingKey key_for(const Task& t, BaselinePolicy policy) {
    switch (policy) {
    case BaselinePolicy::Npedf: return {static_cast<double>(t.deadline), t.id};
    case BaselinePolicy::AsapHuf: return {-t.util, t.id};
    case BaselinePolicy::AsapLuf: return {t.util, t.id};
    case BaselinePolicy::ExecuteOnArrival: return {-t.revenue, t.id};
    }
    return {0.0, t.id};
}

} // namespace

Schedule run_baseline(const Instance& instance, BaselinePolicy policy) {
    const EsConfig& cfg = instance.config;
    const int total = instance.total_slots;

    std::vector<std::vector<const Task*>> arriving(static_cast<std::size_t>(total) + 1);
    for (const Task& t : instance.tasks) arriving[static_cast<std::size_t>(t.arrival)].push_back(&t);

    std::map<PendingKey, const Task*> pending;
    Assignment assignment;
    double battery = 0.0;

    for (int t = 1; t <= total; ++t) {
        for (const Task* task : arriving[static_cast<std::size_t>(t)])
            pending.emplace(key_for(*task, policy), task);

        const double cap = usable_utilization(instance.solar.at(t), battery, cfg);
        double util = 0.0;
        bool busy = false;
        for (auto it = pending.begin(); it != pending.end();) {
            const Task* task = it->second;
            if (latest_start(*task) < t) { // window closed while pending
                it = pending.erase(it);
                continue;
            }
            if (util + task->util <= cap) {
                assignment.emplace(task->id, t);
                util += task->util;
                busy = true;
                it = pending.erase(it);
                continue;
            }
            if (policy == BaselinePolicy::ExecuteOnArrival) {
                it = pending.erase(it); // no deferral: drop on the spot
                continue;
            }
            ++it; // carried while the window stays open
        }

        const double power = busy ? power_of(std::min(util, cfg.max_util), cfg) : 0.0;
        battery = std::min(cfg.battery_capacity, battery + instance.solar.at(t) - power);
    }
    return schedule_from_assignment(instance, assignment);
}

} // namespace solsched
