#include "solsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace solsched {

const Task* Instance::find_task(std::int64_t id) const {
    for (const Task& t : tasks) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

void check_instance(const Instance& instance) {
    const EsConfig& cfg = instance.config;
    std::ostringstream err;
    if (!(cfg.static_power >= 0.0 && cfg.static_power < cfg.max_power))
        err << "config: require 0 <= static_power < max_power; ";
    if (!(cfg.max_util > 0.0)) err << "config: require max_util > 0; ";
    if (!(cfg.battery_capacity >= 0.0)) err << "config: require battery_capacity >= 0; ";
    if (instance.total_slots < 1) err << "total_slots must be >= 1; ";
    if (instance.solar.total_slots() != instance.total_slots)
        err << "solar profile length " << instance.solar.total_slots() << " != total_slots "
            << instance.total_slots << "; ";
    else {
        for (int t = 1; t <= instance.total_slots; ++t) {
            const double s = instance.solar.at(t);
            if (!(s >= 0.0 && s <= cfg.max_power)) {
                err << "solar[" << t << "]=" << s << " outside [0, max_power]; ";
                break;
            }
        }
    }
    std::unordered_map<std::int64_t, int> seen;
    for (const Task& task : instance.tasks) {
        if (++seen[task.id] == 2) err << "duplicate task id " << task.id << "; ";
        if (task.arrival < 1 || task.arrival > instance.total_slots)
            err << "task " << task.id << ": arrival outside horizon; ";
        if (task.exec_slots < 1) err << "task " << task.id << ": exec_slots < 1; ";
        if (task.deadline < task.arrival + task.exec_slots)
            err << "task " << task.id << ": deadline before arrival + exec_slots; ";
        if (!(task.util > 0.0 && task.util <= cfg.max_util))
            err << "task " << task.id << ": utilization outside (0, max_util]; ";
    }
    const std::string msg = err.str();
    if (!msg.empty()) throw std::invalid_argument("invalid instance: " + msg);
}

double revenue_of(double util, int arrival, int deadline) {
    if (util <= 0.0) throw std::invalid_argument("revenue_of: util must be > 0");
    if (deadline < arrival) throw std::invalid_argument("revenue_of: deadline before arrival");
    const double laxity = static_cast<double>(deadline - arrival);
    return util * util / (1.0 + laxity * laxity);
}

double power_of(double util, const EsConfig& cfg) {
    if (util < 0.0 || util > cfg.max_util)
        throw std::invalid_argument("power_of: util outside [0, max_util]");
    if (util == 0.0) return 0.0;              // server gated off when idle
    if (util == cfg.max_util) return cfg.max_power;
    const double ratio = util / cfg.max_util;
    return cfg.static_power + (cfg.max_power - cfg.static_power) * ratio * ratio * ratio;
}

double utilization_of(double power, const EsConfig& cfg) {
    if (power <= cfg.static_power) return 0.0;
    if (power >= cfg.max_power) return cfg.max_util;
    const double ratio = (power - cfg.static_power) / (cfg.max_power - cfg.static_power);
    return std::min(cfg.max_util, cfg.max_util * std::cbrt(ratio));
}

double usable_utilization(double solar, double stored, const EsConfig& cfg) {
    return std::min(cfg.max_util, utilization_of(solar + stored, cfg));
}

namespace {

// Utilization per slot summed in ascending id order; Assignment is an
// ordered map, so one pass is already canonical.
std::vector<double> canonical_util(const Instance& instance, const Assignment& assignment) {
    std::vector<double> util(static_cast<std::size_t>(instance.total_slots) + 1, 0.0);
    std::unordered_map<std::int64_t, const Task*> by_id;
    by_id.reserve(instance.tasks.size());
    for (const Task& t : instance.tasks) by_id.emplace(t.id, &t);
    for (const auto& [id, slot] : assignment) {
        auto it = by_id.find(id);
        if (it == by_id.end())
            throw std::invalid_argument("assignment references unknown task id " +
                                        std::to_string(id));
        if (slot < 1 || slot > instance.total_slots)
            throw std::invalid_argument("assignment slot outside horizon for task id " +
                                        std::to_string(id));
        util[static_cast<std::size_t>(slot)] += it->second->util;
    }
    return util;
}

} // namespace

Schedule schedule_from_assignment(const Instance& instance, const Assignment& assignment) {
    Schedule s;
    s.assignment = assignment;
    s.util = canonical_util(instance, assignment);

    std::vector<bool> occupied(static_cast<std::size_t>(instance.total_slots) + 1, false);
    for (const auto& [id, slot] : assignment) occupied[static_cast<std::size_t>(slot)] = true;

    const EsConfig& cfg = instance.config;
    s.power.assign(s.util.size(), 0.0);
    s.battery.assign(s.util.size(), 0.0);
    for (int t = 1; t <= instance.total_slots; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        const double u = std::min(s.util[ti], cfg.max_util);
        s.power[ti] = occupied[ti] ? power_of(u, cfg) : 0.0;
        if (t < instance.total_slots) {
            const double next = s.battery[ti] + instance.solar.at(t) - s.power[ti];
            s.battery[ti + 1] = std::min(cfg.battery_capacity, next);
        }
    }
    std::unordered_map<std::int64_t, const Task*> by_id;
    for (const Task& t : instance.tasks) by_id.emplace(t.id, &t);
    s.revenue = 0.0;
    for (const auto& [id, slot] : assignment) s.revenue += by_id.at(id)->revenue;
    return s;
}

std::string ValidationReport::summary(std::size_t max_issues) const {
    if (accepted()) return "ACCEPTED";
    std::ostringstream out;
    out << issues.size() << " violation(s):";
    for (std::size_t i = 0; i < issues.size() && i < max_issues; ++i) {
        const ValidationIssue& v = issues[i];
        out << " [" << v.constraint;
        if (v.slot > 0) out << " slot=" << v.slot;
        if (v.task_id >= 0) out << " task=" << v.task_id;
        if (!v.detail.empty()) out << " " << v.detail;
        out << "]";
    }
    if (issues.size() > max_issues) out << " ...";
    return out.str();
}

ValidationReport validate(const Schedule& schedule, const Instance& instance) {
    ValidationReport report;
    const EsConfig& cfg = instance.config;
    const double eps = kFeasibilityTolerance;
    auto flag = [&report](std::string code, int slot, std::int64_t task, std::string detail) {
        report.issues.push_back({std::move(code), slot, task, std::move(detail)});
    };

    std::unordered_map<std::int64_t, const Task*> by_id;
    by_id.reserve(instance.tasks.size());
    for (const Task& t : instance.tasks) by_id.emplace(t.id, &t);

    const std::size_t slots = static_cast<std::size_t>(instance.total_slots) + 1;
    std::vector<double> util(slots, 0.0);
    std::vector<bool> occupied(slots, false);
    for (const auto& [id, slot] : schedule.assignment) {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            flag("unknown-task", slot, id, "");
            continue;
        }
        const Task& task = *it->second;
        if (slot < 1 || slot > instance.total_slots) {
            flag("slot-range", slot, id, "");
            continue;
        }
        if (!window_contains(task, slot)) {
            std::ostringstream d;
            d << "window [" << task.arrival << ", " << latest_start(task) << "]";
            flag("window", slot, id, d.str());
        }
        util[static_cast<std::size_t>(slot)] += task.util;
        occupied[static_cast<std::size_t>(slot)] = true;
    }

    // Trajectories recomputed from the assignment alone. When a slot is
    // infeasible the recurrence carries on with a clamped charge so that
    // every later violation is still surfaced.
    std::vector<double> power(slots, 0.0);
    std::vector<double> battery(slots, 0.0);
    for (int t = 1; t <= instance.total_slots; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        if (util[ti] > cfg.max_util + eps) {
            std::ostringstream d;
            d << util[ti] << " > max_util " << cfg.max_util;
            flag("utilization-cap", t, -1, d.str());
        }
        power[ti] = occupied[ti] ? power_of(std::min(util[ti], cfg.max_util), cfg) : 0.0;
        if (power[ti] > cfg.max_power + eps) flag("power-cap", t, -1, "");
        const double available = instance.solar.at(t) + battery[ti];
        if (power[ti] > available + eps) {
            std::ostringstream d;
            d << "need " << power[ti] << " W, have " << available << " W";
            flag("battery-trajectory", t, -1, d.str());
        }
        if (battery[ti] < -eps || battery[ti] > cfg.battery_capacity + eps)
            flag("battery-range", t, -1, "");
        if (t < instance.total_slots) {
            double next = std::min(cfg.battery_capacity, battery[ti] + instance.solar.at(t) - power[ti]);
            battery[ti + 1] = std::max(0.0, next);
        }
    }

    double revenue = 0.0;
    for (const auto& [id, slot] : schedule.assignment) {
        auto it = by_id.find(id);
        if (it != by_id.end()) revenue += it->second->revenue;
    }
    report.recomputed_revenue = revenue;

    // Stored trajectories, when present, must match the recomputation.
    auto compare_stored = [&](const std::vector<double>& stored, const std::vector<double>& fresh,
                              const char* code) {
        if (stored.empty()) return; // assignment-only schedule: nothing stored to check
        if (stored.size() != fresh.size()) {
            flag(code, 0, -1, "length mismatch");
            return;
        }
        for (int t = 1; t <= instance.total_slots; ++t) {
            const auto ti = static_cast<std::size_t>(t);
            if (std::abs(stored[ti] - fresh[ti]) > eps) {
                flag(code, t, -1, "");
                return;
            }
        }
    };
    compare_stored(schedule.util, util, "stored-utilization-mismatch");
    compare_stored(schedule.power, power, "stored-power-mismatch");
    compare_stored(schedule.battery, battery, "stored-battery-mismatch");
    if (std::abs(schedule.revenue - revenue) > 1e-9 * std::max(1.0, std::abs(revenue)))
        flag("revenue-mismatch", 0, -1, "");

    return report;
}

} // namespace solsched
