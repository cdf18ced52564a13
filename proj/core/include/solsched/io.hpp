#ifndef SOLSCHED_IO_HPP
#define SOLSCHED_IO_HPP

#include "solsched/model.hpp"
#include "solsched/online.hpp"

#include <string>
#include <vector>

// File formats (documented in the README):
//  - tasks: one JSON object per line with keys id, a, e, d, u, r and an
//    optional opaque vehicle tag v;
//  - solar: CSV "slot,watts" with a header row;
//  - schedule assignment: CSV "task_id,slot";
//  - per-slot trajectories: CSV "slot,solar,util,power,battery";
//  - online trace: CSV "slot,s_pred,s_actual,committed,evictions,
//    admissions,battery,power,revenue_cum".

namespace solsched {

void write_tasks_jsonl(const std::string& path, const std::vector<Task>& tasks);
std::vector<Task> read_tasks_jsonl(const std::string& path);

/// Writes "slot,watts" rows with full double precision.
void write_solar_csv(const std::string& path, const SolarProfile& profile);

void write_assignment_csv(const std::string& path, const Schedule& schedule);

void write_trajectories_csv(const std::string& path, const Schedule& schedule,
                            const Instance& instance);

void write_online_trace_csv(const std::string& path, const std::vector<OnlineTraceRow>& trace);

/// Formats a battery capacity for files and logs ("inf" for unbounded).
std::string format_battery(double capacity);

/// Parses "inf"/"infinite" or a non-negative number.
double parse_battery(const std::string& text);

} // namespace solsched

#endif // SOLSCHED_IO_HPP
