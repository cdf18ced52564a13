#ifndef SOLSCHED_REPORT_HPP
#define SOLSCHED_REPORT_HPP

#include "solsched/harness.hpp"

#include <string>
#include <vector>

// Report emission: raw per-run tables, per-configuration aggregates and
// SVG line charts for the standard figure families (revenue vs battery
// capacity, revenue vs rho, revenue% vs deviation, planner vs baselines,
// revenue% vs spike rate).

namespace solsched {

/// Mean/stddev of revenue and revenue% over the seeds of one sweep cell.
struct AggregateRow {
    std::string scheduler;
    double battery_capacity = 0.0;
    double rho = 0.0;
    double solar_deviation_pct = 0.0;
    double task_deviation_pct = 0.0;
    double solar_spike_rate = 0.0;
    double task_spike_rate = 0.0;
    int samples = 0;
    double revenue_mean = 0.0;
    double revenue_stddev = 0.0;
    double revenue_pct_mean = 0.0;
    double revenue_pct_stddev = 0.0;
};

void write_runs_csv(const std::string& path, const std::vector<RunRecord>& runs);
void write_runs_jsonl(const std::string& path, const std::vector<RunRecord>& runs);
std::vector<RunRecord> read_runs_csv(const std::string& path);

/// Groups runs by every key except the seed; rows keep the input order of
/// first appearance, so identical sweeps aggregate to identical bytes.
std::vector<AggregateRow> aggregate_runs(const std::vector<RunRecord>& runs);

void write_aggregates_csv(const std::string& path, const std::vector<AggregateRow>& rows);

/// Writes every chart family that has data into `dir`. Returns the file
/// names written.
std::vector<std::string> write_charts(const std::string& dir,
                                      const std::vector<RunRecord>& runs);

/// Minimal SVG polyline chart, one series per label. When `x_labels` is
/// non-empty the x axis is categorical with those tick labels.
struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<ChartSeries>& series,
                      const std::vector<std::string>& x_labels = {});

} // namespace solsched

#endif // SOLSCHED_REPORT_HPP
