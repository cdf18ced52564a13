#include "solsched/report.hpp"

#include "solsched/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace solsched {

namespace {

std::string fmt(double value) {
    std::ostringstream out;
    out << std::setprecision(17) << value;
    return out.str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

constexpr const char* kRunsHeader =
    "scheduler,battery,rho,solar_dev,task_dev,solar_spike,task_spike,seed_index,es_count,"
    "revenue,revenue_pct,completed,dropped,energy_consumed,energy_harvested";

} // namespace

void write_runs_csv(const std::string& path, const std::vector<RunRecord>& runs) {
    std::ofstream out = open_out(path);
    out << kRunsHeader << '\n';
    for (const RunRecord& r : runs) {
        out << r.scheduler << ',' << format_battery(r.battery_capacity) << ',' << fmt(r.rho)
            << ',' << fmt(r.solar_deviation_pct) << ',' << fmt(r.task_deviation_pct) << ','
            << fmt(r.solar_spike_rate) << ',' << fmt(r.task_spike_rate) << ',' << r.seed_index
            << ',' << r.es_count << ',' << fmt(r.revenue) << ',' << fmt(r.revenue_pct) << ','
            << r.completed << ',' << r.dropped << ',' << fmt(r.energy_consumed) << ','
            << fmt(r.energy_harvested) << '\n';
    }
}

void write_runs_jsonl(const std::string& path, const std::vector<RunRecord>& runs) {
    std::ofstream out = open_out(path);
    for (const RunRecord& r : runs) {
        nlohmann::json row{{"scheduler", r.scheduler},
                           {"battery", format_battery(r.battery_capacity)},
                           {"rho", r.rho},
                           {"solar_dev", r.solar_deviation_pct},
                           {"task_dev", r.task_deviation_pct},
                           {"solar_spike", r.solar_spike_rate},
                           {"task_spike", r.task_spike_rate},
                           {"seed_index", r.seed_index},
                           {"es_count", r.es_count},
                           {"revenue", r.revenue},
                           {"revenue_pct", r.revenue_pct},
                           {"completed", r.completed},
                           {"dropped", r.dropped},
                           {"energy_consumed", r.energy_consumed},
                           {"energy_harvested", r.energy_harvested}};
        out << row.dump() << '\n';
    }
}

std::vector<RunRecord> read_runs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("'" + path + "' is empty");
    if (line != kRunsHeader)
        throw std::runtime_error("'" + path + "' does not look like a runs table");
    std::vector<RunRecord> runs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 15)
            throw std::runtime_error("bad row at line " + std::to_string(line_no) + " of '" +
                                     path + "'");
        RunRecord r;
        r.scheduler = fields[0];
        r.battery_capacity = parse_battery(fields[1]);
        r.rho = std::stod(fields[2]);
        r.solar_deviation_pct = std::stod(fields[3]);
        r.task_deviation_pct = std::stod(fields[4]);
        r.solar_spike_rate = std::stod(fields[5]);
        r.task_spike_rate = std::stod(fields[6]);
        r.seed_index = std::stoi(fields[7]);
        r.es_count = std::stoi(fields[8]);
        r.revenue = std::stod(fields[9]);
        r.revenue_pct = std::stod(fields[10]);
        r.completed = std::stoll(fields[11]);
        r.dropped = std::stoll(fields[12]);
        r.energy_consumed = std::stod(fields[13]);
        r.energy_harvested = std::stod(fields[14]);
        runs.push_back(std::move(r));
    }
    return runs;
}

namespace {

std::string cell_key(const RunRecord& r) {
    std::ostringstream out;
    out << r.scheduler << '|' << format_battery(r.battery_capacity) << '|' << fmt(r.rho) << '|'
        << fmt(r.solar_deviation_pct) << '|' << fmt(r.task_deviation_pct) << '|'
        << fmt(r.solar_spike_rate) << '|' << fmt(r.task_spike_rate);
    return out.str();
}

} // namespace

std::vector<AggregateRow> aggregate_runs(const std::vector<RunRecord>& runs) {
    std::vector<AggregateRow> rows;
    std::map<std::string, std::size_t> index;
    std::vector<std::vector<double>> revenues;
    std::vector<std::vector<double>> percentages;
    for (const RunRecord& r : runs) {
        const std::string key = cell_key(r);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, rows.size()).first;
            AggregateRow row;
            row.scheduler = r.scheduler;
            row.battery_capacity = r.battery_capacity;
            row.rho = r.rho;
            row.solar_deviation_pct = r.solar_deviation_pct;
            row.task_deviation_pct = r.task_deviation_pct;
            row.solar_spike_rate = r.solar_spike_rate;
            row.task_spike_rate = r.task_spike_rate;
            rows.push_back(row);
            revenues.emplace_back();
            percentages.emplace_back();
        }
        revenues[it->second].push_back(r.revenue);
        percentages[it->second].push_back(r.revenue_pct);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto stats = [](const std::vector<double>& xs) {
            double mean = 0.0;
            for (double x : xs) mean += x;
            mean /= static_cast<double>(xs.size());
            double var = 0.0;
            for (double x : xs) var += (x - mean) * (x - mean);
            var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
            return std::make_pair(mean, std::sqrt(var));
        };
        rows[i].samples = static_cast<int>(revenues[i].size());
        std::tie(rows[i].revenue_mean, rows[i].revenue_stddev) = stats(revenues[i]);
        std::tie(rows[i].revenue_pct_mean, rows[i].revenue_pct_stddev) = stats(percentages[i]);
    }
    return rows;
}

void write_aggregates_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
    std::ofstream out = open_out(path);
    out << "scheduler,battery,rho,solar_dev,task_dev,solar_spike,task_spike,samples,"
           "revenue_mean,revenue_stddev,revenue_pct_mean,revenue_pct_stddev\n";
    for (const AggregateRow& r : rows) {
        out << r.scheduler << ',' << format_battery(r.battery_capacity) << ',' << fmt(r.rho)
            << ',' << fmt(r.solar_deviation_pct) << ',' << fmt(r.task_deviation_pct) << ','
            << fmt(r.solar_spike_rate) << ',' << fmt(r.task_spike_rate) << ',' << r.samples << ','
            << fmt(r.revenue_mean) << ',' << fmt(r.revenue_stddev) << ','
            << fmt(r.revenue_pct_mean) << ',' << fmt(r.revenue_pct_stddev) << '\n';
    }
}

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string svg_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::string tick_label(double v) {
    std::ostringstream out;
    out << std::setprecision(6) << v;
    return out.str();
}

} // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<ChartSeries>& series,
                      const std::vector<std::string>& x_labels) {
    const double width = 860.0;
    const double height = 500.0;
    const double left = 80.0;
    const double right = width - 180.0; // leave room for the legend
    const double top = 50.0;
    const double bottom = height - 60.0;

    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
    bool first = true;
    for (const ChartSeries& s : series) {
        for (const auto& [x, y] : s.points) {
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + 1.0;
    const double y_pad = 0.06 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (right - left); };
    auto sy = [&](double y) { return bottom - (y - y_min) / (y_max - y_min) * (bottom - top); };

    std::ofstream out = open_out(path);
    out << std::setprecision(8);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << (left + right) / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << svg_escape(title) << "</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << svg_escape(x_label) << "</text>\n";
    out << "<text x=\"20\" y=\"" << (top + bottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << (top + bottom) / 2 << ")\">" << svg_escape(y_label)
        << "</text>\n";

    // x ticks: categorical labels when provided, else 5 numeric ticks
    if (!x_labels.empty()) {
        for (std::size_t i = 0; i < x_labels.size(); ++i) {
            const double x = sx(static_cast<double>(i));
            out << "<line x1=\"" << x << "\" y1=\"" << bottom << "\" x2=\"" << x << "\" y2=\""
                << bottom + 5 << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << x << "\" y=\"" << bottom + 20
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
                << svg_escape(x_labels[i]) << "</text>\n";
        }
    } else {
        for (int i = 0; i <= 5; ++i) {
            const double v = x_min + (x_max - x_min) * i / 5.0;
            const double x = sx(v);
            out << "<line x1=\"" << x << "\" y1=\"" << bottom << "\" x2=\"" << x << "\" y2=\""
                << bottom + 5 << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << x << "\" y=\"" << bottom + 20
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
                << tick_label(v) << "</text>\n";
        }
    }
    for (int i = 0; i <= 5; ++i) {
        const double v = y_min + (y_max - y_min) * i / 5.0;
        const double y = sy(v);
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\""
            << y << "\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << right << "\" y2=\"" << y
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << left - 10 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << tick_label(v) << "</text>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : series[i].points) out << sx(x) << ',' << sy(y) << ' ';
        out << "\"/>\n";
        for (const auto& [x, y] : series[i].points)
            out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\""
                << color << "\"/>\n";
        const double ly = top + 18.0 * static_cast<double>(i);
        out << "<line x1=\"" << right + 12 << "\" y1=\"" << ly << "\" x2=\"" << right + 32
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << right + 38 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << svg_escape(series[i].label)
            << "</text>\n";
    }
    out << "</svg>\n";
}

namespace {

// Sort key for battery capacities that puts the infinite sentinel last.
bool battery_less(double a, double b) {
    if (a == b) return false;
    if (a == kInfiniteBattery) return false;
    if (b == kInfiniteBattery) return true;
    return a < b;
}

bool is_offline_like(const std::string& s) {
    return s == "offline" || s == "snb" || s == "sib" || s == "sfb";
}

} // namespace

std::vector<std::string> write_charts(const std::string& dir, const std::vector<RunRecord>& runs) {
    std::vector<std::string> written;
    const std::vector<AggregateRow> cells = aggregate_runs(runs);
    auto path_of = [&dir](const std::string& name) { return dir + "/" + name; };

    // revenue vs battery capacity, one series per rho (offline planners)
    {
        std::vector<double> batteries;
        std::set<double> rhos;
        for (const AggregateRow& c : cells) {
            if (!is_offline_like(c.scheduler)) continue;
            if (std::find(batteries.begin(), batteries.end(), c.battery_capacity) ==
                batteries.end())
                batteries.push_back(c.battery_capacity);
            rhos.insert(c.rho);
        }
        std::sort(batteries.begin(), batteries.end(), battery_less);
        if (batteries.size() >= 2 && !rhos.empty()) {
            std::vector<ChartSeries> series;
            std::vector<std::string> labels;
            for (double b : batteries) labels.push_back(format_battery(b));
            for (double rho : rhos) {
                ChartSeries s;
                s.label = "rho=" + tick_label(rho);
                for (std::size_t i = 0; i < batteries.size(); ++i) {
                    for (const AggregateRow& c : cells) {
                        if (!is_offline_like(c.scheduler) || c.rho != rho ||
                            c.battery_capacity != batteries[i])
                            continue;
                        s.points.emplace_back(static_cast<double>(i), c.revenue_mean);
                        break;
                    }
                }
                if (!s.points.empty()) series.push_back(std::move(s));
            }
            if (!series.empty()) {
                const std::string name = "battery_revenue.svg";
                write_line_chart(path_of(name), "Total revenue vs battery capacity",
                                 "battery capacity (W-slots)", "mean total revenue", series,
                                 labels);
                written.push_back(name);
            }
        }
    }

    // revenue vs rho, one series per (scheduler, battery)
    {
        std::set<double> rhos;
        for (const AggregateRow& c : cells) rhos.insert(c.rho);
        if (rhos.size() >= 2) {
            std::vector<ChartSeries> series;
            std::vector<std::string> seen;
            for (const AggregateRow& c : cells) {
                if (c.solar_spike_rate != 0.0 || c.task_spike_rate != 0.0) continue;
                const std::string label =
                    c.scheduler + " b=" + format_battery(c.battery_capacity);
                if (std::find(seen.begin(), seen.end(), label) != seen.end()) continue;
                seen.push_back(label);
                ChartSeries s;
                s.label = label;
                for (double rho : rhos) {
                    for (const AggregateRow& d : cells) {
                        if (d.scheduler == c.scheduler &&
                            d.battery_capacity == c.battery_capacity && d.rho == rho &&
                            d.solar_spike_rate == 0.0 && d.task_spike_rate == 0.0 &&
                            d.solar_deviation_pct == c.solar_deviation_pct &&
                            d.task_deviation_pct == c.task_deviation_pct) {
                            s.points.emplace_back(rho, d.revenue_mean);
                            break;
                        }
                    }
                }
                if (s.points.size() >= 2) series.push_back(std::move(s));
            }
            if (!series.empty()) {
                const std::string name = "rho_revenue.svg";
                write_line_chart(path_of(name), "Total revenue vs rho", "rho",
                                 "mean total revenue", series);
                written.push_back(name);
            }
        }
    }

    // revenue% vs deviation (online runs, solar_dev used as the axis)
    {
        std::vector<ChartSeries> series;
        std::map<std::string, std::map<double, double>> by_battery;
        for (const AggregateRow& c : cells) {
            if (c.scheduler != "online" || c.solar_spike_rate != 0.0 || c.task_spike_rate != 0.0)
                continue;
            by_battery["b=" + format_battery(c.battery_capacity)][c.solar_deviation_pct] =
                c.revenue_pct_mean;
        }
        for (const auto& [label, points] : by_battery) {
            if (points.size() < 2) continue;
            ChartSeries s;
            s.label = label;
            for (const auto& [x, y] : points) s.points.emplace_back(x, y);
            series.push_back(std::move(s));
        }
        if (!series.empty()) {
            const std::string name = "deviation_revenue_pct.svg";
            write_line_chart(path_of(name), "Online revenue% vs deviation", "deviation (%)",
                             "mean revenue %", series);
            written.push_back(name);
        }
    }

    // planner vs baselines across battery capacities
    {
        std::vector<double> batteries;
        std::set<std::string> names;
        for (const AggregateRow& c : cells) {
            if (!is_offline_like(c.scheduler) && c.scheduler.rfind("baseline:", 0) != 0) continue;
            if (std::find(batteries.begin(), batteries.end(), c.battery_capacity) ==
                batteries.end())
                batteries.push_back(c.battery_capacity);
            names.insert(c.scheduler);
        }
        std::sort(batteries.begin(), batteries.end(), battery_less);
        bool has_baseline = false;
        for (const std::string& n : names) has_baseline |= n.rfind("baseline:", 0) == 0;
        if (batteries.size() >= 2 && has_baseline) {
            std::vector<std::string> labels;
            for (double b : batteries) labels.push_back(format_battery(b));
            std::vector<ChartSeries> series;
            for (const std::string& name : names) {
                ChartSeries s;
                s.label = name;
                for (std::size_t i = 0; i < batteries.size(); ++i) {
                    double sum = 0.0;
                    int count = 0;
                    for (const AggregateRow& c : cells) {
                        if (c.scheduler == name && c.battery_capacity == batteries[i]) {
                            sum += c.revenue_mean;
                            ++count;
                        }
                    }
                    if (count > 0)
                        s.points.emplace_back(static_cast<double>(i),
                                              sum / static_cast<double>(count));
                }
                if (!s.points.empty()) series.push_back(std::move(s));
            }
            if (!series.empty()) {
                const std::string name = "baseline_comparison.svg";
                write_line_chart(path_of(name), "Planner vs baselines",
                                 "battery capacity (W-slots)", "mean total revenue", series,
                                 labels);
                written.push_back(name);
            }
        }
    }

    // revenue% vs spike rate (solar spikes and task spikes as series)
    {
        std::map<double, double> solar_points;
        std::map<double, double> task_points;
        for (const AggregateRow& c : cells) {
            if (c.scheduler != "online") continue;
            if (c.task_spike_rate == 0.0) solar_points[c.solar_spike_rate] = c.revenue_pct_mean;
            if (c.solar_spike_rate == 0.0) task_points[c.task_spike_rate] = c.revenue_pct_mean;
        }
        std::vector<ChartSeries> series;
        if (solar_points.size() >= 2) {
            ChartSeries s;
            s.label = "solar spikes";
            for (const auto& [x, y] : solar_points) s.points.emplace_back(x, y);
            series.push_back(std::move(s));
        }
        if (task_points.size() >= 2) {
            ChartSeries s;
            s.label = "task spikes";
            for (const auto& [x, y] : task_points) s.points.emplace_back(x, y);
            series.push_back(std::move(s));
        }
        if (!series.empty()) {
            const std::string name = "spike_robustness.svg";
            write_line_chart(path_of(name), "Online revenue% vs spike rate",
                             "spiked slots (% of horizon)", "mean revenue %", series);
            written.push_back(name);
        }
    }

    return written;
}

} // namespace solsched
