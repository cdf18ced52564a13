#include "solsched/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace solsched {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << std::setprecision(17);
    return out;
}

} // namespace

void write_tasks_jsonl(const std::string& path, const std::vector<Task>& tasks) {
    std::ofstream out = open_out(path);
    for (const Task& t : tasks) {
        nlohmann::json row{{"id", t.id}, {"a", t.arrival},    {"e", t.exec_slots},
                           {"d", t.deadline}, {"u", t.util},  {"r", t.revenue},
                           {"v", t.vehicle_tag}};
        out << row.dump() << '\n';
    }
}

std::vector<Task> read_tasks_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<Task> tasks;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json row;
        try {
            row = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("bad task record at line " + std::to_string(line_no) +
                                     " of '" + path + "': " + e.what());
        }
        Task t;
        t.id = row.at("id").get<std::int64_t>();
        t.arrival = row.at("a").get<int>();
        t.exec_slots = row.at("e").get<int>();
        t.deadline = row.at("d").get<int>();
        t.util = row.at("u").get<double>();
        t.revenue = row.at("r").get<double>();
        if (row.contains("v")) t.vehicle_tag = row.at("v").get<std::int64_t>();
        tasks.push_back(t);
    }
    return tasks;
}

void write_solar_csv(const std::string& path, const SolarProfile& profile) {
    std::ofstream out = open_out(path);
    out << "slot,watts\n";
    for (int t = 1; t <= profile.total_slots(); ++t) out << t << ',' << profile.at(t) << '\n';
}

void write_assignment_csv(const std::string& path, const Schedule& schedule) {
    std::ofstream out = open_out(path);
    out << "task_id,slot\n";
    for (const auto& [id, slot] : schedule.assignment) out << id << ',' << slot << '\n';
}

void write_trajectories_csv(const std::string& path, const Schedule& schedule,
                            const Instance& instance) {
    std::ofstream out = open_out(path);
    out << "slot,solar,util,power,battery\n";
    for (int t = 1; t <= instance.total_slots; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        out << t << ',' << instance.solar.at(t) << ',' << schedule.util[ti] << ','
            << schedule.power[ti] << ',' << schedule.battery[ti] << '\n';
    }
}

void write_online_trace_csv(const std::string& path, const std::vector<OnlineTraceRow>& trace) {
    std::ofstream out = open_out(path);
    out << "slot,s_pred,s_actual,committed,evictions,admissions,battery,power,revenue_cum\n";
    for (const OnlineTraceRow& row : trace) {
        out << row.slot << ',' << row.solar_predicted << ',' << row.solar_actual << ','
            << row.committed << ',' << row.evictions << ',' << row.admissions << ','
            << row.battery << ',' << row.power << ',' << row.revenue_cum << '\n';
    }
}

std::string format_battery(double capacity) {
    if (capacity == kInfiniteBattery) return "inf";
    std::ostringstream out;
    out << std::setprecision(17) << capacity;
    return out.str();
}

double parse_battery(const std::string& text) {
    if (text == "inf" || text == "infinite" || text == "infinity") return kInfiniteBattery;
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("battery capacity '" + text +
                                    "' is neither a number nor 'inf'");
    }
    if (used != text.size() || value < 0.0 || std::isnan(value))
        throw std::invalid_argument("battery capacity '" + text +
                                    "' is neither a non-negative number nor 'inf'");
    return value;
}

} // namespace solsched
