#include "solsched/harness.hpp"

#include "solsched/baselines.hpp"
#include "solsched/flow.hpp"
#include "solsched/io.hpp"
#include "solsched/offline.hpp"
#include "solsched/online.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace solsched {

namespace {

constexpr std::uint64_t kSeedIndexStride = 1000003;
constexpr std::uint64_t kSolarDeviationSalt = 0x5eedf00d5eedf00dULL;
constexpr std::uint64_t kTaskDeviationSalt = 0x7a5c7a5c7a5c7a5cULL;
constexpr std::uint64_t kSolarSpikeSalt = 0x0dd51de50dd51de5ULL;
constexpr std::uint64_t kTaskSpikeSalt = 0x3b3b3b3b3b3b3b3bULL;

std::vector<double> arrival_weights_for(const ExperimentConfig& cfg) {
    if (cfg.arrival_pattern == "uniform") return {};
    if (cfg.arrival_pattern == "diurnal") {
        // Two rush-hour bumps over a low base load, proportional to the
        // day length.
        std::vector<double> weights(static_cast<std::size_t>(cfg.total_slots));
        const double day = static_cast<double>(cfg.total_slots);
        auto bump = [day](double x, double center, double width) {
            const double z = (x - center * day) / (width * day);
            return std::exp(-0.5 * z * z);
        };
        for (int t = 1; t <= cfg.total_slots; ++t) {
            const double x = static_cast<double>(t);
            weights[static_cast<std::size_t>(t) - 1] =
                0.25 + bump(x, 0.354, 0.0625) + bump(x, 0.729, 0.0625);
        }
        return weights;
    }
    throw ConfigError("config key 'arrival': unknown pattern '" + cfg.arrival_pattern +
                      "' (expected uniform | diurnal)");
}

struct RunPoint {
    std::string scheduler;
    double rho = 0.0;
    double battery = 0.0;
    double solar_dev = 0.0;
    double task_dev = 0.0;
    double solar_spike = 0.0;
    double task_spike = 0.0;
    int seed_index = 0;
};

bool is_baseline(const std::string& scheduler) { return scheduler.rfind("baseline:", 0) == 0; }

void check_scheduler_name(const std::string& name) {
    static const char* known[] = {"offline", "snb", "sib", "sfb", "maxflow", "online"};
    for (const char* k : known)
        if (name == k) return;
    if (is_baseline(name)) {
        baseline_policy_from_string(name.substr(9)); // throws on bad policy
        return;
    }
    throw ConfigError("config key 'schedulers': unknown scheduler '" + name + "'");
}

std::string run_key(const RunPoint& p) {
    std::ostringstream out;
    out << p.scheduler << " battery=" << format_battery(p.battery) << " rho=" << p.rho
        << " dev=" << p.solar_dev << ':' << p.task_dev << " spikes=" << p.solar_spike << ':'
        << p.task_spike << " seed_index=" << p.seed_index;
    return out.str();
}

void make_unit_instance(Instance& instance) {
    instance.config.battery_capacity = 0.0;
    for (Task& t : instance.tasks) {
        t.util = 1.0;
        t.revenue = 1.0;
    }
}

} // namespace

std::uint64_t instance_seed(const ExperimentConfig& cfg, int seed_index, int es_index) {
    return cfg.base_seed + static_cast<std::uint64_t>(seed_index) * kSeedIndexStride +
           static_cast<std::uint64_t>(es_index) * cfg.es_seed_stride;
}

Instance build_instance(const ExperimentConfig& cfg, double rho, double battery_capacity,
                        int seed_index, int es_index, GeneratedTasks* generated_out) {
    GenSpec spec;
    spec.rho = rho;
    spec.task_count = cfg.task_count;
    spec.total_slots = cfg.total_slots;
    spec.u_mean = cfg.u_mean;
    spec.u_sigma = cfg.u_sigma;
    spec.arrival_weights = arrival_weights_for(cfg);
    spec.seed = instance_seed(cfg, seed_index, es_index);
    spec.max_util = cfg.max_util;
    GeneratedTasks generated = generate_tasks(spec);

    Instance instance;
    instance.config.static_power = cfg.static_power;
    instance.config.max_power = cfg.max_power;
    instance.config.max_util = cfg.max_util;
    instance.config.battery_capacity = battery_capacity;
    instance.total_slots = cfg.total_slots;
    instance.solar = cfg.solar_source == "synthetic"
                         ? synthetic_solar(cfg.total_slots, std::min(cfg.solar_peak, cfg.max_power))
                         : load_solar(cfg.solar_source, cfg.total_slots,
                                      std::min(cfg.solar_peak, cfg.max_power));
    instance.tasks = std::move(generated.tasks);
    check_instance(instance);
    if (generated_out) {
        generated_out->util_scale = generated.util_scale;
        generated_out->tasks = instance.tasks;
    }
    return instance;
}

namespace {

RunRecord execute_point(const ExperimentConfig& cfg, const RunPoint& point) {
    RunRecord record;
    record.scheduler = point.scheduler;
    record.battery_capacity = point.battery;
    record.rho = point.rho;
    record.solar_deviation_pct = point.solar_dev;
    record.task_deviation_pct = point.task_dev;
    record.solar_spike_rate = point.solar_spike;
    record.task_spike_rate = point.task_spike;
    record.seed_index = point.seed_index;
    record.es_count = cfg.es_count;

    double offline_total = 0.0;
    for (int es = 0; es < cfg.es_count; ++es) {
        GeneratedTasks generated;
        Instance instance =
            build_instance(cfg, point.rho, point.battery, point.seed_index, es, &generated);

        Schedule schedule;
        const Instance* accounted = &instance; // instance the schedule is checked against
        Instance actual;                       // online runs validate against this one
        if (point.scheduler == "offline") {
            schedule = schedule_offline(instance);
        } else if (point.scheduler == "snb") {
            schedule = schedule_no_battery(instance);
        } else if (point.scheduler == "sib") {
            schedule = schedule_infinite_battery(instance);
        } else if (point.scheduler == "sfb") {
            schedule = schedule_finite_battery(instance);
        } else if (point.scheduler == "maxflow") {
            make_unit_instance(instance);
            schedule = solve_unit_snb(instance);
        } else if (is_baseline(point.scheduler)) {
            schedule = run_baseline(instance,
                                    baseline_policy_from_string(point.scheduler.substr(9)));
        } else if (point.scheduler == "online") {
            const Schedule plan = schedule_offline(instance);
            const std::uint64_t seed = instance_seed(cfg, point.seed_index, es);
            DeviationSpec deviation{point.solar_dev, point.task_dev, seed ^ kSolarDeviationSalt};
            actual = instance;
            actual.solar = derive_actual_solar(instance.solar, deviation, instance.config);
            actual.solar = inject_solar_spikes(actual.solar, point.solar_spike,
                                               cfg.spike_drop_factor, seed ^ kSolarSpikeSalt);
            GenSpec spec;
            spec.rho = point.rho;
            spec.task_count = cfg.task_count;
            spec.total_slots = cfg.total_slots;
            spec.u_mean = cfg.u_mean;
            spec.u_sigma = cfg.u_sigma;
            spec.max_util = cfg.max_util;
            DeviationSpec task_deviation{point.solar_dev, point.task_dev,
                                         seed ^ kTaskDeviationSalt};
            actual.tasks = derive_actual_tasks(instance.tasks, spec, generated.util_scale,
                                               task_deviation);
            actual.tasks = inject_task_spikes(actual.tasks, spec, generated.util_scale,
                                              point.task_spike, cfg.spike_burst_factor,
                                              seed ^ kTaskSpikeSalt);
            check_instance(actual);
            OnlineContext context{&instance, &actual, &plan};
            OnlineResult online = run_online(context);
            schedule = std::move(online.schedule);
            offline_total += plan.revenue;
            accounted = &actual;
        } else {
            throw ConfigError("config key 'schedulers': unknown scheduler '" + point.scheduler +
                              "'");
        }

        const ValidationReport report = validate(schedule, *accounted);
        if (!report.accepted())
            throw std::runtime_error("schedule failed validation for run [" + run_key(point) +
                                     " es=" + std::to_string(es) + "]: " + report.summary());

        record.revenue += schedule.revenue;
        record.completed += static_cast<std::int64_t>(schedule.assignment.size());
        record.dropped += static_cast<std::int64_t>(accounted->tasks.size()) -
                          static_cast<std::int64_t>(schedule.assignment.size());
        for (int t = 1; t <= accounted->total_slots; ++t) {
            record.energy_consumed += schedule.power[static_cast<std::size_t>(t)];
            record.energy_harvested += accounted->solar.at(t);
        }
    }
    record.revenue_pct = point.scheduler == "online"
                             ? (offline_total > 0.0 ? 100.0 * record.revenue / offline_total
                                                    : 100.0)
                             : 100.0;
    return record;
}

void check_config(const ExperimentConfig& cfg) {
    if (cfg.es_count < 1) throw ConfigError("config key 'es': must be >= 1");
    if (cfg.task_count < 0) throw ConfigError("config key 'n': must be >= 0");
    if (cfg.total_slots < 1) throw ConfigError("config key 'slots': must be >= 1");
    if (cfg.seed_count < 0) throw ConfigError("config key 'seeds': must be >= 0");
    if (cfg.schedulers.empty()) throw ConfigError("config key 'schedulers': need at least one");
    if (cfg.battery_capacities.empty()) throw ConfigError("config key 'battery': need at least one");
    if (cfg.rho_values.empty()) throw ConfigError("config key 'rho': need at least one");
    for (double rho : cfg.rho_values)
        if (!(rho > 0.0)) throw ConfigError("config key 'rho': values must be > 0");
    for (double b : cfg.battery_capacities)
        if (!(b >= 0.0)) throw ConfigError("config key 'battery': values must be >= 0");
    for (const auto& [pd, td] : cfg.deviations)
        if (pd < 0.0 || pd > 100.0 || td < 0.0 || td > 100.0)
            throw ConfigError("config key 'deviations': percentages must lie in [0, 100]");
    for (const std::string& s : cfg.schedulers) check_scheduler_name(s);
}

std::vector<RunPoint> enumerate_points(const ExperimentConfig& cfg) {
    std::vector<RunPoint> points;
    for (const std::string& scheduler : cfg.schedulers) {
        std::vector<double> batteries;
        for (double b : cfg.battery_capacities) {
            if (scheduler == "sib" && b != kInfiniteBattery) continue;
            if (scheduler == "sfb" && b == kInfiniteBattery) continue;
            if (scheduler == "maxflow" && b != 0.0) continue;
            batteries.push_back(b);
        }
        if (batteries.empty())
            throw ConfigError("config key 'battery': no entry compatible with scheduler '" +
                              scheduler + "'");
        const bool online = scheduler == "online";
        for (double rho : cfg.rho_values) {
            for (double battery : batteries) {
                const auto& deviations =
                    online ? cfg.deviations
                           : std::vector<std::pair<double, double>>{{0.0, 0.0}};
                const auto& solar_spikes =
                    online ? cfg.solar_spike_rates : std::vector<double>{0.0};
                const auto& task_spikes = online ? cfg.task_spike_rates : std::vector<double>{0.0};
                for (const auto& [pd, td] : deviations)
                    for (double ss : solar_spikes)
                        for (double ts : task_spikes)
                            for (int k = 0; k < cfg.seed_count; ++k)
                                points.push_back(
                                    {scheduler, rho, battery, pd, td, ss, ts, k});
            }
        }
    }
    return points;
}

} // namespace

SweepResult run_experiment(const ExperimentConfig& cfg) {
    check_config(cfg);
    const std::vector<RunPoint> points = enumerate_points(cfg);
    SweepResult result;
    result.runs.resize(points.size());

    int workers = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));

    if (workers <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i)
            result.runs[i] = execute_point(cfg, points[i]);
        return result;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            try {
                result.runs[i] = execute_point(cfg, points[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return result;
}

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string current;
    std::istringstream in(value);
    while (std::getline(in, current, ',')) {
        current = trim(current);
        if (!current.empty()) items.push_back(current);
    }
    return items;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not a number");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not an integer");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + value +
                          "' is not a non-negative integer");
    }
}

} // namespace

void apply_config_override(ExperimentConfig& cfg, const std::string& raw_key,
                           const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "es") cfg.es_count = parse_int(key, value);
    else if (key == "es_seed_stride") cfg.es_seed_stride = parse_u64(key, value);
    else if (key == "n") cfg.task_count = parse_int(key, value);
    else if (key == "slots") cfg.total_slots = parse_int(key, value);
    else if (key == "rho") {
        cfg.rho_values.clear();
        for (const std::string& item : split_list(value))
            cfg.rho_values.push_back(parse_double(key, item));
    } else if (key == "u_mean") cfg.u_mean = parse_double(key, value);
    else if (key == "u_sigma") cfg.u_sigma = parse_double(key, value);
    else if (key == "arrival") cfg.arrival_pattern = value;
    else if (key == "static_power") cfg.static_power = parse_double(key, value);
    else if (key == "max_power") cfg.max_power = parse_double(key, value);
    else if (key == "max_util") cfg.max_util = parse_double(key, value);
    else if (key == "battery") {
        cfg.battery_capacities.clear();
        for (const std::string& item : split_list(value)) {
            try {
                cfg.battery_capacities.push_back(parse_battery(item));
            } catch (const std::invalid_argument& e) {
                throw ConfigError("config key 'battery': " + std::string(e.what()));
            }
        }
    } else if (key == "solar") cfg.solar_source = value;
    else if (key == "solar_peak") cfg.solar_peak = parse_double(key, value);
    else if (key == "schedulers") cfg.schedulers = split_list(value);
    else if (key == "deviations") {
        cfg.deviations.clear();
        for (const std::string& item : split_list(value)) {
            const std::size_t colon = item.find(':');
            if (colon == std::string::npos)
                throw ConfigError("config key 'deviations': expected solar:task pairs, got '" +
                                  item + "'");
            cfg.deviations.emplace_back(parse_double(key, trim(item.substr(0, colon))),
                                        parse_double(key, trim(item.substr(colon + 1))));
        }
    } else if (key == "solar_spike_rates") {
        cfg.solar_spike_rates.clear();
        for (const std::string& item : split_list(value))
            cfg.solar_spike_rates.push_back(parse_double(key, item));
    } else if (key == "task_spike_rates") {
        cfg.task_spike_rates.clear();
        for (const std::string& item : split_list(value))
            cfg.task_spike_rates.push_back(parse_double(key, item));
    } else if (key == "spike_drop") cfg.spike_drop_factor = parse_double(key, value);
    else if (key == "spike_burst") cfg.spike_burst_factor = parse_double(key, value);
    else if (key == "seed") cfg.base_seed = parse_u64(key, value);
    else if (key == "seeds") cfg.seed_count = parse_int(key, value);
    else if (key == "threads") cfg.threads = parse_int(key, value);
    else if (key == "out_dir") cfg.out_dir = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_experiment_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open config file '" + path + "'");
    ExperimentConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        try {
            apply_config_override(cfg, stripped.substr(0, eq), stripped.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
        }
    }
    return cfg;
}

} // namespace solsched
