#include "solsched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace solsched {

namespace {

constexpr int kMaxDeadlineSlack = 5;     // deadline = arrival + 1 + k, k in 0..kMax
constexpr double kMinUtilization = 1e-6; // lower clamp for drawn utilizations

double mean_laxity(const std::vector<Task>& tasks) {
    double sum = 0.0;
    for (const Task& t : tasks) sum += static_cast<double>(t.deadline - t.arrival);
    return sum / static_cast<double>(tasks.size());
}

Task sample_task(std::int64_t id, int arrival, int total_slots, const GenSpec& spec,
                 double util_scale, std::mt19937_64& rng) {
    std::normal_distribution<double> util_dist(spec.u_mean, spec.u_sigma);
    std::uniform_int_distribution<int> slack_dist(0, kMaxDeadlineSlack);
    Task t;
    t.id = id;
    t.arrival = arrival;
    t.exec_slots = 1;
    t.deadline = arrival + t.exec_slots + slack_dist(rng);
    t.util = std::clamp(util_dist(rng) * util_scale, kMinUtilization, spec.max_util);
    t.revenue = revenue_of(t.util, t.arrival, t.deadline);
    (void)total_slots;
    return t;
}

} // namespace

GeneratedTasks generate_tasks(const GenSpec& spec) {
    if (spec.task_count < 0) throw std::invalid_argument("generate_tasks: negative task count");
    if (spec.total_slots < 1) throw std::invalid_argument("generate_tasks: total_slots < 1");
    if (!(spec.rho > 0.0)) throw std::invalid_argument("generate_tasks: rho must be > 0");
    GeneratedTasks out;
    if (spec.task_count == 0) return out;

    std::vector<double> weights = spec.arrival_weights;
    if (weights.empty()) weights.assign(static_cast<std::size_t>(spec.total_slots), 1.0);
    if (static_cast<int>(weights.size()) != spec.total_slots)
        throw std::invalid_argument("generate_tasks: arrival_weights length != total_slots");
    double weight_sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("generate_tasks: negative arrival weight");
        weight_sum += w;
    }
    if (weight_sum <= 0.0) throw std::invalid_argument("generate_tasks: all arrival weights zero");

    // The largest possible mean laxity is 1 + max slack; if even that
    // cannot reach rho without pushing the mean utilization past the
    // clamp, the spec is unsatisfiable.
    if (spec.rho * 1.0 > spec.max_util)
        throw std::invalid_argument("generate_tasks: rho needs mean util > max_util");

    std::mt19937_64 rng(spec.seed);
    std::discrete_distribution<int> arrival_dist(weights.begin(), weights.end());
    std::normal_distribution<double> util_dist(spec.u_mean, spec.u_sigma);
    std::uniform_int_distribution<int> slack_dist(0, kMaxDeadlineSlack);

    out.tasks.reserve(static_cast<std::size_t>(spec.task_count));
    for (int i = 0; i < spec.task_count; ++i) {
        Task t;
        t.id = i + 1;
        t.arrival = arrival_dist(rng) + 1;
        t.exec_slots = 1;
        t.deadline = t.arrival + t.exec_slots + slack_dist(rng);
        t.util = std::clamp(util_dist(rng), kMinUtilization, spec.max_util);
        out.tasks.push_back(t);
    }

    // One uniform rescale pins the realized rho to the target.
    const double laxity = mean_laxity(out.tasks);
    double util_sum = 0.0;
    for (const Task& t : out.tasks) util_sum += t.util;
    const double target_mean = spec.rho * laxity;
    if (target_mean > spec.max_util)
        throw std::invalid_argument("generate_tasks: rho needs mean util > max_util");
    out.util_scale = target_mean / (util_sum / static_cast<double>(out.tasks.size()));
    for (Task& t : out.tasks) {
        t.util = std::clamp(t.util * out.util_scale, kMinUtilization, spec.max_util);
        t.revenue = revenue_of(t.util, t.arrival, t.deadline);
    }
    return out;
}

SolarProfile load_solar(const std::string& path, int total_slots, double peak_watts) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("load_solar: cannot open '" + path + "'");
    std::vector<double> keys;
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double key = 0.0;
        double watts = 0.0;
        if (!(row >> key >> watts)) {
            if (line_no == 1) continue; // header row
            throw std::runtime_error("load_solar: malformed row " + std::to_string(line_no) +
                                     " in '" + path + "'");
        }
        if (watts < 0.0)
            throw std::runtime_error("load_solar: negative watts at row " +
                                     std::to_string(line_no));
        if (!keys.empty() && key <= keys.back())
            throw std::runtime_error("load_solar: non-increasing slot/timestamp at row " +
                                     std::to_string(line_no));
        keys.push_back(key);
        values.push_back(watts);
    }
    if (values.empty()) throw std::runtime_error("load_solar: '" + path + "' has no data rows");
    if (static_cast<int>(values.size()) % total_slots != 0 ||
        static_cast<int>(values.size()) < total_slots)
        throw std::runtime_error("load_solar: " + std::to_string(values.size()) +
                                 " rows cannot be resampled to " + std::to_string(total_slots) +
                                 " slots (need an integral multiple)");

    const std::size_t group = values.size() / static_cast<std::size_t>(total_slots);
    SolarProfile profile = SolarProfile::zeros(total_slots);
    for (int t = 1; t <= total_slots; ++t) {
        double sum = 0.0;
        for (std::size_t j = 0; j < group; ++j)
            sum += values[(static_cast<std::size_t>(t) - 1) * group + j];
        profile.watts[static_cast<std::size_t>(t)] = sum / static_cast<double>(group);
    }

    const double peak = *std::max_element(profile.watts.begin() + 1, profile.watts.end());
    if (peak <= 0.0)
        throw std::runtime_error("load_solar: all-zero profile cannot be normalized");
    const double scale = peak_watts / peak;
    for (int t = 1; t <= total_slots; ++t) profile.watts[static_cast<std::size_t>(t)] *= scale;
    return profile;
}

SolarProfile synthetic_solar(int total_slots, double peak_watts) {
    SolarProfile profile = SolarProfile::zeros(total_slots);
    const double sunrise = 0.25 * total_slots;
    const double sunset = 0.75 * total_slots;
    for (int t = 1; t <= total_slots; ++t) {
        const double x = (static_cast<double>(t) - sunrise) / (sunset - sunrise);
        if (x <= 0.0 || x >= 1.0) continue;
        const double bell = std::sin(x * 3.141592653589793);
        profile.watts[static_cast<std::size_t>(t)] = peak_watts * bell * bell;
    }
    return profile;
}

SolarProfile derive_actual_solar(const SolarProfile& predicted, const DeviationSpec& deviation,
                                 const EsConfig& cfg) {
    if (deviation.solar_pct == 0.0) return predicted;
    const double band = deviation.solar_pct / 100.0;
    std::mt19937_64 rng(deviation.seed);
    std::uniform_real_distribution<double> upper(1.0, 1.0 + band);
    std::uniform_real_distribution<double> full(1.0 - band, 1.0 + band);

    SolarProfile actual = predicted;
    const int total = predicted.total_slots();
    for (int t = 1; t <= total; ++t) {
        const double prev = t > 1 ? predicted.at(t - 1) : predicted.at(t);
        const double here = predicted.at(t);
        const double multiplier = (here != prev) ? upper(rng) : full(rng);
        actual.watts[static_cast<std::size_t>(t)] =
            std::clamp(here * multiplier, 0.0, cfg.max_power);
    }
    return actual;
}

std::vector<Task> derive_actual_tasks(const std::vector<Task>& predicted, const GenSpec& spec,
                                      double util_scale, const DeviationSpec& deviation) {
    if (deviation.task_pct == 0.0) return predicted;
    const auto replaced_count = static_cast<std::size_t>(
        std::llround(static_cast<double>(predicted.size()) * deviation.task_pct / 100.0));
    std::mt19937_64 rng(deviation.seed ^ 0x9e3779b97f4a7c15ULL);

    std::vector<std::size_t> order(predicted.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<bool> replaced(predicted.size(), false);
    for (std::size_t i = 0; i < replaced_count && i < order.size(); ++i)
        replaced[order[i]] = true;

    std::int64_t next_id = 0;
    for (const Task& t : predicted) next_id = std::max(next_id, t.id);
    ++next_id;

    std::vector<Task> actual;
    actual.reserve(predicted.size());
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (!replaced[i]) {
            actual.push_back(predicted[i]);
            continue;
        }
        actual.push_back(sample_task(next_id++, predicted[i].arrival, spec.total_slots, spec,
                                     util_scale, rng));
    }
    return actual;
}

int spike_slot_count(int total_slots, double rate_pct) {
    return static_cast<int>(std::llround(static_cast<double>(total_slots) * rate_pct / 100.0));
}

namespace {

std::vector<int> pick_spike_slots(int total_slots, double rate_pct, std::mt19937_64& rng) {
    std::vector<int> slots(static_cast<std::size_t>(total_slots));
    std::iota(slots.begin(), slots.end(), 1);
    std::shuffle(slots.begin(), slots.end(), rng);
    slots.resize(static_cast<std::size_t>(
        std::min(total_slots, spike_slot_count(total_slots, rate_pct))));
    return slots;
}

} // namespace

SolarProfile inject_solar_spikes(const SolarProfile& predicted, double rate_pct,
                                 double drop_factor, std::uint64_t seed) {
    if (rate_pct <= 0.0) return predicted;
    std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4fULL);
    SolarProfile spiked = predicted;
    for (int slot : pick_spike_slots(predicted.total_slots(), rate_pct, rng))
        spiked.watts[static_cast<std::size_t>(slot)] *= drop_factor;
    return spiked;
}

std::vector<Task> inject_task_spikes(const std::vector<Task>& tasks, const GenSpec& spec,
                                     double util_scale, double rate_pct, double burst_factor,
                                     std::uint64_t seed) {
    if (rate_pct <= 0.0) return tasks;
    std::mt19937_64 rng(seed ^ 0x165667b19e3779f9ULL);
    std::vector<int> per_slot(static_cast<std::size_t>(spec.total_slots) + 1, 0);
    for (const Task& t : tasks)
        if (t.arrival >= 1 && t.arrival <= spec.total_slots)
            ++per_slot[static_cast<std::size_t>(t.arrival)];

    std::int64_t next_id = 0;
    for (const Task& t : tasks) next_id = std::max(next_id, t.id);
    ++next_id;

    std::vector<Task> spiked = tasks;
    for (int slot : pick_spike_slots(spec.total_slots, rate_pct, rng)) {
        const auto burst = static_cast<int>(
            std::llround(burst_factor * per_slot[static_cast<std::size_t>(slot)]));
        for (int j = 0; j < burst; ++j)
            spiked.push_back(sample_task(next_id++, slot, spec.total_slots, spec, util_scale, rng));
    }
    return spiked;
}

} // namespace solsched
