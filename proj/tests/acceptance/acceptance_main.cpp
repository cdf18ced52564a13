// Acceptance suite: runs the full criteria checklist end to end and
// prints one PASS/FAIL line per criterion. Exits non-zero when any
// criterion fails. Individual criteria can be selected with --only N.

#include "solsched/baselines.hpp"
#include "solsched/flow.hpp"
#include "solsched/harness.hpp"
#include "solsched/io.hpp"
#include "solsched/model.hpp"
#include "solsched/offline.hpp"
#include "solsched/online.hpp"
#include "solsched/report.hpp"
#include "solsched/workload.hpp"

#include "support/test_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace solsched;
using namespace solsched::testutil;

namespace {

struct CriterionResult {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int precision = 4) {
    std::ostringstream out;
    out.precision(precision);
    out << std::fixed << v;
    return out.str();
}

// Desk-scale experiment shared by the trend criteria: five rho values,
// five battery capacities, twenty seeds, 10k tasks over a day.
ExperimentConfig desk_config() {
    ExperimentConfig cfg;
    cfg.task_count = 10000;
    cfg.total_slots = 1440;
    cfg.max_util = 10.0; // desk-scale server: keeps daylight demand near capacity
    cfg.rho_values = {0.05, 0.1, 0.2, 0.4, 0.8};
    cfg.battery_capacities = {0.0, 2000.0, 7000.0, 10000.0, kInfiniteBattery};
    cfg.schedulers = {"offline"};
    cfg.seed_count = 20;
    cfg.base_seed = 424242;
    cfg.threads = 0;
    return cfg;
}

std::vector<RunRecord> g_desk_runs; // filled once, reused by criteria 5/6

const std::vector<RunRecord>& desk_runs() {
    if (g_desk_runs.empty()) g_desk_runs = run_experiment(desk_config()).runs;
    return g_desk_runs;
}

double mean_revenue(const std::vector<RunRecord>& runs, double rho, double battery) {
    double sum = 0.0;
    int count = 0;
    for (const RunRecord& r : runs) {
        if (r.rho == rho && r.battery_capacity == battery) {
            sum += r.revenue;
            ++count;
        }
    }
    return count > 0 ? sum / count : 0.0;
}

// 1. Worked-example goldens of the cubic power curve.
CriterionResult power_model_goldens() {
    const EsConfig cfg{400.0, 2000.0, 64.0, 0.0};
    const double power = power_of(44.0, cfg);
    const double cores = utilization_of(1500.0, cfg);
    const bool pass = std::abs(power - 920.0) <= 1.0 && std::floor(cores) == 56.0;
    return {pass, "power_of(44)=" + fmt(power, 2) + " W (920 +- 1), floor(util_of(1500))=" +
                      fmt(std::floor(cores), 0)};
}

// 2. Max-flow value equals the exhaustive optimum on 200 unit instances.
CriterionResult maxflow_oracle_equivalence() {
    int mismatches = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const Instance instance = random_unit_instance(seed);
        FlowNetwork net = build_unit_network(instance);
        const FlowResult flow = max_flow(net);
        if (flow.value != brute_force_unit_optimum(instance)) ++mismatches;
    }
    return {mismatches == 0, "200 instances, " + std::to_string(mismatches) + " mismatches"};
}

// 3. The greedy sweep never beats the optimum; its mean ratio stays high.
CriterionResult snb_vs_optimal_ratio() {
    int violations = 0;
    double ratio_sum = 0.0;
    int counted = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const Instance instance = random_unit_instance(seed);
        const double optimum = static_cast<double>(brute_force_unit_optimum(instance));
        const double greedy = schedule_no_battery(instance).revenue;
        if (greedy > optimum + 1e-9) ++violations;
        if (optimum > 0.0) {
            ratio_sum += greedy / optimum;
            ++counted;
        }
    }
    const double mean_ratio = counted ? ratio_sum / counted : 1.0;
    const bool pass = violations == 0 && mean_ratio >= 0.85;
    return {pass, "mean ratio " + fmt(mean_ratio) + " over " + std::to_string(counted) +
                      " instances (target >= 0.85), " + std::to_string(violations) +
                      " bound violations"};
}

// 4. Battery planners never fall below the no-battery sweep.
CriterionResult improvement_monotonicity() {
    int violations = 0;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> battery_dist(0.0, 20000.0);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Instance instance = random_general_instance(seed, 0.0);
        const double base = schedule_no_battery(instance).revenue;
        instance.config.battery_capacity = kInfiniteBattery;
        if (schedule_infinite_battery(instance).revenue < base - 1e-9) ++violations;
        instance.config.battery_capacity = battery_dist(rng);
        if (schedule_finite_battery(instance).revenue < base - 1e-9) ++violations;
    }
    return {violations == 0,
            "100 instances x {infinite, finite} batteries, " + std::to_string(violations) +
                " regressions"};
}

// 5. Mean revenue never drops as the battery grows (1% slack per step).
CriterionResult battery_capacity_trend() {
    const std::vector<RunRecord>& runs = desk_runs();
    const ExperimentConfig cfg = desk_config();
    double worst = 0.0; // most negative step, relative to the smaller mean
    std::string worst_at = "-";
    for (double rho : cfg.rho_values) {
        for (std::size_t b = 1; b < cfg.battery_capacities.size(); ++b) {
            const double lower = mean_revenue(runs, rho, cfg.battery_capacities[b - 1]);
            const double upper = mean_revenue(runs, rho, cfg.battery_capacities[b]);
            const double step = lower > 0.0 ? (upper - lower) / lower : 0.0;
            if (step < worst) {
                worst = step;
                worst_at = "rho=" + fmt(rho, 2) + " " +
                           format_battery(cfg.battery_capacities[b - 1]) + "->" +
                           format_battery(cfg.battery_capacities[b]);
            }
        }
    }
    const bool pass = worst >= -0.01;
    return {pass, "worst step " + fmt(100.0 * worst, 3) + "% at " + worst_at +
                      " (tolerance -1%), 20 seeds x 5 rho x 5 capacities"};
}

// 6. Mean revenue strictly increases with rho for every offline planner.
CriterionResult rho_trend() {
    const std::vector<RunRecord>& runs = desk_runs();
    const ExperimentConfig cfg = desk_config();
    int violations = 0;
    for (double battery : cfg.battery_capacities) {
        for (std::size_t i = 1; i < cfg.rho_values.size(); ++i) {
            const double lower = mean_revenue(runs, cfg.rho_values[i - 1], battery);
            const double upper = mean_revenue(runs, cfg.rho_values[i], battery);
            if (!(upper > lower)) ++violations;
        }
    }
    return {violations == 0, "5 capacities x 4 rho steps, " + std::to_string(violations) +
                                 " non-increasing steps"};
}

// 7. Zero deviation reproduces the offline assignment map exactly.
CriterionResult online_identity() {
    ExperimentConfig cfg;
    cfg.task_count = 2000;
    cfg.total_slots = 288;
    cfg.max_util = 10.0;
    cfg.base_seed = 31337;
    int mismatches = 0;
    int checked = 0;
    for (double battery : {0.0, 7000.0, kInfiniteBattery}) {
        for (int seed_index = 0; seed_index < 5; ++seed_index) {
            const Instance instance = build_instance(cfg, 0.4, battery, seed_index, 0);
            const Schedule plan = schedule_offline(instance);
            OnlineContext context{&instance, &instance, &plan};
            const OnlineResult result = run_online(context);
            if (result.schedule.assignment != plan.assignment) ++mismatches;
            ++checked;
        }
    }
    return {mismatches == 0, std::to_string(checked) + " replays across 3 battery regimes, " +
                                 std::to_string(mismatches) + " assignment mismatches"};
}

// 8. Online revenue stays near the plan under 10% deviations.
CriterionResult online_deviation_robustness() {
    ExperimentConfig cfg;
    cfg.task_count = 10000;
    cfg.total_slots = 1440;
    cfg.max_util = 10.0;
    cfg.rho_values = {0.4};
    cfg.battery_capacities = {0.0, 7000.0, kInfiniteBattery};
    cfg.schedulers = {"online"};
    cfg.deviations = {{10.0, 10.0}};
    cfg.seed_count = 20;
    cfg.base_seed = 777;
    cfg.threads = 0;
    const SweepResult sweep = run_experiment(cfg);

    bool pass = true;
    std::string detail;
    for (double battery : cfg.battery_capacities) {
        double sum = 0.0;
        int count = 0;
        for (const RunRecord& r : sweep.runs) {
            if (r.battery_capacity == battery) {
                sum += r.revenue_pct;
                ++count;
            }
        }
        const double mean = count ? sum / count : 0.0;
        pass = pass && mean >= 93.0;
        if (!detail.empty()) detail += ", ";
        detail += "b=" + format_battery(battery) + ": " + fmt(mean, 2) + "%";
    }
    return {pass, "mean revenue% at 10:10 deviation over 20 seeds (target >= 93%): " + detail};
}

// 9. The planning scheduler out-earns every greedy baseline.
CriterionResult baseline_dominance() {
    ExperimentConfig cfg;
    cfg.task_count = 10000;
    cfg.total_slots = 1440;
    cfg.max_util = 10.0;
    cfg.rho_values = {0.4};
    cfg.battery_capacities = {7000.0};
    cfg.schedulers = {"offline", "baseline:npedf", "baseline:asap-huf", "baseline:asap-luf",
                      "baseline:ea"};
    cfg.seed_count = 20;
    cfg.base_seed = 987;
    cfg.threads = 0;
    const SweepResult sweep = run_experiment(cfg);

    std::map<std::string, std::pair<double, int>> by_scheduler;
    for (const RunRecord& r : sweep.runs) {
        by_scheduler[r.scheduler].first += r.revenue;
        by_scheduler[r.scheduler].second += 1;
    }
    const double planner = by_scheduler.at("offline").first / by_scheduler.at("offline").second;
    bool pass = true;
    std::string detail = "planner " + fmt(planner, 1) + " vs";
    for (const auto& [name, acc] : by_scheduler) {
        if (name == "offline") continue;
        const double mean = acc.first / acc.second;
        pass = pass && planner > mean;
        detail += " " + name.substr(9) + " " + fmt(planner / std::max(mean, 1e-12), 3) + "x";
    }
    return {pass, detail + " (20 seeds, battery 7000)"};
}

// 10. Solar spikes cost at most eight points of revenue%.
CriterionResult spike_robustness() {
    ExperimentConfig cfg;
    cfg.task_count = 10000;
    cfg.total_slots = 1440;
    cfg.max_util = 10.0;
    cfg.rho_values = {0.4};
    cfg.battery_capacities = {7000.0};
    cfg.schedulers = {"online"};
    cfg.deviations = {{5.0, 5.0}};
    cfg.solar_spike_rates = {0.0, 12.0};
    cfg.seed_count = 20;
    cfg.base_seed = 555;
    cfg.threads = 0;
    const SweepResult sweep = run_experiment(cfg);

    double calm_sum = 0.0;
    double spiky_sum = 0.0;
    int calm_n = 0;
    int spiky_n = 0;
    for (const RunRecord& r : sweep.runs) {
        if (r.solar_spike_rate == 0.0) {
            calm_sum += r.revenue_pct;
            ++calm_n;
        } else {
            spiky_sum += r.revenue_pct;
            ++spiky_n;
        }
    }
    const double calm = calm_sum / std::max(1, calm_n);
    const double spiky = spiky_sum / std::max(1, spiky_n);
    const double drop = calm - spiky;
    return {drop <= 8.0, "revenue% " + fmt(calm, 2) + " -> " + fmt(spiky, 2) + " with 12% spiked"
                         " slots, drop " + fmt(drop, 2) + " points (tolerance 8)"};
}

// 11. Every scheduler's output validates, including degenerate inputs.
CriterionResult universal_feasibility() {
    int validated = 0;
    int rejected = 0;
    auto check = [&](const Schedule& schedule, const Instance& instance) {
        const ValidationReport report = validate(schedule, instance);
        if (report.accepted())
            ++validated;
        else {
            ++rejected;
            if (rejected == 1) std::cerr << "  first rejection: " << report.summary() << '\n';
        }
    };
    auto run_everything = [&](Instance instance) {
        instance.config.battery_capacity = 0.0;
        check(schedule_no_battery(instance), instance);
        instance.config.battery_capacity = kInfiniteBattery;
        check(schedule_infinite_battery(instance), instance);
        instance.config.battery_capacity = 4000.0;
        check(schedule_finite_battery(instance), instance);
        for (BaselinePolicy policy : {BaselinePolicy::Npedf, BaselinePolicy::AsapHuf,
                                      BaselinePolicy::AsapLuf, BaselinePolicy::ExecuteOnArrival})
            check(run_baseline(instance, policy), instance);
    };

    for (std::uint64_t seed = 1; seed <= 150; ++seed)
        run_everything(random_general_instance(seed, 0.0));

    // degenerate shapes: all-dark profiles, empty task sets, one-slot days
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Instance dark = random_general_instance(seed, 0.0);
        std::fill(dark.solar.watts.begin(), dark.solar.watts.end(), 0.0);
        run_everything(dark);

        Instance idle = random_general_instance(seed + 50, 0.0);
        idle.tasks.clear();
        run_everything(idle);
    }
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const EsConfig cfg{20.0, 2000.0, 100.0, 0.0};
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> util(0.1, 60.0);
        std::vector<Task> tasks;
        for (int i = 0; i < 5; ++i) {
            const double u = util(rng);
            tasks.push_back(make_task(i + 1, 1, 2, u, revenue_of(u, 1, 2)));
        }
        run_everything(make_instance(cfg, {1200.0}, tasks)); // single-slot horizon
    }
    const int total = validated + rejected;
    return {rejected == 0 && total >= 1000,
            std::to_string(total) + " schedules validated, " + std::to_string(rejected) +
                " rejections"};
}

// 12. Randomized convexity check of the power curve increments.
CriterionResult power_convexity() {
    const EsConfig cfg{20.0, 2000.0, 100.0, 0.0};
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> dist(1e-3, 49.0);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
        double a = dist(rng);
        double b = dist(rng);
        if (a > b) std::swap(a, b);
        if (a == b) continue;
        const double c = std::uniform_real_distribution<double>(1e-3, 100.0 - b)(rng);
        const double upper = power_of(b + c, cfg) - power_of(b, cfg);
        const double lower = power_of(a + c, cfg) - power_of(a, cfg);
        if (!(upper > lower)) ++violations;
    }
    return {violations == 0,
            "10000 random increment triples, " + std::to_string(violations) + " violations"};
}

struct Criterion {
    const char* name;
    CriterionResult (*run)();
};

const Criterion kCriteria[] = {
    {"power-model-goldens", power_model_goldens},
    {"maxflow-oracle-equivalence", maxflow_oracle_equivalence},
    {"snb-vs-optimal-ratio", snb_vs_optimal_ratio},
    {"improvement-monotonicity", improvement_monotonicity},
    {"battery-capacity-trend", battery_capacity_trend},
    {"rho-trend", rho_trend},
    {"online-zero-deviation-identity", online_identity},
    {"online-deviation-robustness", online_deviation_robustness},
    {"baseline-dominance", baseline_dominance},
    {"spike-robustness", spike_robustness},
    {"universal-feasibility", universal_feasibility},
    {"power-convexity", power_convexity},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
    }
    const int count = static_cast<int>(sizeof(kCriteria) / sizeof(kCriteria[0]));
    int failures = 0;
    for (int i = 0; i < count; ++i) {
        if (only > 0 && only != i + 1) continue;
        CriterionResult result;
        try {
            result = kCriteria[i].run();
        } catch (const std::exception& e) {
            result = {false, std::string("exception: ") + e.what()};
        }
        if (!result.pass) ++failures;
        std::cout << '[' << (i + 1 < 10 ? " " : "") << i + 1 << "/12] "
                  << (result.pass ? "PASS" : "FAIL") << "  " << kCriteria[i].name << " — "
                  << result.detail << std::endl;
    }
    if (failures > 0) std::cout << failures << " criterion(s) failed" << std::endl;
    return failures == 0 ? 0 : 1;
}
