#include "solsched/harness.hpp"

#include "solsched/report.hpp"
#include "support/test_util.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace solsched;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.task_count = 300;
    cfg.total_slots = 96;
    cfg.rho_values = {0.2};
    cfg.battery_capacities = {0.0};
    cfg.schedulers = {"offline"};
    cfg.seed_count = 1;
    cfg.threads = 1;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("zero solar earns zero revenue") {
    ExperimentConfig cfg = tiny_config();
    cfg.solar_peak = 0.0; // an all-dark synthetic day
    const SweepResult result = run_experiment(cfg);
    REQUIRE(result.runs.size() == 1);
    CHECK(result.runs[0].revenue == 0.0);
    CHECK(result.runs[0].completed == 0);
}

TEST_CASE("identical servers double the revenue exactly") {
    ExperimentConfig cfg = tiny_config();
    const double single = run_experiment(cfg).runs[0].revenue;

    cfg.es_count = 2;
    cfg.es_seed_stride = 0; // same seed, identical instances
    const RunRecord& doubled = run_experiment(cfg).runs[0];
    CHECK(doubled.revenue == 2.0 * single);
    CHECK(doubled.es_count == 2);
}

TEST_CASE("distinct servers differ under a non-zero stride") {
    ExperimentConfig cfg = tiny_config();
    const double single = run_experiment(cfg).runs[0].revenue;
    cfg.es_count = 2;
    cfg.es_seed_stride = 1;
    CHECK(run_experiment(cfg).runs[0].revenue != 2.0 * single);
}

TEST_CASE("reruns reproduce identical bytes") {
    ExperimentConfig cfg = tiny_config();
    cfg.schedulers = {"offline", "baseline:npedf", "online"};
    cfg.battery_capacities = {0.0, 500.0};
    cfg.deviations = {{10.0, 10.0}};
    cfg.seed_count = 2;

    const SweepResult first = run_experiment(cfg);
    const SweepResult second = run_experiment(cfg);
    const std::string a = "solsched_rerun_a.csv";
    const std::string b = "solsched_rerun_b.csv";
    write_runs_csv(a, first.runs);
    write_runs_csv(b, second.runs);
    CHECK(slurp(a) == slurp(b));
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("threaded and serial sweeps agree") {
    ExperimentConfig cfg = tiny_config();
    cfg.schedulers = {"offline", "baseline:ea"};
    cfg.battery_capacities = {0.0, 1000.0};
    cfg.seed_count = 2;

    cfg.threads = 1;
    const SweepResult serial = run_experiment(cfg);
    cfg.threads = 4;
    const SweepResult threaded = run_experiment(cfg);
    REQUIRE(serial.runs.size() == threaded.runs.size());
    for (std::size_t i = 0; i < serial.runs.size(); ++i) {
        CHECK(serial.runs[i].revenue == threaded.runs[i].revenue);
        CHECK(serial.runs[i].scheduler == threaded.runs[i].scheduler);
    }
}

TEST_CASE("an empty seed list produces a header-only table") {
    ExperimentConfig cfg = tiny_config();
    cfg.seed_count = 0;
    const SweepResult result = run_experiment(cfg);
    CHECK(result.runs.empty());
    const std::string path = "solsched_empty.csv";
    write_runs_csv(path, result.runs);
    const std::string text = slurp(path);
    CHECK(text.find('\n') == text.size() - 1); // header line only
    std::remove(path.c_str());
}

TEST_CASE("config problems name the offending field") {
    ExperimentConfig cfg = tiny_config();
    cfg.schedulers = {};
    try {
        run_experiment(cfg);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("schedulers") != std::string::npos);
    }

    cfg = tiny_config();
    cfg.schedulers = {"sib"};
    cfg.battery_capacities = {0.0, 7000.0}; // no infinite entry for sib
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);

    cfg = tiny_config();
    cfg.rho_values = {-1.0};
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("scheduler dispatch covers every selector") {
    ExperimentConfig cfg = tiny_config();
    cfg.task_count = 120;
    cfg.battery_capacities = {0.0, 600.0, kInfiniteBattery};
    cfg.schedulers = {"offline", "snb", "sib", "sfb", "maxflow", "baseline:asap-huf", "online"};
    const SweepResult result = run_experiment(cfg);
    // snb/offline/baseline/online run per battery; sib only on inf; sfb on
    // the two finite entries; maxflow only on zero
    int maxflow_rows = 0;
    int sib_rows = 0;
    for (const RunRecord& run : result.runs) {
        if (run.scheduler == "maxflow") {
            ++maxflow_rows;
            CHECK(run.battery_capacity == 0.0);
        }
        if (run.scheduler == "sib") {
            ++sib_rows;
            CHECK(run.battery_capacity == kInfiniteBattery);
        }
        CHECK(run.energy_consumed <= run.energy_harvested + 1e-6);
    }
    CHECK(maxflow_rows == 1);
    CHECK(sib_rows == 1);
}

TEST_CASE("aggregation groups by everything but the seed") {
    ExperimentConfig cfg = tiny_config();
    cfg.seed_count = 3;
    cfg.battery_capacities = {0.0, 800.0};
    const SweepResult result = run_experiment(cfg);
    const std::vector<AggregateRow> rows = aggregate_runs(result.runs);
    REQUIRE(rows.size() == 2);
    for (const AggregateRow& row : rows) CHECK(row.samples == 3);
}

TEST_CASE("chart emission writes the expected families") {
    ExperimentConfig cfg = tiny_config();
    cfg.task_count = 150;
    cfg.rho_values = {0.1, 0.4};
    cfg.battery_capacities = {0.0, 500.0, kInfiniteBattery};
    cfg.schedulers = {"offline", "baseline:npedf", "online"};
    cfg.deviations = {{0.0, 0.0}, {10.0, 10.0}};
    const SweepResult result = run_experiment(cfg);

    const std::vector<std::string> charts = write_charts(".", result.runs);
    bool battery_chart = false;
    bool rho_chart = false;
    for (const std::string& name : charts) {
        battery_chart |= name == "battery_revenue.svg";
        rho_chart |= name == "rho_revenue.svg";
        const std::string content = slurp(name);
        CHECK(content.find("<svg") != std::string::npos);
        CHECK(content.find("<polyline") != std::string::npos);
        std::remove(name.c_str());
    }
    CHECK(battery_chart);
    CHECK(rho_chart);
}
