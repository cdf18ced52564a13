#include "solsched/io.hpp"

#include "solsched/harness.hpp"
#include "solsched/offline.hpp"
#include "solsched/report.hpp"
#include "support/test_util.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

using namespace solsched;
using namespace solsched::testutil;

namespace {

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& name) : path("solsched_io_" + name) {}
    ~TempPath() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("task records round-trip through jsonl") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> util(0.01, 50.0);
    std::uniform_int_distribution<int> arrival(1, 100);
    std::uniform_int_distribution<int> slack(0, 5);
    std::vector<Task> tasks;
    for (int i = 0; i < 200; ++i) {
        const int a = arrival(rng);
        const int d = a + 1 + slack(rng);
        const double u = util(rng);
        Task t = make_task(i + 1, a, d, u, revenue_of(u, a, d));
        t.vehicle_tag = i % 17;
        tasks.push_back(t);
    }
    TempPath file("tasks.jsonl");
    write_tasks_jsonl(file.path, tasks);
    CHECK(read_tasks_jsonl(file.path) == tasks);
}

TEST_CASE("malformed task records carry the line number") {
    TempPath file("broken.jsonl");
    {
        std::ofstream out(file.path);
        out << R"({"id":1,"a":1,"e":1,"d":2,"u":1.0,"r":0.5})" << "\n{oops\n";
    }
    try {
        read_tasks_jsonl(file.path);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("schedule exports have the documented shape") {
    const EsConfig cfg{0.0, 1000.0, 10.0, 0.0};
    const Instance instance = make_instance(
        cfg, {10.0, 10.0},
        {make_task(1, 1, 2, 1.0, revenue_of(1.0, 1, 2)),
         make_task(2, 1, 3, 1.0, revenue_of(1.0, 1, 3))});
    const Schedule schedule = schedule_no_battery(instance);

    TempPath assignment("assignment.csv");
    write_assignment_csv(assignment.path, schedule);
    const std::string text = slurp(assignment.path);
    CHECK(text.rfind("task_id,slot\n", 0) == 0);
    CHECK(text.find("1,") != std::string::npos);

    TempPath slots("slots.csv");
    write_trajectories_csv(slots.path, schedule, instance);
    std::istringstream lines(slurp(slots.path));
    std::string header;
    std::getline(lines, header);
    CHECK(header == "slot,solar,util,power,battery");
    int rows = 0;
    std::string row;
    while (std::getline(lines, row)) ++rows;
    CHECK(rows == instance.total_slots);
}

TEST_CASE("solar csv round-trips through the loader") {
    SolarProfile profile = SolarProfile::zeros(6);
    for (int t = 1; t <= 6; ++t) profile.watts[static_cast<std::size_t>(t)] = 100.0 * t;
    TempPath file("solar.csv");
    write_solar_csv(file.path, profile);
    // normalizing to the existing peak keeps the values
    const SolarProfile loaded = load_solar(file.path, 6, 600.0);
    for (int t = 1; t <= 6; ++t) CHECK(loaded.at(t) == doctest::Approx(profile.at(t)));
}

TEST_CASE("battery capacities format and parse") {
    CHECK(format_battery(kInfiniteBattery) == "inf");
    CHECK(format_battery(7000.0) == "7000");
    CHECK(parse_battery("inf") == kInfiniteBattery);
    CHECK(parse_battery("0") == 0.0);
    CHECK(parse_battery("2000") == 2000.0);
    CHECK_THROWS_AS(parse_battery("-5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_battery("much"), std::invalid_argument);
}

TEST_CASE("config files parse with field-path errors") {
    TempPath file("sweep.conf");
    {
        std::ofstream out(file.path);
        out << "# sweep configuration\n"
               "schedulers = offline, baseline:npedf\n"
               "rho = 0.1, 0.2\n"
               "battery = 0, 7000, inf\n"
               "n = 500\n"
               "slots = 96\n"
               "seeds = 2\n"
               "deviations = 0:0, 10:10\n"
               "out_dir = somewhere\n";
    }
    const ExperimentConfig cfg = parse_experiment_config(file.path);
    CHECK(cfg.schedulers == std::vector<std::string>{"offline", "baseline:npedf"});
    CHECK(cfg.rho_values == std::vector<double>{0.1, 0.2});
    REQUIRE(cfg.battery_capacities.size() == 3);
    CHECK(cfg.battery_capacities[2] == kInfiniteBattery);
    CHECK(cfg.task_count == 500);
    CHECK(cfg.total_slots == 96);
    CHECK(cfg.seed_count == 2);
    REQUIRE(cfg.deviations.size() == 2);
    CHECK(cfg.deviations[1].first == 10.0);
    CHECK(cfg.out_dir == "somewhere");

    ExperimentConfig overridden = cfg;
    apply_config_override(overridden, "seeds", "5");
    CHECK(overridden.seed_count == 5);

    try {
        apply_config_override(overridden, "battery", "-3");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("battery") != std::string::npos);
    }
    CHECK_THROWS_AS(apply_config_override(overridden, "nonsense", "1"), ConfigError);
}

TEST_CASE("online trace files carry one row per slot") {
    std::vector<OnlineTraceRow> trace(3);
    for (int i = 0; i < 3; ++i) {
        trace[static_cast<std::size_t>(i)].slot = i + 1;
        trace[static_cast<std::size_t>(i)].power = 10.0 * i;
    }
    TempPath file("trace.csv");
    write_online_trace_csv(file.path, trace);
    std::istringstream lines(slurp(file.path));
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "slot,s_pred,s_actual,committed,evictions,admissions,battery,power,revenue_cum");
    int rows = 0;
    std::string row;
    while (std::getline(lines, row)) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("runs tables round-trip through csv") {
    std::vector<RunRecord> runs(2);
    runs[0].scheduler = "offline";
    runs[0].battery_capacity = kInfiniteBattery;
    runs[0].rho = 0.2;
    runs[0].revenue = 123.456;
    runs[1].scheduler = "baseline:ea";
    runs[1].battery_capacity = 7000.0;
    runs[1].rho = 0.4;
    runs[1].revenue = 78.9;
    runs[1].seed_index = 3;
    TempPath file("runs.csv");
    write_runs_csv(file.path, runs);
    const std::vector<RunRecord> loaded = read_runs_csv(file.path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].scheduler == "offline");
    CHECK(loaded[0].battery_capacity == kInfiniteBattery);
    CHECK(loaded[0].revenue == 123.456);
    CHECK(loaded[1].seed_index == 3);
}
