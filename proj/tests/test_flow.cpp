#include "solsched/flow.hpp"

#include "solsched/offline.hpp"
#include "support/test_util.hpp"

#include <doctest.h>

using namespace solsched;
using namespace solsched::testutil;

namespace {
// static 0, cubic to 1000 W over 10 cores: inverse of 10 W funds 2 cores
const EsConfig kCubeCfg{0.0, 1000.0, 10.0, 0.0};
} // namespace

TEST_CASE("empty network carries no flow") {
    const Instance instance = make_instance(kCubeCfg, {10.0, 10.0}, {});
    FlowNetwork net = build_unit_network(instance);
    CHECK(max_flow(net).value == 0);
}

TEST_CASE("single task maps to its window arcs") {
    const Instance instance =
        make_instance(kCubeCfg, {10.0, 10.0, 10.0}, {make_task(1, 2, 3, 1.0, 1.0)});
    FlowNetwork net = build_unit_network(instance);
    // window [2, 3]: two task->slot arcs
    CHECK(net.task_arc_count[0] == 4); // forward + residual per arc
    const FlowResult flow = max_flow(net);
    CHECK(flow.value == 1);
    REQUIRE(flow.assignment.count(1) == 1);
    const int slot = flow.assignment.at(1);
    CHECK(slot >= 2);
    CHECK(slot <= 3);
}

TEST_CASE("slot capacity bounds concurrent unit tasks") {
    // floor of the inverse power of 10 W is 2 cores: three single-slot
    // tasks compete for capacity 2
    const Instance instance = make_instance(
        kCubeCfg, {10.0},
        {make_task(1, 1, 2, 1.0, 1.0), make_task(2, 1, 2, 1.0, 1.0), make_task(3, 1, 2, 1.0, 1.0)});
    FlowNetwork net = build_unit_network(instance);
    const FlowResult flow = max_flow(net);
    CHECK(flow.value == 2);
    CHECK(flow.value == brute_force_unit_optimum(instance));
}

TEST_CASE("zero-capacity windows exclude a task without disturbing the rest") {
    const Instance with_dark_slot = make_instance(
        kCubeCfg, {10.0, 0.0},
        {make_task(1, 1, 2, 1.0, 1.0), make_task(2, 2, 3, 1.0, 1.0)});
    FlowNetwork net = build_unit_network(with_dark_slot);
    CHECK(max_flow(net).value == 1);
}

TEST_CASE("full-window chain saturates every slot") {
    for (int total = 1; total <= 6; ++total) {
        std::vector<double> solar(static_cast<std::size_t>(total), 5.0); // capacity 1 each
        std::vector<Task> tasks;
        for (int i = 0; i < total; ++i) tasks.push_back(make_task(i + 1, 1, total + 1, 1.0, 1.0));
        const Instance instance = make_instance(kCubeCfg, solar, tasks);
        FlowNetwork net = build_unit_network(instance);
        const FlowResult flow = max_flow(net);
        CHECK(flow.value == total);
        CHECK(flow.value == brute_force_unit_optimum(instance));
    }
}

TEST_CASE("non-unit instances are rejected") {
    Instance wrong_util = make_instance(kCubeCfg, {10.0}, {make_task(1, 1, 2, 0.5, 1.0)});
    CHECK_THROWS_AS(build_unit_network(wrong_util), std::invalid_argument);

    Instance wrong_revenue = make_instance(kCubeCfg, {10.0}, {make_task(1, 1, 2, 1.0, 2.0)});
    CHECK_THROWS_AS(build_unit_network(wrong_revenue), std::invalid_argument);

    Instance with_battery = make_instance(kCubeCfg, {10.0}, {make_task(1, 1, 2, 1.0, 1.0)});
    with_battery.config.battery_capacity = 100.0;
    CHECK_THROWS_AS(build_unit_network(with_battery), std::invalid_argument);
}

TEST_CASE("max flow matches the exhaustive optimum on random instances") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const Instance instance = random_unit_instance(seed);
        FlowNetwork net = build_unit_network(instance);
        const FlowResult flow = max_flow(net);
        CHECK(flow.value == brute_force_unit_optimum(instance));

        // integrality: every saturated task maps to exactly one slot
        CHECK(static_cast<std::int64_t>(flow.assignment.size()) == flow.value);
        for (const auto& [id, slot] : flow.assignment) {
            const Task* task = instance.find_task(id);
            REQUIRE(task != nullptr);
            CHECK(window_contains(*task, slot));
        }
    }
}

TEST_CASE("unit scheduling solves to a validated schedule") {
    for (std::uint64_t seed = 50; seed <= 70; ++seed) {
        const Instance instance = random_unit_instance(seed);
        const Schedule schedule = solve_unit_snb(instance);
        CHECK(validate(schedule, instance).accepted());
        CHECK(schedule.revenue == doctest::Approx(static_cast<double>(
                                      brute_force_unit_optimum(instance))));

        // the greedy sweep can never beat the optimum
        const Schedule greedy = schedule_no_battery(instance);
        CHECK(validate(greedy, instance).accepted());
        CHECK(greedy.revenue <= schedule.revenue + 1e-9);
    }
}
