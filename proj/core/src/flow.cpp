#include "solsched/flow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace solsched {

void FlowNetwork::add_arc(int from, int to, std::int64_t capacity) {
    adjacency[static_cast<std::size_t>(from)].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({to, capacity, 0});
    adjacency[static_cast<std::size_t>(to)].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({from, 0, 0}); // residual
}

FlowNetwork build_unit_network(const Instance& instance) {
    if (instance.config.battery_capacity != 0.0)
        throw std::invalid_argument("unit network requires a battery-less instance");
    for (const Task& t : instance.tasks) {
        if (t.util != 1.0 || t.revenue != 1.0)
            throw std::invalid_argument("unit network requires util == 1 and revenue == 1 "
                                        "for every task");
    }

    FlowNetwork net;
    const int n_tasks = static_cast<int>(instance.tasks.size());
    const int n_slots = instance.total_slots;
    // node layout: 0 = source, 1..n_tasks = tasks, then slots, then sink
    net.source = 0;
    net.first_slot_node = 1 + n_tasks;
    net.sink = net.first_slot_node + n_slots;
    net.adjacency.assign(static_cast<std::size_t>(net.sink) + 1, {});
    net.task_ids.resize(static_cast<std::size_t>(n_tasks));
    net.task_arc_begin.assign(static_cast<std::size_t>(n_tasks), -1);
    net.task_arc_count.assign(static_cast<std::size_t>(n_tasks), 0);

    for (int t = 1; t <= n_slots; ++t) {
        const auto cap = static_cast<std::int64_t>(
            std::floor(usable_utilization(instance.solar.at(t), 0.0, instance.config)));
        net.add_arc(net.first_slot_node + t - 1, net.sink, cap);
    }
    for (int i = 0; i < n_tasks; ++i) {
        const Task& task = instance.tasks[static_cast<std::size_t>(i)];
        net.task_ids[static_cast<std::size_t>(i)] = task.id;
        net.add_arc(net.source, 1 + i, 1);
        net.task_arc_begin[static_cast<std::size_t>(i)] = static_cast<int>(net.arcs.size());
        const int last = std::min(latest_start(task), n_slots);
        for (int t = task.arrival; t <= last; ++t) {
            net.add_arc(1 + i, net.first_slot_node + t - 1, 1);
            net.task_arc_count[static_cast<std::size_t>(i)] += 2;
        }
    }
    return net;
}

namespace {

// Level graph over residual arcs.
bool build_levels(const FlowNetwork& net, std::vector<int>& level) {
    std::fill(level.begin(), level.end(), -1);
    std::deque<int> queue;
    level[static_cast<std::size_t>(net.source)] = 0;
    queue.push_back(net.source);
    while (!queue.empty()) {
        const int node = queue.front();
        queue.pop_front();
        for (int arc_index : net.adjacency[static_cast<std::size_t>(node)]) {
            const FlowNetwork::Arc& arc = net.arcs[static_cast<std::size_t>(arc_index)];
            if (arc.capacity - arc.flow <= 0) continue;
            if (level[static_cast<std::size_t>(arc.to)] != -1) continue;
            level[static_cast<std::size_t>(arc.to)] = level[static_cast<std::size_t>(node)] + 1;
            queue.push_back(arc.to);
        }
    }
    return level[static_cast<std::size_t>(net.sink)] != -1;
}

std::int64_t push_blocking(FlowNetwork& net, const std::vector<int>& level,
                           std::vector<std::size_t>& next_arc, int node, std::int64_t limit) {
    if (node == net.sink || limit == 0) return limit;
    auto& adjacency = net.adjacency[static_cast<std::size_t>(node)];
    for (std::size_t& i = next_arc[static_cast<std::size_t>(node)]; i < adjacency.size(); ++i) {
        const int arc_index = adjacency[i];
        FlowNetwork::Arc& arc = net.arcs[static_cast<std::size_t>(arc_index)];
        if (level[static_cast<std::size_t>(arc.to)] != level[static_cast<std::size_t>(node)] + 1)
            continue;
        const std::int64_t residual = arc.capacity - arc.flow;
        if (residual <= 0) continue;
        const std::int64_t pushed =
            push_blocking(net, level, next_arc, arc.to, std::min(limit, residual));
        if (pushed > 0) {
            arc.flow += pushed;
            net.arcs[static_cast<std::size_t>(arc_index ^ 1)].flow -= pushed;
            return pushed;
        }
    }
    return 0;
}

} // namespace

FlowResult max_flow(FlowNetwork& net) {
    FlowResult result;
    std::vector<int> level(static_cast<std::size_t>(net.node_count()), -1);
    std::vector<std::size_t> next_arc(static_cast<std::size_t>(net.node_count()), 0);
    while (build_levels(net, level)) {
        std::fill(next_arc.begin(), next_arc.end(), std::size_t{0});
        while (true) {
            const std::int64_t pushed = push_blocking(net, level, next_arc, net.source,
                                                      std::numeric_limits<std::int64_t>::max());
            if (pushed == 0) break;
            result.value += pushed;
        }
    }
    for (std::size_t i = 0; i < net.task_ids.size(); ++i) {
        const int begin = net.task_arc_begin[i];
        const int count = net.task_arc_count[i];
        for (int a = begin; a < begin + count; a += 2) {
            const FlowNetwork::Arc& arc = net.arcs[static_cast<std::size_t>(a)];
            if (arc.flow == 1) {
                const int slot = arc.to - net.first_slot_node + 1;
                result.assignment[net.task_ids[i]] = slot;
                break;
            }
        }
    }
    return result;
}

Schedule solve_unit_snb(const Instance& instance) {
    FlowNetwork net = build_unit_network(instance);
    const FlowResult flow = max_flow(net);
    return schedule_from_assignment(instance, flow.assignment);
}

} // namespace solsched
