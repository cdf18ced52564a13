#ifndef SOLSCHED_FLOW_HPP
#define SOLSCHED_FLOW_HPP

#include "solsched/model.hpp"

#include <cstdint>
#include <vector>

// Optimal solver for the no-battery special case in which every task has
// unit utilization and unit revenue. The problem reduces to maximum flow
// on a source -> task -> slot -> sink network; the max-flow value equals
// the maximum achievable revenue and an integral flow yields the
// task-to-slot assignment directly.

namespace solsched {

/// Directed flow network with residual arcs. Arc capacities are
/// non-negative integers; a maximum flow found on such a network is
/// integral on every arc.
struct FlowNetwork {
    struct Arc {
        int to = 0;
        std::int64_t capacity = 0;
        std::int64_t flow = 0;
    };

    int source = 0;
    int sink = 0;
    std::vector<Arc> arcs;                   ///< forward arcs at even indices, residuals at odd
    std::vector<std::vector<int>> adjacency; ///< node -> arc indices

    // Bookkeeping for mapping an integral flow back to an assignment.
    std::vector<std::int64_t> task_ids;  ///< task node i serves task_ids[i]
    std::vector<int> task_arc_begin;     ///< first task->slot arc index per task node
    std::vector<int> task_arc_count;
    int first_slot_node = 0;

    int node_count() const { return static_cast<int>(adjacency.size()); }
    void add_arc(int from, int to, std::int64_t capacity);
};

/// Builds the unit-case network: source->task arcs of capacity 1, task->
/// slot arcs of capacity 1 over each task's execution window, and slot->
/// sink arcs whose capacity is the solar-funded utilization floored to an
/// integer. Throws std::invalid_argument unless every task has util == 1
/// and revenue == 1 and the instance has no battery.
FlowNetwork build_unit_network(const Instance& instance);

struct FlowResult {
    std::int64_t value = 0;
    Assignment assignment; ///< saturated task -> its slot
};

/// Maximum source->sink flow via breadth-first level graphs with blocking
/// augmentation. With integral capacities the result is integral and each
/// saturated task node maps to exactly one slot.
FlowResult max_flow(FlowNetwork& net);

/// End-to-end optimal schedule for the unit special case; the returned
/// schedule's revenue equals the max-flow value.
Schedule solve_unit_snb(const Instance& instance);

} // namespace solsched

#endif // SOLSCHED_FLOW_HPP
