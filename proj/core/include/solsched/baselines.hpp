#ifndef SOLSCHED_BASELINES_HPP
#define SOLSCHED_BASELINES_HPP

#include "solsched/model.hpp"

#include <string>

// Comparison schedulers. All four sweep slots forward and admit pending
// tasks greedily under the utilization ceiling funded by current solar
// plus whatever charge a greedy battery holds; none of them plans power
// shifts ahead of time. They share the model module's power and battery
// accounting so comparisons against the planning schedulers are
// like-for-like.

namespace solsched {

enum class BaselinePolicy {
    Npedf,   ///< non-preemptive EDF: admit by least slack, carry misfits
    AsapHuf, ///< highest utilization first, carry misfits
    AsapLuf, ///< lowest utilization first, carry misfits
    ExecuteOnArrival, ///< admit by revenue at the arrival slot or drop for good
};

/// Parses npedf | asap-huf | asap-luf | ea (case-insensitive).
BaselinePolicy baseline_policy_from_string(const std::string& name);
std::string to_string(BaselinePolicy policy);

/// Forward-sweep greedy scheduler for `policy`. Carried tasks stay pending
/// until their window closes; surplus solar charges the battery up to
/// capacity and is spent greedily whenever demand exceeds same-slot solar.
Schedule run_baseline(const Instance& instance, BaselinePolicy policy);

} // namespace solsched

#endif // SOLSCHED_BASELINES_HPP
