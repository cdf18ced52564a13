#ifndef SOLSCHED_ONLINE_HPP
#define SOLSCHED_ONLINE_HPP

#include "solsched/model.hpp"

#include <cstdint>
#include <vector>

// Online re-planning: replays an offline schedule (built from predicted
// tasks and solar) against the actual per-slot stream, evicting committed
// tasks when real power falls short and admitting queued tasks when real
// power or unused planned power allows. Committed tasks live in a min-heap
// by revenue, waiting tasks in a max-heap by revenue, so each slot costs
// O((waiting + committed) * (log waiting + log committed)).

namespace solsched {

struct OnlineContext {
    const Instance* predicted = nullptr;
    const Instance* actual = nullptr;
    const Schedule* offline_schedule = nullptr; ///< must validate against *predicted
};

/// One row of the per-slot trace emitted by run_online.
struct OnlineTraceRow {
    int slot = 0;
    double solar_predicted = 0.0;
    double solar_actual = 0.0;
    int committed = 0;  ///< tasks executing at this slot after reconciliation
    int evictions = 0;  ///< planned tasks pushed back to the queue here
    int admissions = 0; ///< queued tasks pulled in here
    double battery = 0.0; ///< charge at slot start
    double power = 0.0;
    double revenue_cum = 0.0;
};

struct OnlineMetrics {
    double revenue = 0.0;
    double offline_revenue = 0.0;
    double revenue_pct = 100.0; ///< 100 * revenue / offline_revenue (100 when offline is 0)
    int completed = 0;
    int dropped = 0;
    int evictions = 0;
    int admissions = 0;
};

struct OnlineResult {
    Schedule schedule; ///< validates against the actual instance
    OnlineMetrics metrics;
    std::vector<OnlineTraceRow> trace;
};

/// Runs the per-slot reconciliation. Offline-scheduled tasks that really
/// arrived are committed at their planned slot; while their power need
/// exceeds what actual solar plus stored charge can fund, the cheapest is
/// evicted back to the waiting queue. Admissions then fill the slot's
/// power budget with the dearest waiting tasks. The admission budget is
/// anchored to the plan — planned power at the slot plus any solar
/// surplus over the prediction, never more than actual solar plus stored
/// charge — so a run with zero deviation reproduces the offline
/// assignment exactly.
///
/// Throws std::invalid_argument when predicted and actual horizons or
/// configs disagree.
OnlineResult run_online(const OnlineContext& context);

} // namespace solsched

#endif // SOLSCHED_ONLINE_HPP
