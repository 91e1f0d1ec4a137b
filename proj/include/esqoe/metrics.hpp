#ifndef ESQOE_METRICS_HPP_
#define ESQOE_METRICS_HPP_

#include "esqoe/allocation.hpp"
#include "esqoe/model.hpp"

#include <string>
#include <vector>

namespace esqoe::metrics {

struct SlotTerm {
    SlotIndex slot;
    double fulfillment; // Al_i / r_i capped at 1; 1 when r_i = 0
    double importance;
    double term;        // fulfillment * importance
};

struct QoEReport {
    double qoe = 0;
    std::vector<SlotTerm> per_slot;
    double total_reward = 0;
    std::size_t n = 0;
};

// Per-slot Al_i / r_i, capped at 1.0. A slot without demand counts as
// fully satisfied.
std::vector<double> fulfillment(const EnergyDemandDistribution &edd,
                                const allocation::AllocationPlan &plan);

/// Importance-weighted mean fulfillment:
///   qoe = sum_i(fulfillment_i * I_i) / n
QoEReport qoe(const EnergyDemandDistribution &edd, const BusinessModel &bm,
              const allocation::AllocationPlan &plan);

double total_reward(const allocation::AllocationPlan &plan);

// slot_index,r_mah,al_mah,fulfillment,importance
std::string summary_csv(const EnergyDemandDistribution &edd, const BusinessModel &bm,
                        const allocation::AllocationPlan &plan);

// slot_index,r_mah,al_mah,fulfillment,importance,term
// followed by a trailing "qoe,<value>,total_reward,<value>" row.
std::string qoe_csv(const EnergyDemandDistribution &edd, const allocation::AllocationPlan &plan,
                    const QoEReport &report);

} // namespace esqoe::metrics

#endif
