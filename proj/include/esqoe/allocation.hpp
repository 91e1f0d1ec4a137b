#ifndef ESQOE_ALLOCATION_HPP_
#define ESQOE_ALLOCATION_HPP_

#include "esqoe/model.hpp"
#include "esqoe/validation.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace esqoe::allocation {

enum class Strategy {
    importance, // slots by business importance, cheapest preference first
    fcfs,       // slots chronologically, services in registration order
    demand,     // slots by demand size, services in registration order
};

std::string_view name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view text);
inline constexpr Strategy kAllStrategies[] = {Strategy::importance, Strategy::fcfs, Strategy::demand};

struct PlanEntry {
    ServiceId service_id;
    SlotIndex slot;
    double amount;
    Rank pref_rank;
    double reward;

    friend bool operator==(const PlanEntry &, const PlanEntry &) = default;
};

struct AllocationPlan {
    std::string strategy;
    std::vector<PlanEntry> entries; // in allocation order
    std::vector<double> al;         // allocated mAh per slot
    double total_reward = 0;

    friend bool operator==(const AllocationPlan &, const AllocationPlan &) = default;
};

/// Non-owning view of what a strategy consumes. The referenced data must
/// outlive the view.
struct StrategyInput {
    const EnergyDemandDistribution &edd;
    std::span<const EnergyService> services;
    std::span<const ProviderTemporalPreferences> ptps;
    const BusinessModel &business_model;
    const IncentiveModel &incentive_model;

    static StrategyInput of(const Instance &instance);
};

// Throws on inconsistent input (same rules as Instance).
void validate_input(const StrategyInput &input);

/// Importance-based composition. Slots are served in descending
/// importance (lower index first on ties). Inside a slot, services that
/// offer it and still hold energy are tried by ascending preference rank,
/// then id; each gives min(residual demand, residual energy). A service
/// leaves the pool only once fully consumed, so a partially used one can
/// still serve later slots.
AllocationPlan compose_importance(const StrategyInput &input);

// Chronological slots, services by ascending id.
AllocationPlan compose_fcfs(const StrategyInput &input);

// Slots by descending demand (lower index first on ties), services by
// ascending id.
AllocationPlan compose_demand_priority(const StrategyInput &input);

AllocationPlan compose(Strategy strategy, const StrategyInput &input);

// Reports every broken plan invariant: non-positive amounts, unknown
// services, over-allocated slots, over-drawn services, slots outside the
// provider's preferences, and rewards that disagree with the incentive
// model.
ValidationReport validate_plan(const AllocationPlan &plan, const StrategyInput &input);

// strategy,slot_index,service_id,amount_mah,pref_rank,reward_credits
std::string allocation_csv(const AllocationPlan &plan);

} // namespace esqoe::allocation

#endif
