#ifndef ESQOE_INCENTIVE_HPP_
#define ESQOE_INCENTIVE_HPP_

#include "esqoe/model.hpp"

#include <optional>

namespace esqoe::incentive {

struct RewardQuote {
    ServiceId service_id;
    SlotIndex slot;
    double amount;
    Rank pref_rank;
    double credits;
};

// Absent when the provider does not offer `slot`.
std::optional<Rank> pref_rank(const ProviderTemporalPreferences &ptp, SlotIndex slot);

/// Credits for sharing `amount` mAh in `slot`:
///   amount / rate * credit * rank
/// so less preferred slots (higher rank) pay more. Throws when the amount
/// is not positive or the slot is not offered.
double reward(double amount, SlotIndex slot, const ProviderTemporalPreferences &ptp,
              const IncentiveModel &im);

// Same formula with the rank already looked up.
double reward_for_rank(double amount, Rank rank, const IncentiveModel &im);

RewardQuote quote(ServiceId service_id, double amount, SlotIndex slot,
                  const ProviderTemporalPreferences &ptp, const IncentiveModel &im);

} // namespace esqoe::incentive

#endif
