#include "esqoe/incentive.hpp"

#include "esqoe/error.hpp"

#include <cmath>
#include <string>

namespace esqoe::incentive {

std::optional<Rank> pref_rank(const ProviderTemporalPreferences &ptp, SlotIndex slot) {
    return ptp.rank_of(slot);
}

double reward_for_rank(double amount, Rank rank, const IncentiveModel &im) {
    if (!(amount > 0) || !std::isfinite(amount))
        throw Error("reward: allocated amount must be positive");
    if (rank < 1)
        throw Error("reward: preference rank must be >= 1");
    return amount / im.rate() * im.credit() * static_cast<double>(rank);
}

double reward(double amount, SlotIndex slot, const ProviderTemporalPreferences &ptp,
              const IncentiveModel &im) {
    auto rank = pref_rank(ptp, slot);
    if (!rank)
        throw Error("reward: provider " + std::to_string(ptp.pid()) + " does not offer slot " +
                    std::to_string(slot));
    return reward_for_rank(amount, *rank, im);
}

RewardQuote quote(ServiceId service_id, double amount, SlotIndex slot,
                  const ProviderTemporalPreferences &ptp, const IncentiveModel &im) {
    auto credits = reward(amount, slot, ptp, im);
    return RewardQuote{service_id, slot, amount, *ptp.rank_of(slot), credits};
}

} // namespace esqoe::incentive
