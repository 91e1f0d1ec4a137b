#ifndef ESQOE_MODEL_HPP_
#define ESQOE_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace esqoe {

using SlotIndex = std::size_t;
using ServiceId = std::uint64_t;
using ProviderId = std::uint64_t;
using RequestId = std::uint64_t;
using ConsumerId = std::uint64_t;
using Minutes = std::int64_t;
using Rank = std::uint32_t;

// Energy below this many mAh counts as nothing left (or nothing needed).
inline constexpr double kEnergyTolerance = 1e-9;

struct Location {
    double x = 0;
    double y = 0;

    friend bool operator==(const Location &, const Location &) = default;
};

/// A contiguous run of equal-length time slots. Slot i covers
/// [origin + i * slot_duration, origin + (i + 1) * slot_duration).
class Horizon {
public:
    Horizon(Minutes origin, Minutes slot_duration, std::int64_t n);

    Minutes origin() const { return origin_; }
    Minutes slot_duration() const { return slot_duration_; }
    std::size_t size() const { return n_; }
    Minutes end() const { return origin_ + static_cast<Minutes>(n_) * slot_duration_; }
    Minutes slot_start(SlotIndex i) const { return origin_ + static_cast<Minutes>(i) * slot_duration_; }

    bool contains(Minutes minute) const { return minute >= origin_ && minute < end(); }

    // Throws when the minute falls outside the horizon.
    SlotIndex slot_of(Minutes minute) const;

    friend bool operator==(const Horizon &, const Horizon &) = default;

private:
    Minutes origin_;
    Minutes slot_duration_;
    std::size_t n_;
};

Horizon build_horizon(Minutes origin, Minutes slot_duration, std::int64_t n);

class EnergyService {
public:
    EnergyService(ServiceId id, ProviderId pid, double ae_mah, Location loc = {});

    ServiceId id() const { return id_; }
    ProviderId pid() const { return pid_; }
    double ae() const { return ae_; }
    const Location &loc() const { return loc_; }

    friend bool operator==(const EnergyService &, const EnergyService &) = default;

private:
    ServiceId id_;
    ProviderId pid_;
    double ae_;
    Location loc_;
};

class EnergyRequest {
public:
    EnergyRequest(RequestId id, ConsumerId cid, double re_mah, Location loc, Minutes st, Minutes et);

    RequestId id() const { return id_; }
    ConsumerId cid() const { return cid_; }
    double re() const { return re_; }
    const Location &loc() const { return loc_; }
    Minutes st() const { return st_; }
    Minutes et() const { return et_; }

    friend bool operator==(const EnergyRequest &, const EnergyRequest &) = default;

private:
    RequestId id_;
    ConsumerId cid_;
    double re_;
    Location loc_;
    Minutes st_;
    Minutes et_;
};

/// Aggregated required energy r_i per slot, one entry per horizon slot.
class EnergyDemandDistribution {
public:
    explicit EnergyDemandDistribution(std::vector<double> required_mah);

    std::size_t size() const { return r_.size(); }
    double operator[](SlotIndex i) const { return r_[i]; }
    const std::vector<double> &values() const { return r_; }
    double total() const;

    friend bool operator==(const EnergyDemandDistribution &, const EnergyDemandDistribution &) = default;

private:
    std::vector<double> r_;
};

/// Slot importance weights I_i in [0, 1].
class BusinessModel {
public:
    explicit BusinessModel(std::vector<double> importance);

    std::size_t size() const { return importance_.size(); }
    double operator[](SlotIndex i) const { return importance_[i]; }
    const std::vector<double> &values() const { return importance_; }

    friend bool operator==(const BusinessModel &, const BusinessModel &) = default;

private:
    std::vector<double> importance_;
};

/// Reward parameters: `credit` per unit, `rate` mAh per credit unit.
class IncentiveModel {
public:
    IncentiveModel(double credit = 1.0, double rate = 1.0);

    double credit() const { return credit_; }
    double rate() const { return rate_; }

    friend bool operator==(const IncentiveModel &, const IncentiveModel &) = default;

private:
    double credit_;
    double rate_;
};

struct SlotRank {
    SlotIndex slot;
    Rank rank;

    friend bool operator==(const SlotRank &, const SlotRank &) = default;
};

/// A provider's offered slots with dense ranks 1..m (1 = most preferred).
class ProviderTemporalPreferences {
public:
    ProviderTemporalPreferences(ProviderId pid, std::vector<SlotRank> prefs);

    ProviderId pid() const { return pid_; }
    const std::vector<SlotRank> &prefs() const { return prefs_; }
    std::size_t size() const { return prefs_.size(); }
    std::optional<Rank> rank_of(SlotIndex slot) const;

    friend bool operator==(const ProviderTemporalPreferences &,
                           const ProviderTemporalPreferences &) = default;

private:
    ProviderId pid_;
    std::vector<SlotRank> prefs_;
};

/// Everything one allocation run needs, validated as a whole.
class Instance {
public:
    Instance(Horizon horizon, std::vector<EnergyService> services,
             std::vector<ProviderTemporalPreferences> ptps, EnergyDemandDistribution edd,
             BusinessModel business_model, IncentiveModel incentive_model,
             std::vector<EnergyRequest> requests = {});

    const Horizon &horizon() const { return horizon_; }
    const std::vector<EnergyService> &services() const { return services_; }
    const std::vector<ProviderTemporalPreferences> &ptps() const { return ptps_; }
    const EnergyDemandDistribution &edd() const { return edd_; }
    const BusinessModel &business_model() const { return business_model_; }
    const IncentiveModel &incentive_model() const { return incentive_model_; }
    const std::vector<EnergyRequest> &requests() const { return requests_; }

    const ProviderTemporalPreferences *ptp_for(ProviderId pid) const;

    friend bool operator==(const Instance &, const Instance &) = default;

private:
    Horizon horizon_;
    std::vector<EnergyService> services_;
    std::vector<ProviderTemporalPreferences> ptps_;
    EnergyDemandDistribution edd_;
    BusinessModel business_model_;
    IncentiveModel incentive_model_;
    std::vector<EnergyRequest> requests_;
};

// Each request's energy goes to the slot containing its start minute.
EnergyDemandDistribution aggregate_edd(std::span<const EnergyRequest> requests,
                                       const Horizon &horizon);

// Throws on the first broken cross-reference between the parts of an
// instance (duplicate ids, a provider without exactly one PTP, PTP slots
// outside the horizon, or length mismatches).
void check_consistency(std::size_t n_slots, std::span<const EnergyService> services,
                       std::span<const ProviderTemporalPreferences> ptps,
                       const EnergyDemandDistribution &edd, const BusinessModel &bm);

} // namespace esqoe

#endif
