#include "esqoe/model.hpp"

#include "esqoe/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

namespace esqoe {

Horizon::Horizon(Minutes origin, Minutes slot_duration, std::int64_t n)
    : origin_(origin), slot_duration_(slot_duration), n_(0) {
    if (slot_duration < 1)
        throw Error("horizon: slot duration must be >= 1 minute, got " + std::to_string(slot_duration));
    if (n < 1)
        throw Error("horizon: slot count must be >= 1, got " + std::to_string(n));
    n_ = static_cast<std::size_t>(n);
}

SlotIndex Horizon::slot_of(Minutes minute) const {
    if (!contains(minute))
        throw Error("minute " + std::to_string(minute) + " is outside the horizon [" +
                    std::to_string(origin_) + ", " + std::to_string(end()) + ")");
    return static_cast<SlotIndex>((minute - origin_) / slot_duration_);
}

Horizon build_horizon(Minutes origin, Minutes slot_duration, std::int64_t n) {
    return Horizon(origin, slot_duration, n);
}

EnergyService::EnergyService(ServiceId id, ProviderId pid, double ae_mah, Location loc)
    : id_(id), pid_(pid), ae_(ae_mah), loc_(loc) {
    if (!(ae_mah > 0) || !std::isfinite(ae_mah))
        throw Error("service " + std::to_string(id) + ": energy amount must be positive");
}

EnergyRequest::EnergyRequest(RequestId id, ConsumerId cid, double re_mah, Location loc, Minutes st,
                             Minutes et)
    : id_(id), cid_(cid), re_(re_mah), loc_(loc), st_(st), et_(et) {
    if (!(re_mah > 0) || !std::isfinite(re_mah))
        throw Error("request " + std::to_string(id) + ": required energy must be positive");
    if (st >= et)
        throw Error("request " + std::to_string(id) + ": start " + std::to_string(st) +
                    " must precede end " + std::to_string(et));
}

EnergyDemandDistribution::EnergyDemandDistribution(std::vector<double> required_mah)
    : r_(std::move(required_mah)) {
    if (r_.empty())
        throw Error("demand distribution needs at least one slot");
    for (std::size_t i = 0; i < r_.size(); ++i)
        if (!(r_[i] >= 0) || !std::isfinite(r_[i]))
            throw Error("demand distribution: slot " + std::to_string(i) + " has negative demand");
}

double EnergyDemandDistribution::total() const {
    return std::accumulate(r_.begin(), r_.end(), 0.0);
}

BusinessModel::BusinessModel(std::vector<double> importance) : importance_(std::move(importance)) {
    if (importance_.empty())
        throw Error("business model needs at least one slot");
    for (std::size_t i = 0; i < importance_.size(); ++i)
        if (!(importance_[i] >= 0.0 && importance_[i] <= 1.0))
            throw Error("business model: importance of slot " + std::to_string(i) +
                        " must lie in [0, 1]");
}

IncentiveModel::IncentiveModel(double credit, double rate) : credit_(credit), rate_(rate) {
    if (!(credit > 0) || !std::isfinite(credit))
        throw Error("incentive model: credit must be positive");
    if (!(rate > 0) || !std::isfinite(rate))
        throw Error("incentive model: rate must be positive");
}

ProviderTemporalPreferences::ProviderTemporalPreferences(ProviderId pid, std::vector<SlotRank> prefs)
    : pid_(pid), prefs_(std::move(prefs)) {
    const auto who = "provider " + std::to_string(pid) + " preferences: ";
    std::unordered_set<SlotIndex> slots;
    std::vector<bool> seen(prefs_.size() + 1, false);
    for (const auto &p : prefs_) {
        if (!slots.insert(p.slot).second)
            throw Error(who + "slot " + std::to_string(p.slot) + " listed twice");
        if (p.rank < 1 || p.rank > prefs_.size() || seen[p.rank])
            throw Error(who + "ranks must be a permutation of 1.." + std::to_string(prefs_.size()));
        seen[p.rank] = true;
    }
}

std::optional<Rank> ProviderTemporalPreferences::rank_of(SlotIndex slot) const {
    for (const auto &p : prefs_)
        if (p.slot == slot)
            return p.rank;
    return std::nullopt;
}

void check_consistency(std::size_t n_slots, std::span<const EnergyService> services,
                       std::span<const ProviderTemporalPreferences> ptps,
                       const EnergyDemandDistribution &edd, const BusinessModel &bm) {
    if (edd.size() != n_slots)
        throw Error("demand distribution has " + std::to_string(edd.size()) + " slots, horizon has " +
                    std::to_string(n_slots));
    if (bm.size() != n_slots)
        throw Error("business model has " + std::to_string(bm.size()) + " slots, horizon has " +
                    std::to_string(n_slots));

    std::vector<ProviderId> pids;
    pids.reserve(ptps.size());
    for (const auto &ptp : ptps) {
        pids.push_back(ptp.pid());
        for (const auto &p : ptp.prefs())
            if (p.slot >= n_slots)
                throw Error("provider " + std::to_string(ptp.pid()) + " prefers slot " +
                            std::to_string(p.slot) + " outside the horizon");
    }
    std::sort(pids.begin(), pids.end());
    if (auto dup = std::adjacent_find(pids.begin(), pids.end()); dup != pids.end())
        throw Error("provider " + std::to_string(*dup) + " has more than one PTP");

    std::vector<ServiceId> ids;
    ids.reserve(services.size());
    for (const auto &s : services) {
        ids.push_back(s.id());
        if (!std::binary_search(pids.begin(), pids.end(), s.pid()))
            throw Error("service " + std::to_string(s.id()) + ": provider " + std::to_string(s.pid()) +
                        " has no PTP");
    }
    std::sort(ids.begin(), ids.end());
    if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end())
        throw Error("duplicate service id " + std::to_string(*dup));
}

Instance::Instance(Horizon horizon, std::vector<EnergyService> services,
                   std::vector<ProviderTemporalPreferences> ptps, EnergyDemandDistribution edd,
                   BusinessModel business_model, IncentiveModel incentive_model,
                   std::vector<EnergyRequest> requests)
    : horizon_(horizon), services_(std::move(services)), ptps_(std::move(ptps)), edd_(std::move(edd)),
      business_model_(std::move(business_model)), incentive_model_(incentive_model),
      requests_(std::move(requests)) {
    check_consistency(horizon_.size(), services_, ptps_, edd_, business_model_);
    std::unordered_set<RequestId> ids;
    for (const auto &r : requests_) {
        if (!ids.insert(r.id()).second)
            throw Error("duplicate request id " + std::to_string(r.id()));
        if (!horizon_.contains(r.st()) || r.et() > horizon_.end())
            throw Error("request " + std::to_string(r.id()) + " lies outside the horizon");
    }
}

const ProviderTemporalPreferences *Instance::ptp_for(ProviderId pid) const {
    auto it = std::find_if(ptps_.begin(), ptps_.end(), [&](const auto &p) { return p.pid() == pid; });
    return it == ptps_.end() ? nullptr : &*it;
}

EnergyDemandDistribution aggregate_edd(std::span<const EnergyRequest> requests,
                                       const Horizon &horizon) {
    std::vector<std::vector<double>> per_slot(horizon.size());
    for (const auto &req : requests) {
        if (!horizon.contains(req.st()) || req.et() > horizon.end())
            throw Error("request " + std::to_string(req.id()) + " lies outside the horizon");
        per_slot[horizon.slot_of(req.st())].push_back(req.re());
    }
    // Summing in sorted order makes the result independent of request order.
    std::vector<double> r(horizon.size(), 0.0);
    for (std::size_t i = 0; i < per_slot.size(); ++i) {
        std::sort(per_slot[i].begin(), per_slot[i].end());
        r[i] = std::accumulate(per_slot[i].begin(), per_slot[i].end(), 0.0);
    }
    return EnergyDemandDistribution(std::move(r));
}

} // namespace esqoe
