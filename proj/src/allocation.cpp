#include "esqoe/allocation.hpp"

#include "esqoe/csv.hpp"
#include "esqoe/error.hpp"
#include "esqoe/incentive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace esqoe::allocation {

std::string_view name(Strategy s) {
    switch (s) {
    case Strategy::importance:
        return "importance";
    case Strategy::fcfs:
        return "fcfs";
    case Strategy::demand:
        return "demand";
    }
    return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
    for (auto s : kAllStrategies)
        if (name(s) == text)
            return s;
    return std::nullopt;
}

StrategyInput StrategyInput::of(const Instance &instance) {
    return StrategyInput{instance.edd(), instance.services(), instance.ptps(), instance.business_model(),
                         instance.incentive_model()};
}

void validate_input(const StrategyInput &input) {
    check_consistency(input.edd.size(), input.services, input.ptps, input.edd, input.business_model);
}

namespace {

struct Candidate {
    Rank rank;
    ServiceId id;
    std::size_t service; // index into input.services
};

std::unordered_map<ProviderId, const ProviderTemporalPreferences *>
index_ptps(std::span<const ProviderTemporalPreferences> ptps) {
    std::unordered_map<ProviderId, const ProviderTemporalPreferences *> out;
    out.reserve(ptps.size());
    for (const auto &p : ptps)
        out.emplace(p.pid(), &p);
    return out;
}

struct ByRank {
    bool operator()(const Candidate &a, const Candidate &b) const {
        return a.rank != b.rank ? a.rank < b.rank : a.id < b.id;
    }
};

struct ById {
    bool operator()(const Candidate &a, const Candidate &b) const { return a.id < b.id; }
};

// Shared inner loop of every strategy: walk slots in `slot_order` and fill
// each from its candidates, best first, until demand or candidates run
// out. Candidates sit in a heap per slot, so only the services a slot
// actually consumes get ordered.
template <class Before>
AllocationPlan allocate(const StrategyInput &input, Strategy strategy, const std::vector<SlotIndex> &slot_order,
                        Before before) {
    const auto n = input.edd.size();

    std::vector<const ProviderTemporalPreferences *> ptp_by_pid;
    ptp_by_pid.reserve(input.ptps.size());
    for (const auto &p : input.ptps)
        ptp_by_pid.push_back(&p);
    std::sort(ptp_by_pid.begin(), ptp_by_pid.end(),
              [](const auto *a, const auto *b) { return a->pid() < b->pid(); });
    auto ptp_of = [&](ProviderId pid) {
        return *std::lower_bound(ptp_by_pid.begin(), ptp_by_pid.end(), pid,
                                 [](const auto *p, ProviderId v) { return p->pid() < v; });
    };

    std::vector<std::vector<Candidate>> candidates(n);
    for (std::size_t j = 0; j < input.services.size(); ++j) {
        const auto &s = input.services[j];
        for (const auto &p : ptp_of(s.pid())->prefs())
            candidates[p.slot].push_back({p.rank, s.id(), j});
    }

    std::vector<double> remaining(input.services.size());
    for (std::size_t j = 0; j < input.services.size(); ++j)
        remaining[j] = input.services[j].ae();

    // std heaps keep the largest element on top; invert for best-first.
    auto worse = [&](const Candidate &a, const Candidate &b) { return before(b, a); };

    AllocationPlan plan;
    plan.strategy = std::string(name(strategy));
    plan.al.assign(n, 0.0);
    for (auto slot : slot_order) {
        double residual = input.edd[slot];
        auto &heap = candidates[slot];
        if (residual <= kEnergyTolerance)
            continue;
        std::make_heap(heap.begin(), heap.end(), worse);
        while (residual > kEnergyTolerance && !heap.empty()) {
            std::pop_heap(heap.begin(), heap.end(), worse);
            const Candidate c = heap.back();
            heap.pop_back();
            if (remaining[c.service] <= kEnergyTolerance)
                continue; // exhausted: gone from every slot
            const double amount = std::min(residual, remaining[c.service]);
            residual -= amount;
            remaining[c.service] -= amount;
            if (remaining[c.service] <= kEnergyTolerance)
                remaining[c.service] = 0;
            plan.al[slot] += amount;
            const double credits = incentive::reward_for_rank(amount, c.rank, input.incentive_model);
            plan.total_reward += credits;
            plan.entries.push_back({c.id, slot, amount, c.rank, credits});
        }
    }
    return plan;
}

std::vector<SlotIndex> slots_by(std::size_t n, const std::vector<double> &key) {
    std::vector<SlotIndex> order(n);
    std::iota(order.begin(), order.end(), SlotIndex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](SlotIndex a, SlotIndex b) { return key[a] > key[b]; });
    return order;
}

} // namespace

AllocationPlan compose_importance(const StrategyInput &input) {
    validate_input(input);
    return allocate(input, Strategy::importance,
                    slots_by(input.edd.size(), input.business_model.values()), ByRank{});
}

AllocationPlan compose_fcfs(const StrategyInput &input) {
    validate_input(input);
    std::vector<SlotIndex> order(input.edd.size());
    std::iota(order.begin(), order.end(), SlotIndex{0});
    return allocate(input, Strategy::fcfs, order, ById{});
}

AllocationPlan compose_demand_priority(const StrategyInput &input) {
    validate_input(input);
    return allocate(input, Strategy::demand, slots_by(input.edd.size(), input.edd.values()), ById{});
}

AllocationPlan compose(Strategy strategy, const StrategyInput &input) {
    switch (strategy) {
    case Strategy::importance:
        return compose_importance(input);
    case Strategy::fcfs:
        return compose_fcfs(input);
    case Strategy::demand:
        return compose_demand_priority(input);
    }
    throw Error("unknown strategy");
}

ValidationReport validate_plan(const AllocationPlan &plan, const StrategyInput &input) {
    ValidationReport report;
    const auto n = input.edd.size();
    const auto ptp_of = index_ptps(input.ptps);

    std::unordered_map<ServiceId, const EnergyService *> service_of;
    for (const auto &s : input.services)
        service_of.emplace(s.id(), &s);

    std::vector<double> al(n, 0.0);
    std::unordered_map<ServiceId, double> drawn;
    double total = 0;
    for (std::size_t e = 0; e < plan.entries.size(); ++e) {
        const auto &entry = plan.entries[e];
        const auto where = "entry " + std::to_string(e) + " (service " + std::to_string(entry.service_id) +
                           ", slot " + std::to_string(entry.slot) + ")";
        total += entry.reward;
        if (!(entry.amount > 0)) {
            report.add(where + ": amount must be positive");
            continue;
        }
        auto sit = service_of.find(entry.service_id);
        if (sit == service_of.end()) {
            report.add(where + ": unknown service");
            continue;
        }
        if (entry.slot >= n) {
            report.add(where + ": slot outside the horizon");
            continue;
        }
        al[entry.slot] += entry.amount;
        drawn[entry.service_id] += entry.amount;

        auto pit = ptp_of.find(sit->second->pid());
        auto rank = pit == ptp_of.end() ? std::nullopt : pit->second->rank_of(entry.slot);
        if (!rank) {
            report.add(where + ": slot " + std::to_string(entry.slot) + " is not eligible for provider " +
                       std::to_string(sit->second->pid()));
            continue;
        }
        if (*rank != entry.pref_rank)
            report.add(where + ": recorded rank " + std::to_string(entry.pref_rank) + " but PTP says " +
                       std::to_string(*rank));
        const double expected = incentive::reward_for_rank(entry.amount, *rank, input.incentive_model);
        if (std::abs(expected - entry.reward) > 1e-9 * std::max(1.0, std::abs(expected)))
            report.add(where + ": reward " + csv::format(entry.reward) + " != expected " +
                       csv::format(expected));
    }

    for (SlotIndex i = 0; i < n; ++i)
        if (al[i] > input.edd[i] + kEnergyTolerance)
            report.add("slot " + std::to_string(i) + " over-allocated: " + csv::format(al[i]) + " > demand " +
                       csv::format(input.edd[i]));
    for (const auto &[id, amount] : drawn)
        if (amount > service_of.at(id)->ae() + kEnergyTolerance)
            report.add("service " + std::to_string(id) + " over-drawn: " + csv::format(amount) + " > " +
                       csv::format(service_of.at(id)->ae()));

    if (plan.al.size() != n) {
        report.add("plan has " + std::to_string(plan.al.size()) + " slot totals, horizon has " +
                   std::to_string(n));
    } else {
        for (SlotIndex i = 0; i < n; ++i)
            if (std::abs(plan.al[i] - al[i]) > kEnergyTolerance)
                report.add("slot " + std::to_string(i) + " total " + csv::format(plan.al[i]) +
                           " disagrees with its entries (" + csv::format(al[i]) + ")");
    }
    if (std::abs(plan.total_reward - total) > 1e-9 * std::max(1.0, std::abs(total)))
        report.add("total reward " + csv::format(plan.total_reward) + " disagrees with its entries (" +
                   csv::format(total) + ")");
    return report;
}

std::string allocation_csv(const AllocationPlan &plan) {
    std::string out = "strategy,slot_index,service_id,amount_mah,pref_rank,reward_credits\n";
    for (const auto &e : plan.entries) {
        out += plan.strategy + ',' + std::to_string(e.slot) + ',' + std::to_string(e.service_id) + ',' +
               csv::format(e.amount) + ',' + std::to_string(e.pref_rank) + ',' + csv::format(e.reward) + '\n';
    }
    return out;
}

} // namespace esqoe::allocation
