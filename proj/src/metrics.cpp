#include "esqoe/metrics.hpp"

#include "esqoe/csv.hpp"
#include "esqoe/error.hpp"

#include <algorithm>

namespace esqoe::metrics {

std::vector<double> fulfillment(const EnergyDemandDistribution &edd,
                                const allocation::AllocationPlan &plan) {
    if (plan.al.size() != edd.size())
        throw Error("plan covers " + std::to_string(plan.al.size()) + " slots, demand covers " +
                    std::to_string(edd.size()));
    std::vector<double> out(edd.size());
    for (SlotIndex i = 0; i < edd.size(); ++i)
        out[i] = edd[i] > 0 ? std::min(1.0, plan.al[i] / edd[i]) : 1.0;
    return out;
}

QoEReport qoe(const EnergyDemandDistribution &edd, const BusinessModel &bm,
              const allocation::AllocationPlan &plan) {
    if (bm.size() != edd.size())
        throw Error("business model covers " + std::to_string(bm.size()) + " slots, demand covers " +
                    std::to_string(edd.size()));
    const auto ratios = fulfillment(edd, plan);
    QoEReport report;
    report.n = edd.size();
    double sum = 0;
    for (SlotIndex i = 0; i < edd.size(); ++i) {
        const double term = ratios[i] * bm[i];
        report.per_slot.push_back({i, ratios[i], bm[i], term});
        sum += term;
    }
    report.qoe = sum / static_cast<double>(report.n);
    report.total_reward = total_reward(plan);
    return report;
}

double total_reward(const allocation::AllocationPlan &plan) {
    double total = 0;
    for (const auto &e : plan.entries)
        total += e.reward;
    return total;
}

std::string summary_csv(const EnergyDemandDistribution &edd, const BusinessModel &bm,
                        const allocation::AllocationPlan &plan) {
    const auto ratios = fulfillment(edd, plan);
    std::string out = "slot_index,r_mah,al_mah,fulfillment,importance\n";
    for (SlotIndex i = 0; i < edd.size(); ++i)
        out += std::to_string(i) + ',' + csv::format(edd[i]) + ',' + csv::format(plan.al[i]) + ',' +
               csv::format(ratios[i]) + ',' + csv::format(bm[i]) + '\n';
    return out;
}

std::string qoe_csv(const EnergyDemandDistribution &edd, const allocation::AllocationPlan &plan,
                    const QoEReport &report) {
    std::string out = "slot_index,r_mah,al_mah,fulfillment,importance,term\n";
    for (const auto &t : report.per_slot)
        out += std::to_string(t.slot) + ',' + csv::format(edd[t.slot]) + ',' + csv::format(plan.al[t.slot]) +
               ',' + csv::format(t.fulfillment) + ',' + csv::format(t.importance) + ',' +
               csv::format(t.term) + '\n';
    out += "qoe," + csv::format(report.qoe) + ",total_reward," + csv::format(report.total_reward) + '\n';
    return out;
}

} // namespace esqoe::metrics
