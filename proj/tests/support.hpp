#ifndef ESQOE_TESTS_SUPPORT_HPP_
#define ESQOE_TESTS_SUPPORT_HPP_

// Test-only generators and oracles. The oracles restate the formulas from
// scratch and never call into the code paths they check.

#include "esqoe/allocation.hpp"
#include "esqoe/cpnet.hpp"
#include "esqoe/model.hpp"
#include "esqoe/rng.hpp"

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace esqoe::testing {

inline std::filesystem::path temp_dir(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("esqoe_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// --- CP-nets -------------------------------------------------------------

// The two-attribute net of the motivating example: D1 > D2; under D1 the
// first slot is preferred, under D2 the second.
inline cpnet::CPNet cp2() {
    cpnet::CPNet net;
    auto d = net.add_attribute("D", {"D1", "D2"});
    auto t = net.add_attribute("T", {"T1", "T2"});
    net.set_parents(t, {d});
    net.set_row(d, {}, {0, 1});
    net.set_row(t, {0}, {0, 1});
    net.set_row(t, {1}, {1, 0});
    return net;
}

// Random valid net: up to `max_attrs` attributes with 2..max_values values,
// parents drawn among earlier attributes (so acyclic), full random CPTs.
inline cpnet::CPNet random_net(Rng &rng, std::size_t max_attrs = 3, std::size_t max_values = 3) {
    cpnet::CPNet net;
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_attrs)));
    for (std::size_t i = 0; i < n; ++i) {
        const auto m = static_cast<std::size_t>(rng.uniform_int(2, static_cast<std::int64_t>(max_values)));
        std::vector<std::string> domain;
        for (std::size_t v = 0; v < m; ++v)
            domain.push_back("x" + std::to_string(i) + "_" + std::to_string(v));
        net.add_attribute("X" + std::to_string(i), domain);
        std::vector<std::size_t> parents;
        for (std::size_t p = 0; p < i; ++p)
            if (rng.uniform_int(0, 1))
                parents.push_back(p);
        net.set_parents(i, parents);

        std::vector<cpnet::ValueIndex> key(parents.size(), 0);
        for (bool more = true; more;) {
            std::vector<cpnet::ValueIndex> order(m);
            for (std::size_t v = 0; v < m; ++v)
                order[v] = v;
            for (std::size_t v = m; v > 1; --v)
                std::swap(order[v - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(v - 1)))]);
            net.set_row(i, key, order);
            more = false;
            for (std::size_t k = key.size(); k-- > 0;) {
                if (++key[k] < net.attribute(parents[k]).domain.size()) {
                    more = true;
                    break;
                }
                key[k] = 0;
            }
        }
    }
    return net;
}

// Transitive closure of the worsening-flip relation by Floyd-Warshall over
// an explicitly enumerated outcome list. closure[a][b] = a dominates b.
struct DominanceOracle {
    std::vector<cpnet::Outcome> outcomes;
    std::vector<std::vector<bool>> closure;

    explicit DominanceOracle(const cpnet::CPNet &net) {
        // Enumerate outcomes by counting (last attribute fastest).
        std::vector<cpnet::ValueIndex> v(net.size(), 0);
        for (bool more = true; more;) {
            outcomes.push_back({v});
            more = false;
            for (std::size_t k = v.size(); k-- > 0;) {
                if (++v[k] < net.attribute(k).domain.size()) {
                    more = true;
                    break;
                }
                v[k] = 0;
            }
        }
        const auto m = outcomes.size();
        closure.assign(m, std::vector<bool>(m, false));
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                closure[a][b] = one_flip_worse(net, outcomes[a], outcomes[b]);
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t a = 0; a < m; ++a)
                if (closure[a][k])
                    for (std::size_t b = 0; b < m; ++b)
                        if (closure[k][b])
                            closure[a][b] = true;
    }

    std::size_t index(const cpnet::Outcome &o) const {
        return static_cast<std::size_t>(std::find(outcomes.begin(), outcomes.end(), o) - outcomes.begin());
    }

    // b differs from a in exactly one attribute and that attribute's CPT row
    // (given a's parent values, which b shares) ranks a's value above b's.
    static bool one_flip_worse(const cpnet::CPNet &net, const cpnet::Outcome &a, const cpnet::Outcome &b) {
        std::size_t diff = net.size();
        for (std::size_t k = 0; k < net.size(); ++k) {
            if (a.values[k] != b.values[k]) {
                if (diff != net.size())
                    return false;
                diff = k;
            }
        }
        if (diff == net.size())
            return false;
        std::vector<cpnet::ValueIndex> key;
        for (auto p : net.attribute(diff).parents)
            key.push_back(a.values[p]);
        const auto &row = net.rows(diff).at(key);
        auto pos = [&](cpnet::ValueIndex v) { return std::find(row.begin(), row.end(), v) - row.begin(); };
        return pos(a.values[diff]) < pos(b.values[diff]);
    }
};

// --- QoE and reward oracles ----------------------------------------------

// Importance-weighted mean fulfillment, written independently of
// metrics::qoe: zero-demand slots count as satisfied, ratios capped at 1.
inline double qoe_oracle(const std::vector<double> &r, const std::vector<double> &importance,
                         const std::vector<double> &al) {
    long double sum = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        double ratio = 1.0;
        if (r[i] > 0) {
            ratio = al[i] / r[i];
            if (ratio > 1.0)
                ratio = 1.0;
        }
        sum += static_cast<long double>(ratio * importance[i]);
    }
    return static_cast<double>(sum / static_cast<long double>(r.size()));
}

inline double reward_oracle(double amount, double rate, double credit, unsigned rank) {
    return amount * credit * rank / rate;
}

// --- instances -----------------------------------------------------------

struct OwnedInput {
    EnergyDemandDistribution edd;
    std::vector<EnergyService> services;
    std::vector<ProviderTemporalPreferences> ptps;
    BusinessModel bm;
    IncentiveModel im;

    allocation::StrategyInput view() const { return {edd, services, ptps, bm, im}; }
};

// One service per provider (pid = id = j + 1); `offers[j]` lists slots best
// first.
inline OwnedInput make_input(std::vector<double> r, std::vector<double> importance, std::vector<double> ae,
                             std::vector<std::vector<SlotIndex>> offers, IncentiveModel im = {}) {
    std::vector<EnergyService> services;
    std::vector<ProviderTemporalPreferences> ptps;
    for (std::size_t j = 0; j < ae.size(); ++j) {
        services.emplace_back(j + 1, j + 1, ae[j]);
        std::vector<SlotRank> prefs;
        for (std::size_t k = 0; k < offers[j].size(); ++k)
            prefs.push_back({offers[j][k], static_cast<Rank>(k + 1)});
        ptps.emplace_back(j + 1, prefs);
    }
    return OwnedInput{EnergyDemandDistribution(std::move(r)), std::move(services), std::move(ptps),
                      BusinessModel(std::move(importance)), im};
}

} // namespace esqoe::testing

#endif
