// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Tolerances and runtime limits are fixed below.

#include "support.hpp"

#include "esqoe/allocation.hpp"
#include "esqoe/bench.hpp"
#include "esqoe/cpnet.hpp"
#include "esqoe/incentive.hpp"
#include "esqoe/metrics.hpp"
#include "esqoe/workload.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace esqoe;
using allocation::AllocationPlan;
using allocation::Strategy;

namespace {

constexpr double kQoeTol = 1e-12;
constexpr double kRewardTol = 1e-9;
constexpr double kLinearityTol = 1e-12;
constexpr double kSpearmanMin = 0.9;
constexpr double kOptTol = 1e-12;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string &why) {
        if (pass)
            detail = why;
        pass = false;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

int failures = 0;

void report(int id, const std::string &what, Outcome o, double elapsed, double limit) {
    if (limit > 0 && elapsed >= limit)
        o.fail("runtime " + fmt(elapsed, 3) + " s over the " + fmt(limit, 3) + " s limit");
    if (!o.pass)
        ++failures;
    std::printf("criterion %d: %s  %s [%.3f s]%s%s\n", id, o.pass ? "PASS" : "FAIL", what.c_str(), elapsed,
                o.detail.empty() ? "" : "  -- ", o.detail.c_str());
    std::fflush(stdout);
}

AllocationPlan plan_with(std::vector<double> al) {
    AllocationPlan p;
    p.strategy = "manual";
    p.al = std::move(al);
    return p;
}

// --- 1 -------------------------------------------------------------------

Outcome qoe_oracle_check() {
    Outcome out;
    auto compare = [&](const std::vector<double> &r, const std::vector<double> &imp, const std::vector<double> &al) {
        const double got = metrics::qoe(EnergyDemandDistribution(r), BusinessModel(imp), plan_with(al)).qoe;
        const double want = testing::qoe_oracle(r, imp, al);
        if (!(std::abs(got - want) <= kQoeTol))
            out.fail("qoe " + fmt(got, 17) + " vs oracle " + fmt(want, 17));
        return got;
    };

    compare({400, 400}, {1, 1}, {400, 400});
    compare({400, 400}, {0.4, 0.9}, {0, 0});
    if (compare({400, 400}, {0.4, 0.9}, {0, 400}) != 0.45)
        out.fail("two-slot example is not exactly 0.45");

    Rng rng(1001);
    for (int i = 0; i < 500; ++i) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 12));
        std::vector<double> r(n), imp(n), al(n);
        for (std::size_t s = 0; s < n; ++s) {
            r[s] = rng.uniform_int(0, 4) == 0 ? 0.0 : static_cast<double>(rng.uniform_int(1, 800));
            imp[s] = rng.uniform01();
            al[s] = std::floor(r[s] * rng.uniform01());
        }
        compare(r, imp, al);
    }
    return out;
}

// --- 2 -------------------------------------------------------------------

Outcome reward_oracle_check() {
    Outcome out;
    ProviderTemporalPreferences fixture(1, {{0, 1}, {1, 2}, {2, 3}});
    const IncentiveModel im(2, 10);
    if (std::abs(incentive::reward(100, 2, fixture, im) - 60) > kRewardTol * 60)
        out.fail("100 mAh at rank 3 is not 60 credits");
    if (std::abs(incentive::reward(50, 1, fixture, im) - 20) > kRewardTol * 20)
        out.fail("50 mAh at rank 2 is not 20 credits");

    Rng rng(2002);
    for (int i = 0; i < 500; ++i) {
        const double amount = 0.1 + rng.uniform01() * 1000;
        const double credit = 0.01 + rng.uniform01() * 20;
        const double rate = 0.01 + rng.uniform01() * 50;
        const auto m = static_cast<Rank>(rng.uniform_int(2, 8));
        std::vector<SlotRank> prefs;
        for (Rank k = 1; k <= m; ++k)
            prefs.push_back({static_cast<SlotIndex>(m - k), k}); // slot m-k has rank k
        ProviderTemporalPreferences ptp(7, prefs);
        const IncentiveModel model(credit, rate);
        const auto rank = static_cast<Rank>(rng.uniform_int(1, m - 1));
        const SlotIndex slot = m - rank;

        const double got = incentive::reward(amount, slot, ptp, model);
        const double want = testing::reward_oracle(amount, rate, credit, rank);
        if (std::abs(got - want) > kRewardTol * std::max(1.0, std::abs(want)))
            out.fail("reward " + fmt(got, 17) + " vs direct " + fmt(want, 17));
        const double twice = incentive::reward(2 * amount, slot, ptp, model);
        if (std::abs(twice - 2 * got) > kLinearityTol * std::abs(twice))
            out.fail("not linear in amount at amount " + fmt(amount));
        if (!(incentive::reward(amount, slot - 1, ptp, model) > got))
            out.fail("rank " + std::to_string(rank + 1) + " does not pay more than rank " + std::to_string(rank));
    }
    return out;
}

// --- 3 -------------------------------------------------------------------

Outcome cpnet_check() {
    Outcome out;
    Rng rng(3003);
    for (int round = 0; round < 100; ++round) {
        const auto net = testing::random_net(rng, 3, 3);
        if (!cpnet::validate(net).ok()) {
            out.fail("generated net is invalid");
            continue;
        }
        const auto ranked = cpnet::rank_outcomes(net);
        std::map<cpnet::Outcome, Rank> rank;
        for (const auto &r : ranked)
            rank[r.outcome] = r.rank;
        testing::DominanceOracle oracle(net);
        if (rank.size() != oracle.outcomes.size()) {
            out.fail("ranking does not cover every outcome");
            continue;
        }
        for (std::size_t a = 0; a < oracle.outcomes.size(); ++a) {
            for (std::size_t b = 0; b < oracle.outcomes.size(); ++b) {
                const bool d = cpnet::dominates(net, oracle.outcomes[a], oracle.outcomes[b]);
                if (d != oracle.closure[a][b])
                    out.fail("dominates disagrees with the transitive closure of worsening flips");
                if (d && !(rank[oracle.outcomes[a]] < rank[oracle.outcomes[b]]))
                    out.fail("ranking is not a linear extension of dominance (net " + std::to_string(round) + ")");
            }
        }
        if (rank[cpnet::optimal_outcome(net)] != 1)
            out.fail("optimal outcome is not ranked first (net " + std::to_string(round) + ")");
    }

    const auto cp2 = testing::cp2();
    std::vector<std::string> got;
    for (const auto &r : cpnet::rank_outcomes(cp2))
        got.push_back(cp2.describe(r.outcome));
    if (got != std::vector<std::string>{"(D1,T1)", "(D1,T2)", "(D2,T2)", "(D2,T1)"})
        out.fail("two-attribute fixture ranked differently");
    return out;
}

// --- 4 -------------------------------------------------------------------

Outcome feasibility_check() {
    Outcome out;
    std::size_t plans = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        workload::GenParams p;
        p.seed = splitmix64(4004 + i);
        p.n_requests = 100 * (1 + i % 6);
        const auto instance = workload::generate(p);
        const auto input = allocation::StrategyInput::of(instance);
        for (auto s : allocation::kAllStrategies) {
            const auto report = allocation::validate_plan(allocation::compose(s, input), input);
            ++plans;
            if (!report.ok())
                out.fail(std::string(allocation::name(s)) + " on instance " + std::to_string(i) + ": " +
                         report.summary());
        }
    }
    if (out.pass)
        out.detail = std::to_string(plans) + " plans, 0 violations";
    return out;
}

// --- 5, 6, 7, 9 ----------------------------------------------------------

std::string without_timing(const std::string &records_csv) {
    std::istringstream in(records_csv);
    std::string line, out;
    while (std::getline(in, line))
        out += line.substr(0, line.rfind(',')) + '\n';
    return out;
}

std::vector<double> ranks_of(const std::vector<double> &v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]])
            ++j;
        const double avg = (static_cast<double>(i + j) / 2.0) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

// Pearson correlation of the (tie-averaged) ranks.
double spearman(const std::vector<double> &x, const std::vector<double> &y) {
    const auto rx = ranks_of(x), ry = ranks_of(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i] / n;
        my += ry[i] / n;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxx == 0 || syy == 0 ? 0.0 : sxy / std::sqrt(sxx * syy);
}

const bench::AggregateRow &row(const std::vector<bench::AggregateRow> &rows, std::string_view strategy,
                               std::size_t n) {
    for (const auto &r : rows)
        if (r.strategy == strategy && r.n_requests == n)
            return r;
    throw std::runtime_error("missing aggregate row");
}

// --- 8 -------------------------------------------------------------------

constexpr double kUnit = 100;

struct DeskInstance {
    std::vector<double> r, imp, ae;
    std::vector<std::vector<SlotIndex>> offers;
};

// Best QoE over allocations in whole 100 mAh units. Per-slot totals are
// enumerated and kept when some integral split among the services exists,
// which for a bipartite supply network holds iff every slot subset S asks
// for no more than the services offering something in S can give.
double brute_force_optimum(const DeskInstance &d) {
    const std::size_t n = d.r.size();
    std::vector<double> capacity(std::size_t{1} << n, 0.0);
    for (unsigned S = 1; S < capacity.size(); ++S)
        for (std::size_t j = 0; j < d.ae.size(); ++j)
            for (auto slot : d.offers[j])
                if (S & (1u << slot)) {
                    capacity[S] += d.ae[j];
                    break;
                }

    std::vector<int> units(n, 0);
    std::vector<double> al(n);
    double best = 0;
    for (bool more = true; more;) {
        bool ok = true;
        for (unsigned S = 1; S < capacity.size() && ok; ++S) {
            double need = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (S & (1u << i))
                    need += units[i] * kUnit;
            ok = need <= capacity[S];
        }
        if (ok) {
            for (std::size_t i = 0; i < n; ++i)
                al[i] = units[i] * kUnit;
            best = std::max(best, testing::qoe_oracle(d.r, d.imp, al));
        }
        more = false;
        for (std::size_t i = n; i-- > 0;) {
            if (++units[i] <= static_cast<int>(d.r[i] / kUnit)) {
                more = true;
                break;
            }
            units[i] = 0;
        }
    }
    return best;
}

// Literal enumeration: every way each service splits its units over the
// slots it offers (or keeps them). Used to audit the capacity shortcut.
double literal_optimum(const DeskInstance &d) {
    const std::size_t n = d.r.size();
    double best = 0;
    std::vector<double> al(n, 0.0);
    std::function<void(std::size_t, std::size_t, int)> place = [&](std::size_t j, std::size_t k, int left) {
        if (j == d.ae.size()) {
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i)
                ok = ok && al[i] <= d.r[i];
            if (ok)
                best = std::max(best, testing::qoe_oracle(d.r, d.imp, al));
            return;
        }
        if (k == d.offers[j].size()) {
            const auto next_units = j + 1 < d.ae.size() ? static_cast<int>(d.ae[j + 1] / kUnit) : 0;
            place(j + 1, 0, next_units);
            return;
        }
        const auto slot = d.offers[j][k];
        for (int u = 0; u <= left; ++u) {
            al[slot] += u * kUnit;
            place(j, k + 1, left - u);
            al[slot] -= u * kUnit;
        }
    };
    place(0, 0, d.ae.empty() ? 0 : static_cast<int>(d.ae[0] / kUnit));
    return best;
}

std::string describe(const DeskInstance &d) {
    std::string s = "r=[";
    for (std::size_t i = 0; i < d.r.size(); ++i)
        s += (i ? "," : "") + fmt(d.r[i]);
    s += "] I=[";
    for (std::size_t i = 0; i < d.imp.size(); ++i)
        s += (i ? "," : "") + fmt(d.imp[i]);
    s += "]";
    for (std::size_t j = 0; j < d.ae.size(); ++j) {
        s += " s" + std::to_string(j + 1) + "(" + fmt(d.ae[j]) + " mAh; slots";
        for (auto slot : d.offers[j])
            s += " " + std::to_string(slot);
        s += ")";
    }
    return s;
}

// Ordered slot lists (best first) over every nonempty subset of n slots.
std::vector<std::vector<SlotIndex>> offer_lists(std::size_t n) {
    std::vector<std::vector<SlotIndex>> out;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<SlotIndex> slots;
        for (SlotIndex i = 0; i < n; ++i)
            if (mask & (1u << i))
                slots.push_back(i);
        do
            out.push_back(slots);
        while (std::next_permutation(slots.begin(), slots.end()));
    }
    return out;
}

struct DeskStats {
    std::size_t instances = 0;
    std::size_t audited = 0;
    std::size_t below_fcfs = 0;
    std::size_t below_demand = 0;
    std::size_t above_optimum = 0;
    std::size_t audit_mismatch = 0;
    std::string first_fcfs, first_demand, first_above;
};

Outcome desk_optimality_check(std::string &notes) {
    const std::vector<double> energies{100, 200, 300};
    const std::vector<double> importance_levels{0.4, 0.9};
    DeskStats st;

    for (std::size_t n = 1; n <= 3; ++n) {
        const auto lists = offer_lists(n);
        // service "kinds": (energy, ordered offer list)
        std::vector<std::pair<double, std::vector<SlotIndex>>> kinds;
        for (double e : energies)
            for (const auto &l : lists)
                kinds.emplace_back(e, l);

        std::vector<std::size_t> ri(n, 0), ii(n, 0);
        auto bump = [](std::vector<std::size_t> &v, std::size_t base) {
            for (std::size_t k = v.size(); k-- > 0;) {
                if (++v[k] < base)
                    return true;
                v[k] = 0;
            }
            return false;
        };

        for (std::size_t m = 0; m <= 3; ++m) {
            // multisets of kinds: non-decreasing kind indices, ids by position
            std::vector<std::size_t> pick(m, 0);
            for (bool more_pick = true; more_pick;) {
                DeskInstance d;
                for (auto k : pick) {
                    d.ae.push_back(kinds[k].first);
                    d.offers.push_back(kinds[k].second);
                }
                std::fill(ri.begin(), ri.end(), 0);
                do {
                    d.r.resize(n);
                    for (std::size_t i = 0; i < n; ++i)
                        d.r[i] = energies[ri[i]];
                    std::fill(ii.begin(), ii.end(), 0);
                    do {
                        d.imp.resize(n);
                        for (std::size_t i = 0; i < n; ++i)
                            d.imp[i] = importance_levels[ii[i]];

                        auto in = testing::make_input(d.r, d.imp, d.ae, d.offers);
                        const auto view = in.view();
                        auto q = [&](Strategy s) {
                            return metrics::qoe(in.edd, in.bm, allocation::compose(s, view)).qoe;
                        };
                        const double qi = q(Strategy::importance);
                        const double qf = q(Strategy::fcfs);
                        const double qd = q(Strategy::demand);
                        const double opt = brute_force_optimum(d);
                        ++st.instances;
                        if (st.instances % 251 == 0) {
                            ++st.audited;
                            if (std::abs(literal_optimum(d) - opt) > kOptTol)
                                ++st.audit_mismatch;
                        }
                        if (qi < qf - kOptTol && st.below_fcfs++ == 0)
                            st.first_fcfs = describe(d) + ": importance " + fmt(qi) + " < fcfs " + fmt(qf);
                        if (qi < qd - kOptTol && st.below_demand++ == 0)
                            st.first_demand = describe(d) + ": importance " + fmt(qi) + " < demand " + fmt(qd);
                        if (std::max({qi, qf, qd}) > opt + kOptTol && st.above_optimum++ == 0)
                            st.first_above = describe(d) + ": a strategy beats the optimum " + fmt(opt);
                    } while (bump(ii, importance_levels.size()));
                } while (bump(ri, energies.size()));

                // next non-decreasing pick
                more_pick = false;
                for (std::size_t k = m; k-- > 0;) {
                    if (pick[k] + 1 < kinds.size()) {
                        ++pick[k];
                        for (std::size_t t = k + 1; t < m; ++t)
                            pick[t] = pick[k];
                        more_pick = true;
                        break;
                    }
                }
            }
        }
    }

    Outcome out;
    std::ostringstream info;
    info << st.instances << " instances; importance < fcfs on " << st.below_fcfs << ", < demand on "
         << st.below_demand << "; above optimum on " << st.above_optimum << "; optimum audit "
         << st.audit_mismatch << " mismatches in " << st.audited;
    if (st.audit_mismatch)
        out.fail("brute-force shortcut disagrees with literal enumeration");
    if (st.above_optimum)
        out.fail(st.first_above);
    if (st.below_fcfs || st.below_demand)
        out.fail(info.str());
    else
        out.detail = info.str();
    if (!st.first_fcfs.empty())
        notes += "    e.g. " + st.first_fcfs + "\n";
    if (!st.first_demand.empty())
        notes += "    e.g. " + st.first_demand + "\n";
    return out;
}

} // namespace

int main() {
    std::printf("acceptance suite\n");

    auto t = Clock::now();
    auto o1 = qoe_oracle_check();
    report(1, "qoe matches the independent formula (tol 1e-12, 503 cases)", o1, seconds_since(t), 1.0);

    t = Clock::now();
    auto o2 = reward_oracle_check();
    report(2, "reward matches the direct formula (tol 1e-9), linear, rank-monotone (502 cases)", o2,
           seconds_since(t), 1.0);

    t = Clock::now();
    auto o3 = cpnet_check();
    report(3, "CP-net ranking extends dominance on 100 random nets; fixture order exact", o3, seconds_since(t),
           10.0);

    t = Clock::now();
    auto o4 = feasibility_check();
    report(4, "1000 generated instances x 3 strategies pass validate_plan", o4, seconds_since(t), 30.0);

    // 5, 6, 7 share one default run; 9 repeats it.
    const bench::BenchConfig config; // 340 services, 8 slots, 200 trials, counts 100..600, seed 7
    t = Clock::now();
    const auto first = bench::run_bench(config);
    const double bench_time = seconds_since(t);
    const auto &agg = first.aggregates;

    Outcome o5;
    for (auto n : config.request_counts) {
        const double qi = row(agg, "importance", n).mean_qoe;
        const double qf = row(agg, "fcfs", n).mean_qoe;
        const double qd = row(agg, "demand", n).mean_qoe;
        if (qi < qf || qi < qd)
            o5.fail("at " + std::to_string(n) + " requests importance " + fmt(qi) + " vs fcfs " + fmt(qf) +
                    ", demand " + fmt(qd));
    }
    {
        std::string means;
        for (auto n : config.request_counts)
            means += (means.empty() ? "" : " ") + fmt(row(agg, "importance", n).mean_qoe, 4);
        if (o5.pass)
            o5.detail = "importance means " + means;
    }
    report(5, "mean QoE importance >= fcfs and >= demand at every count", o5, bench_time, 300.0);

    Outcome o6;
    for (auto s : config.strategies) {
        const double lo = row(agg, allocation::name(s), config.request_counts.front()).mean_qoe;
        const double hi = row(agg, allocation::name(s), config.request_counts.back()).mean_qoe;
        if (!(lo > hi))
            o6.fail(std::string(allocation::name(s)) + ": " + fmt(lo) + " at 100 vs " + fmt(hi) + " at 600");
    }
    report(6, "mean QoE at 100 requests > at 600 for every strategy", o6, 0.0, 0.0);

    Outcome o7;
    {
        std::string rhos;
        for (auto s : config.strategies) {
            std::vector<double> x, y;
            for (auto n : config.request_counts) {
                x.push_back(static_cast<double>(n));
                y.push_back(row(agg, allocation::name(s), n).mean_exec_time_us);
            }
            const double rho = spearman(x, y);
            rhos += std::string(rhos.empty() ? "" : ", ") + std::string(allocation::name(s)) + " " + fmt(rho, 3);
            if (!(rho > kSpearmanMin))
                o7.fail(std::string(allocation::name(s)) + " rho " + fmt(rho, 3));
        }
        if (o7.pass)
            o7.detail = "rho " + rhos;
    }
    report(7, "Spearman(request count, mean exec time) > 0.9 for every strategy", o7, 0.0, 0.0);

    t = Clock::now();
    std::string notes;
    auto o8 = desk_optimality_check(notes);
    report(8, "desk-scale: importance >= each baseline and <= brute-force optimum", o8, seconds_since(t), 60.0);
    if (!notes.empty())
        std::printf("%s", notes.c_str());

    t = Clock::now();
    const auto second = bench::run_bench(config);
    Outcome o9;
    if (without_timing(bench::records_csv(first.records)) != without_timing(bench::records_csv(second.records)))
        o9.fail("records.csv differs between runs outside exec_time_us");
    report(9, "repeat run reproduces records.csv byte for byte without exec_time_us", o9, seconds_since(t), 0.0);

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
