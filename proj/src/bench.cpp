#include "esqoe/bench.hpp"

#include "esqoe/csv.hpp"
#include "esqoe/error.hpp"
#include "esqoe/metrics.hpp"
#include "esqoe/rng.hpp"
#include "esqoe/workload.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace esqoe::bench {

namespace {

// Each compose call is timed this many times and the fastest run kept,
// which filters out scheduler preemption on a shared machine.
constexpr int kTimingRepeats = 3;

} // namespace

void validate(const BenchConfig &config) {
    if (config.trials < 1)
        throw Error("bench: trials must be >= 1");
    if (config.request_counts.empty())
        throw Error("bench: no request counts given");
    if (config.strategies.empty())
        throw Error("bench: no strategies enabled");
    if (config.n_slots < 1)
        throw Error("bench: need at least one slot");
    for (auto c : config.request_counts)
        if (c < 1)
            throw Error("bench: request counts must be positive");
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t n_requests, std::size_t trial) {
    auto h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(n_requests));
    return splitmix64(h ^ static_cast<std::uint64_t>(trial));
}

BenchResult run_bench(const BenchConfig &config) {
    validate(config);
    const auto n_counts = config.request_counts.size();
    const auto n_strategies = config.strategies.size();
    BenchResult result;
    result.records.resize(n_counts * config.trials * n_strategies);
    bool warmed_up = false;

    // Counts are interleaved within each trial index so slow phases of the
    // machine spread over every count instead of skewing one of them.
    // Records still land in (count, trial, strategy) order.
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
        for (std::size_t ci = 0; ci < n_counts; ++ci) {
            const auto count = config.request_counts[ci];
            try {
                workload::GenParams params;
                params.seed = trial_seed(config.seed, count, trial);
                params.n_services = config.n_services;
                params.n_requests = count;
                params.n_slots = config.n_slots;
                params.pref_count_range.hi =
                    std::min<std::int64_t>(params.pref_count_range.hi, static_cast<std::int64_t>(config.n_slots));
                const auto instance = workload::generate(params);
                const auto hash = workload::instance_hash(instance);
                const auto input = allocation::StrategyInput::of(instance);

                // One untimed pass so the first cell does not pay for cold
                // caches and allocator growth.
                if (!warmed_up) {
                    for (auto strategy : config.strategies)
                        (void)allocation::compose(strategy, input);
                    warmed_up = true;
                }
                for (std::size_t si = 0; si < n_strategies; ++si) {
                    const auto strategy = config.strategies[si];
                    allocation::AllocationPlan plan;
                    double best_us = std::numeric_limits<double>::infinity();
                    for (int rep = 0; rep < kTimingRepeats; ++rep) {
                        const auto start = std::chrono::steady_clock::now();
                        plan = allocation::compose(strategy, input);
                        const auto stop = std::chrono::steady_clock::now();
                        best_us = std::min(best_us, std::chrono::duration<double, std::micro>(stop - start).count());
                    }
                    const auto report = metrics::qoe(instance.edd(), instance.business_model(), plan);
                    result.records[(ci * config.trials + trial) * n_strategies + si] =
                        BenchRecord{std::string(allocation::name(strategy)), count, trial, hash,
                                    report.qoe, report.total_reward, best_us};
                }
            } catch (const Error &e) {
                throw Error("bench: cell (requests=" + std::to_string(count) + ", trial=" +
                            std::to_string(trial) + ") failed: " + e.what());
            }
        }
    }
    result.aggregates = aggregate(result.records);
    return result;
}

std::vector<AggregateRow> aggregate(std::span<const BenchRecord> records) {
    struct Acc {
        std::vector<double> qoe;
        double reward = 0;
        double time = 0;
    };
    // Strategies keep first-seen order; counts ascend.
    std::vector<std::string> strategies;
    std::map<std::pair<std::size_t, std::size_t>, Acc> cells;
    for (const auto &r : records) {
        auto it = std::find(strategies.begin(), strategies.end(), r.strategy);
        if (it == strategies.end())
            it = strategies.insert(strategies.end(), r.strategy);
        auto &acc = cells[{static_cast<std::size_t>(it - strategies.begin()), r.n_requests}];
        acc.qoe.push_back(r.qoe);
        acc.reward += r.total_reward;
        acc.time += r.exec_time_us;
    }
    std::vector<AggregateRow> rows;
    for (const auto &[key, acc] : cells) {
        const double n = static_cast<double>(acc.qoe.size());
        double mean = 0;
        for (auto q : acc.qoe)
            mean += q;
        mean /= n;
        double ss = 0;
        for (auto q : acc.qoe)
            ss += (q - mean) * (q - mean);
        const double sd = acc.qoe.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
        rows.push_back({strategies[key.first], key.second, mean, sd, acc.reward / n, acc.time / n});
    }
    return rows;
}

namespace {

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

} // namespace

std::string records_csv(std::span<const BenchRecord> records) {
    std::string out = "strategy,n_requests,trial,instance_hash,qoe,total_reward,exec_time_us\n";
    for (const auto &r : records)
        out += r.strategy + ',' + std::to_string(r.n_requests) + ',' + std::to_string(r.trial) + ',' +
               hex(r.instance_hash) + ',' + csv::format(r.qoe) + ',' + csv::format(r.total_reward) + ',' +
               csv::format(r.exec_time_us) + '\n';
    return out;
}

std::string aggregate_csv(std::span<const AggregateRow> rows) {
    std::string out = "strategy,n_requests,mean_qoe,sd_qoe,mean_reward,mean_exec_time_us\n";
    for (const auto &r : rows)
        out += r.strategy + ',' + std::to_string(r.n_requests) + ',' + csv::format(r.mean_qoe) + ',' +
               csv::format(r.sd_qoe) + ',' + csv::format(r.mean_reward) + ',' +
               csv::format(r.mean_exec_time_us) + '\n';
    return out;
}

std::vector<BenchRecord> parse_records(std::string_view text) {
    auto t = csv::parse(text, "records.csv");
    t.require_header({"strategy", "n_requests", "trial", "instance_hash", "qoe", "total_reward", "exec_time_us"});
    std::vector<BenchRecord> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto &row = t.rows[i];
        try {
            std::uint64_t hash = 0;
            if (row[3].size() != 16 || std::sscanf(row[3].c_str(), "%" SCNx64, &hash) != 1)
                throw Error("invalid instance_hash '" + row[3] + "'");
            out.push_back({row[0], csv::to_uint(row[1], "n_requests"), csv::to_uint(row[2], "trial"), hash,
                           csv::to_double(row[4], "qoe"), csv::to_double(row[5], "total_reward"),
                           csv::to_double(row[6], "exec_time_us")});
        } catch (const Error &e) {
            throw Error(t.source + ":" + std::to_string(t.line_numbers[i]) + ": " + e.what());
        }
    }
    return out;
}

std::vector<AggregateRow> parse_aggregate(std::string_view text) {
    auto t = csv::parse(text, "aggregate.csv");
    t.require_header({"strategy", "n_requests", "mean_qoe", "sd_qoe", "mean_reward", "mean_exec_time_us"});
    std::vector<AggregateRow> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto &row = t.rows[i];
        try {
            out.push_back({row[0], csv::to_uint(row[1], "n_requests"), csv::to_double(row[2], "mean_qoe"),
                           csv::to_double(row[3], "sd_qoe"), csv::to_double(row[4], "mean_reward"),
                           csv::to_double(row[5], "mean_exec_time_us")});
        } catch (const Error &e) {
            throw Error(t.source + ":" + std::to_string(t.line_numbers[i]) + ": " + e.what());
        }
    }
    return out;
}

std::vector<std::size_t> parse_counts(std::string_view text) {
    auto parts = csv::split(text, ':');
    if (parts.size() != 3)
        throw Error("counts must look like start:stop:step, got '" + std::string(text) + "'");
    auto start = csv::to_uint(parts[0], "counts start");
    auto stop = csv::to_uint(parts[1], "counts stop");
    auto step = csv::to_uint(parts[2], "counts step");
    if (start < 1 || step < 1 || stop < start)
        throw Error("counts need 1 <= start <= stop and step >= 1");
    std::vector<std::size_t> out;
    for (auto c = start; c <= stop; c += step)
        out.push_back(c);
    return out;
}

} // namespace esqoe::bench
