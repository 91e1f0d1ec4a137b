#ifndef ESQOE_BENCH_HPP_
#define ESQOE_BENCH_HPP_

#include "esqoe/allocation.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace esqoe::bench {

struct BenchConfig {
    std::vector<std::size_t> request_counts{100, 200, 300, 400, 500, 600};
    std::size_t n_services = 340;
    std::size_t n_slots = 8;
    std::size_t trials = 200;
    std::uint64_t seed = 7;
    std::vector<allocation::Strategy> strategies{std::begin(allocation::kAllStrategies),
                                                 std::end(allocation::kAllStrategies)};
};

void validate(const BenchConfig &config);

struct BenchRecord {
    std::string strategy;
    std::size_t n_requests;
    std::size_t trial;
    std::uint64_t instance_hash;
    double qoe;
    double total_reward;
    double exec_time_us; // fastest of a few timed compose calls
};

struct AggregateRow {
    std::string strategy;
    std::size_t n_requests;
    double mean_qoe;
    double sd_qoe; // sample standard deviation, 0 for a single trial
    double mean_reward;
    double mean_exec_time_us;
};

struct BenchResult {
    std::vector<BenchRecord> records;       // (count, trial, strategy) order
    std::vector<AggregateRow> aggregates;   // strategy-major, counts ascending
};

// Stable per-cell seed, so adding counts or trials leaves other cells alone.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t n_requests, std::size_t trial);

// Every enabled strategy runs on the same generated instance per cell.
BenchResult run_bench(const BenchConfig &config);

std::vector<AggregateRow> aggregate(std::span<const BenchRecord> records);

// strategy,n_requests,trial,instance_hash,qoe,total_reward,exec_time_us
std::string records_csv(std::span<const BenchRecord> records);
// strategy,n_requests,mean_qoe,sd_qoe,mean_reward,mean_exec_time_us
std::string aggregate_csv(std::span<const AggregateRow> rows);

std::vector<BenchRecord> parse_records(std::string_view text);
std::vector<AggregateRow> parse_aggregate(std::string_view text);

// "a:b:step" -> a, a+step, ..., up to b inclusive.
std::vector<std::size_t> parse_counts(std::string_view text);

} // namespace esqoe::bench

#endif
