#ifndef ESQOE_WORKLOAD_HPP_
#define ESQOE_WORKLOAD_HPP_

#include "esqoe/model.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace esqoe::workload {

template <class T>
struct Range {
    T lo;
    T hi;
};

/// Synthetic instance parameters. Defaults follow the reference
/// experiment: 8 one-hour slots, 5-100 mAh energies, 5-60 minute request
/// durations, 1-4 preferred slots per provider.
struct GenParams {
    std::uint64_t seed = 1;
    std::size_t n_services = 340;
    std::size_t n_requests = 100;
    std::size_t n_slots = 8;
    Minutes slot_duration = 60;
    Range<std::int64_t> ae_range{5, 100};        // mAh, whole units
    Range<std::int64_t> re_range{5, 100};        // mAh, whole units
    Range<std::int64_t> duration_range{5, 60};   // minutes
    Range<std::int64_t> pref_count_range{1, 4};
    std::optional<std::vector<double>> importance; // uniform [0,1) per slot when unset
    double credit = 1.0;
    double rate = 1.0;
};

void validate(const GenParams &params);

// Deterministic in `params` (including the seed) on every platform.
Instance generate(const GenParams &params);

struct LoadOptions {
    // When a provider has both ptp.csv rows and a CP-net that disagree,
    // let the CP-net win instead of failing.
    bool cpnet_overrides_ptp = false;
};

Instance load_instance(const std::filesystem::path &dir, const LoadOptions &options = {});

// File name -> contents, exactly as save_instance writes them.
std::map<std::string, std::string> serialize(const Instance &instance);
void save_instance(const Instance &instance, const std::filesystem::path &dir);

// FNV-1a over the serialized files.
std::uint64_t instance_hash(const Instance &instance);

} // namespace esqoe::workload

#endif
