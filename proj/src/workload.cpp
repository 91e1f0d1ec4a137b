#include "esqoe/workload.hpp"

#include "esqoe/cpnet.hpp"
#include "esqoe/csv.hpp"
#include "esqoe/error.hpp"
#include "esqoe/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace esqoe::workload {

namespace fs = std::filesystem;

namespace {

void check_range(const Range<std::int64_t> &r, const char *what) {
    if (r.lo < 1 || r.hi < r.lo)
        throw Error(std::string("generator: ") + what + " range must satisfy 1 <= lo <= hi");
}

} // namespace

void validate(const GenParams &p) {
    if (p.n_slots < 1)
        throw Error("generator: need at least one slot");
    if (p.slot_duration < 1)
        throw Error("generator: slot duration must be >= 1 minute");
    check_range(p.ae_range, "service energy");
    check_range(p.re_range, "request energy");
    check_range(p.duration_range, "request duration");
    check_range(p.pref_count_range, "preference count");
    if (static_cast<std::size_t>(p.pref_count_range.hi) > p.n_slots)
        throw Error("generator: preference count cannot exceed the slot count");
    if (p.importance) {
        if (p.importance->size() != p.n_slots)
            throw Error("generator: explicit importance list must have one value per slot");
        BusinessModel check(*p.importance);
    }
    IncentiveModel check(p.credit, p.rate);
}

Instance generate(const GenParams &p) {
    validate(p);
    Rng rng(p.seed);
    const Horizon horizon(0, p.slot_duration, static_cast<std::int64_t>(p.n_slots));

    std::vector<double> importance;
    if (p.importance) {
        importance = *p.importance;
    } else {
        for (std::size_t i = 0; i < p.n_slots; ++i)
            importance.push_back(rng.uniform01());
    }

    auto location = [&] {
        // Centimetre grid inside a 100 m square.
        return Location{static_cast<double>(rng.uniform_int(0, 10000)) / 100.0,
                        static_cast<double>(rng.uniform_int(0, 10000)) / 100.0};
    };

    std::vector<EnergyService> services;
    std::vector<ProviderTemporalPreferences> ptps;
    services.reserve(p.n_services);
    ptps.reserve(p.n_services);
    std::vector<SlotIndex> slots(p.n_slots);
    for (std::size_t j = 0; j < p.n_services; ++j) {
        const auto id = static_cast<ServiceId>(j + 1);
        const auto ae = static_cast<double>(rng.uniform_int(p.ae_range.lo, p.ae_range.hi));
        const auto loc = location();
        const auto k = static_cast<std::size_t>(rng.uniform_int(p.pref_count_range.lo, p.pref_count_range.hi));

        // Partial Fisher-Yates: the first k entries become a uniform subset.
        std::iota(slots.begin(), slots.end(), SlotIndex{0});
        for (std::size_t i = 0; i < k; ++i) {
            auto pick = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i),
                                                                 static_cast<std::int64_t>(p.n_slots - 1)));
            std::swap(slots[i], slots[pick]);
        }
        // The subset order is already a uniform permutation; take it as the
        // preference order (rank 1 first).
        std::vector<SlotRank> prefs;
        for (std::size_t i = 0; i < k; ++i)
            prefs.push_back({slots[i], static_cast<Rank>(i + 1)});

        services.emplace_back(id, id, ae, loc);
        ptps.emplace_back(id, std::move(prefs));
    }

    std::vector<EnergyRequest> requests;
    requests.reserve(p.n_requests);
    for (std::size_t i = 0; i < p.n_requests; ++i) {
        const auto id = static_cast<RequestId>(i + 1);
        const auto re = static_cast<double>(rng.uniform_int(p.re_range.lo, p.re_range.hi));
        const auto loc = location();
        const auto st = rng.uniform_int(horizon.origin(), horizon.end() - 1);
        const auto duration = rng.uniform_int(p.duration_range.lo, p.duration_range.hi);
        const auto et = std::min(st + duration, horizon.end());
        requests.emplace_back(id, id, re, loc, st, et);
    }

    auto edd = aggregate_edd(requests, horizon);
    return Instance(horizon, std::move(services), std::move(ptps), std::move(edd),
                    BusinessModel(std::move(importance)), IncentiveModel(p.credit, p.rate),
                    std::move(requests));
}

std::map<std::string, std::string> serialize(const Instance &instance) {
    using csv::format;
    std::map<std::string, std::string> files;

    const auto &h = instance.horizon();
    files["horizon.csv"] = "origin_min,slot_duration_min,n_slots\n" + std::to_string(h.origin()) + ',' +
                           std::to_string(h.slot_duration()) + ',' + std::to_string(h.size()) + '\n';

    std::string services = "id,pid,ae_mah,loc_x,loc_y\n";
    for (const auto &s : instance.services())
        services += std::to_string(s.id()) + ',' + std::to_string(s.pid()) + ',' + format(s.ae()) + ',' +
                    format(s.loc().x) + ',' + format(s.loc().y) + '\n';
    files["services.csv"] = std::move(services);

    std::string requests = "id,cid,re_mah,loc_x,loc_y,start_min,end_min\n";
    for (const auto &r : instance.requests())
        requests += std::to_string(r.id()) + ',' + std::to_string(r.cid()) + ',' + format(r.re()) + ',' +
                    format(r.loc().x) + ',' + format(r.loc().y) + ',' + std::to_string(r.st()) + ',' +
                    std::to_string(r.et()) + '\n';
    files["requests.csv"] = std::move(requests);

    std::string bm = "slot_index,importance\n";
    for (std::size_t i = 0; i < instance.business_model().size(); ++i)
        bm += std::to_string(i) + ',' + format(instance.business_model()[i]) + '\n';
    files["business_model.csv"] = std::move(bm);

    files["incentive_model.csv"] = "credit,rate\n" + format(instance.incentive_model().credit()) + ',' +
                                   format(instance.incentive_model().rate()) + '\n';

    std::string ptp = "pid,slot_index,rank\n";
    for (const auto &p : instance.ptps())
        for (const auto &e : p.prefs())
            ptp += std::to_string(p.pid()) + ',' + std::to_string(e.slot) + ',' + std::to_string(e.rank) + '\n';
    files["ptp.csv"] = std::move(ptp);
    return files;
}

void save_instance(const Instance &instance, const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error("cannot create " + dir.string() + ": " + ec.message());
    for (const auto &[name, contents] : serialize(instance))
        csv::write_file(dir / name, contents);
}

std::uint64_t instance_hash(const Instance &instance) {
    std::uint64_t h = fnv1a64("");
    for (const auto &[name, contents] : serialize(instance)) {
        h = fnv1a64(name, h);
        h = fnv1a64(contents, h);
    }
    return h;
}

namespace {

// Runs `body`, prefixing any error with the file and line of the row.
template <class Body>
void per_row(const csv::Table &t, Body &&body) {
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        try {
            body(t.rows[i]);
        } catch (const Error &e) {
            throw Error(t.source + ":" + std::to_string(t.line_numbers[i]) + ": " + e.what());
        }
    }
}

csv::Table read_required(const fs::path &dir, const char *name) {
    if (!fs::exists(dir / name))
        throw Error("missing file " + (dir / name).string());
    return csv::read_file(dir / name);
}

} // namespace

Instance load_instance(const fs::path &dir, const LoadOptions &options) {
    using csv::to_double;
    using csv::to_int;
    using csv::to_uint;

    if (!fs::is_directory(dir))
        throw Error("instance directory " + dir.string() + " does not exist");

    auto bm_table = read_required(dir, "business_model.csv");
    bm_table.require_header({"slot_index", "importance"});
    std::vector<std::optional<double>> importance(bm_table.rows.size());
    per_row(bm_table, [&](const auto &row) {
        auto slot = to_uint(row[0], "slot_index");
        if (slot >= importance.size())
            throw Error("slot_index " + row[0] + " out of range");
        if (importance[slot])
            throw Error("slot_index " + row[0] + " listed twice");
        importance[slot] = to_double(row[1], "importance");
    });
    std::vector<double> bm_values;
    for (const auto &v : importance)
        bm_values.push_back(*v);
    BusinessModel bm = [&] {
        try {
            return BusinessModel(bm_values);
        } catch (const Error &e) {
            throw Error("business_model.csv: " + std::string(e.what()));
        }
    }();

    Horizon horizon(0, 60, static_cast<std::int64_t>(bm.size()));
    if (fs::exists(dir / "horizon.csv")) {
        auto t = csv::read_file(dir / "horizon.csv");
        t.require_header({"origin_min", "slot_duration_min", "n_slots"});
        if (t.rows.size() != 1)
            throw Error("horizon.csv: expected exactly one data row");
        per_row(t, [&](const auto &row) {
            horizon = Horizon(to_int(row[0], "origin_min"), to_int(row[1], "slot_duration_min"),
                              to_int(row[2], "n_slots"));
        });
        if (horizon.size() != bm.size())
            throw Error("horizon.csv declares " + std::to_string(horizon.size()) +
                        " slots but business_model.csv has " + std::to_string(bm.size()));
    }

    auto im_table = read_required(dir, "incentive_model.csv");
    im_table.require_header({"credit", "rate"});
    if (im_table.rows.size() != 1)
        throw Error("incentive_model.csv: expected exactly one data row");
    IncentiveModel im;
    per_row(im_table, [&](const auto &row) {
        im = IncentiveModel(to_double(row[0], "credit"), to_double(row[1], "rate"));
    });

    auto svc_table = read_required(dir, "services.csv");
    svc_table.require_header({"id", "pid", "ae_mah", "loc_x", "loc_y"});
    std::vector<EnergyService> services;
    per_row(svc_table, [&](const auto &row) {
        services.emplace_back(to_uint(row[0], "id"), to_uint(row[1], "pid"), to_double(row[2], "ae_mah"),
                              Location{to_double(row[3], "loc_x"), to_double(row[4], "loc_y")});
    });

    auto req_table = read_required(dir, "requests.csv");
    req_table.require_header({"id", "cid", "re_mah", "loc_x", "loc_y", "start_min", "end_min"});
    std::vector<EnergyRequest> requests;
    per_row(req_table, [&](const auto &row) {
        EnergyRequest r(to_uint(row[0], "id"), to_uint(row[1], "cid"), to_double(row[2], "re_mah"),
                        Location{to_double(row[3], "loc_x"), to_double(row[4], "loc_y")},
                        to_int(row[5], "start_min"), to_int(row[6], "end_min"));
        if (!horizon.contains(r.st()) || r.et() > horizon.end())
            throw Error("request " + row[0] + " lies outside the horizon");
        requests.push_back(r);
    });

    // PTPs from ptp.csv, grouped by provider in order of first appearance.
    std::vector<ProviderId> order;
    std::unordered_map<ProviderId, std::vector<SlotRank>> rows_of;
    const bool have_ptp = fs::exists(dir / "ptp.csv");
    const bool have_cpnets = fs::exists(dir / "cpnets.txt");
    if (!have_ptp && !have_cpnets)
        throw Error("missing file " + (dir / "ptp.csv").string() + " (and no cpnets.txt)");
    if (have_ptp) {
        auto t = csv::read_file(dir / "ptp.csv");
        t.require_header({"pid", "slot_index", "rank"});
        per_row(t, [&](const auto &row) {
            auto pid = to_uint(row[0], "pid");
            auto rank = to_uint(row[2], "rank");
            if (rank < 1 || rank > UINT32_MAX)
                throw Error("rank must be a positive integer");
            if (!rows_of.contains(pid))
                order.push_back(pid);
            rows_of[pid].push_back({to_uint(row[1], "slot_index"), static_cast<Rank>(rank)});
        });
    }
    std::unordered_map<ProviderId, ProviderTemporalPreferences> ptp_of;
    for (auto pid : order) {
        try {
            ptp_of.emplace(pid, ProviderTemporalPreferences(pid, rows_of[pid]));
        } catch (const Error &e) {
            throw Error("ptp.csv: " + std::string(e.what()));
        }
    }
    if (have_cpnets) {
        for (const auto &pn : cpnet::read_cpnets(dir / "cpnets.txt")) {
            auto derived = cpnet::to_ptp(pn.net, pn.map, pn.pid);
            auto it = ptp_of.find(pn.pid);
            if (it == ptp_of.end()) {
                order.push_back(pn.pid);
                ptp_of.emplace(pn.pid, std::move(derived));
            } else if (!(it->second == derived)) {
                if (!options.cpnet_overrides_ptp)
                    throw Error("provider " + std::to_string(pn.pid) +
                                ": ptp.csv disagrees with cpnets.txt (enable the CP-net override to prefer "
                                "the CP-net)");
                it->second = std::move(derived);
            }
        }
    }
    std::vector<ProviderTemporalPreferences> ptps;
    for (auto pid : order)
        ptps.push_back(ptp_of.at(pid));

    auto edd = aggregate_edd(requests, horizon);
    return Instance(horizon, std::move(services), std::move(ptps), std::move(edd), std::move(bm), im,
                    std::move(requests));
}

} // namespace esqoe::workload
