#include "esqoe/cli.hpp"

#include "esqoe/allocation.hpp"
#include "esqoe/bench.hpp"
#include "esqoe/cpnet.hpp"
#include "esqoe/csv.hpp"
#include "esqoe/error.hpp"
#include "esqoe/metrics.hpp"
#include "esqoe/plot.hpp"
#include "esqoe/workload.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>
#include <vector>

namespace esqoe::cli {

namespace fs = std::filesystem;

namespace {

std::vector<allocation::Strategy> strategies_from(const std::vector<std::string> &names) {
    std::vector<allocation::Strategy> out;
    for (const auto &n : names) {
        auto s = allocation::parse_strategy(n);
        if (!s)
            throw Error("unknown strategy '" + n + "'");
        out.push_back(*s);
    }
    return out;
}

void print_ranking(const cpnet::ProviderNet &pn, std::ostream &out) {
    out << "provider " << pn.pid << '\n';
    for (const auto &r : cpnet::rank_outcomes(pn.net)) {
        auto slot = pn.map.slot_for(pn.net, r.outcome);
        out << "  " << r.rank << ' ' << pn.net.describe(r.outcome) << " slot "
            << (slot ? std::to_string(*slot) : std::string("-")) << '\n';
    }
    const auto ptp = cpnet::to_ptp(pn.net, pn.map, pn.pid);
    out << "  ptp";
    for (const auto &p : ptp.prefs())
        out << " (" << p.slot << ',' << p.rank << ')';
    out << '\n';
}

} // namespace

int dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Energy service allocation for QoE in a microcell", "esqoe"};
    app.require_subcommand(1);

    std::uint64_t seed = 7;
    std::string out_path;
    std::string strategy_name = "importance";
    std::vector<std::string> strategy_names;
    std::size_t n_requests = 100;
    std::size_t n_services = 340;
    std::size_t n_slots = 8;
    std::size_t trials = 200;
    std::string counts;
    std::string input_path;
    double credit = 1.0;
    double rate = 1.0;
    bool cpnet_override = false;
    std::uint64_t pid_filter = 0;

    auto *gen = app.add_subcommand("gen", "Generate a synthetic instance directory");
    gen->add_option("--seed", seed, "Random seed")->envname("ESQOE_SEED");
    gen->add_option("--out", out_path, "Output directory")->required();
    gen->add_option("--services", n_services, "Number of energy services");
    gen->add_option("--requests", n_requests, "Number of energy requests");
    gen->add_option("--slots", n_slots, "Number of time slots");
    gen->add_option("--credit", credit, "Reward credit per unit");
    gen->add_option("--rate", rate, "mAh per credit unit");

    auto *rank = app.add_subcommand("rank", "Rank CP-net outcomes and print each provider's PTP");
    rank->add_option("file", input_path, "CP-net text file")->required();
    auto *pid_opt = rank->add_option("--pid", pid_filter, "Only this provider");

    auto *alloc = app.add_subcommand("allocate", "Run one strategy on an instance directory");
    alloc->add_option("instance", input_path, "Instance directory")->required();
    alloc->add_option("--strategy", strategy_name, "importance|fcfs|demand")
        ->check(CLI::IsMember({"importance", "fcfs", "demand"}));
    alloc->add_option("--out", out_path, "Report directory (default: the instance directory)");
    alloc->add_flag("--cpnet-override", cpnet_override, "Let cpnets.txt win over conflicting ptp.csv rows");

    auto *bench = app.add_subcommand("bench", "Run the QoE / execution time experiment");
    bench->add_option("--seed", seed, "Base random seed")->envname("ESQOE_SEED");
    bench->add_option("--out", out_path, "Output directory")->required();
    bench->add_option("--strategy", strategy_names, "Strategies to run (default: all)")
        ->check(CLI::IsMember({"importance", "fcfs", "demand"}));
    auto *req_opt = bench->add_option("--requests", n_requests, "Single request count");
    auto *counts_opt = bench->add_option("--counts", counts, "Request counts as start:stop:step");
    req_opt->excludes(counts_opt);
    bench->add_option("--services", n_services, "Services per trial");
    bench->add_option("--slots", n_slots, "Time slots");
    bench->add_option("--trials", trials, "Trials per request count");

    auto *plot = app.add_subcommand("plot", "Render SVG charts from records.csv or aggregate.csv");
    plot->add_option("csv", input_path, "Bench CSV")->required();
    plot->add_option("--out", out_path, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*gen) {
            workload::GenParams params;
            params.seed = seed;
            params.n_services = n_services;
            params.n_requests = n_requests;
            params.n_slots = n_slots;
            params.pref_count_range.hi = std::min<std::int64_t>(4, static_cast<std::int64_t>(n_slots));
            params.credit = credit;
            params.rate = rate;
            auto instance = workload::generate(params);
            workload::save_instance(instance, out_path);
            out << "wrote instance (" << instance.services().size() << " services, "
                << instance.requests().size() << " requests, " << instance.horizon().size() << " slots) to "
                << out_path << '\n';
        } else if (*rank) {
            bool any = false;
            for (const auto &pn : cpnet::read_cpnets(input_path)) {
                if (*pid_opt && pn.pid != pid_filter)
                    continue;
                print_ranking(pn, out);
                any = true;
            }
            if (!any)
                throw Error("no matching provider in " + input_path);
        } else if (*alloc) {
            workload::LoadOptions options;
            options.cpnet_overrides_ptp = cpnet_override;
            const auto instance = workload::load_instance(input_path, options);
            const auto input = allocation::StrategyInput::of(instance);
            const auto plan = allocation::compose(*allocation::parse_strategy(strategy_name), input);
            const auto report = metrics::qoe(instance.edd(), instance.business_model(), plan);
            const fs::path dir = out_path.empty() ? fs::path(input_path) : fs::path(out_path);
            fs::create_directories(dir);
            csv::write_file(dir / "allocation.csv", allocation::allocation_csv(plan));
            csv::write_file(dir / "summary.csv",
                            metrics::summary_csv(instance.edd(), instance.business_model(), plan));
            const auto qoe_text = metrics::qoe_csv(instance.edd(), plan, report);
            csv::write_file(dir / "qoe.csv", qoe_text);
            out << qoe_text;
        } else if (*bench) {
            bench::BenchConfig config;
            config.seed = seed;
            config.n_services = n_services;
            config.n_slots = n_slots;
            config.trials = trials;
            if (*counts_opt)
                config.request_counts = bench::parse_counts(counts);
            else if (*req_opt)
                config.request_counts = {n_requests};
            if (!strategy_names.empty())
                config.strategies = strategies_from(strategy_names);
            const auto result = bench::run_bench(config);
            const fs::path dir(out_path);
            fs::create_directories(dir);
            csv::write_file(dir / "records.csv", bench::records_csv(result.records));
            const auto agg = bench::aggregate_csv(result.aggregates);
            csv::write_file(dir / "aggregate.csv", agg);
            out << agg;
        } else if (*plot) {
            plot::plot_file(input_path, out_path);
            out << "wrote " << (fs::path(out_path) / "qoe_vs_requests.svg").string() << " and "
                << (fs::path(out_path) / "exec_time_vs_requests.svg").string() << '\n';
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace esqoe::cli
