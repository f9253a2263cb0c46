// hybridq: delay analysis of one shared WiFi link plus N parallel VLC links.
//   analyze   closed-form report for a scenario
//   simulate  seeded simulation of either system at a given split
//   sweep     penalty / ratio experiment tables as CSV

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hybridq/analytic.hpp"
#include "hybridq/model.hpp"
#include "hybridq/scenario.hpp"
#include "hybridq/sim.hpp"
#include "hybridq/sweep.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitUnstable = 3;

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<long long> requests;
    std::optional<long long> warmup;
    std::optional<int> replications;

    void apply(hybridq::RunConfig& run) const {
        if (requests) {
            run.num_requests = *requests;
            run.warmup_requests = *requests / 10;
        }
        if (warmup) run.warmup_requests = *warmup;
        if (replications) run.replications = *replications;
        if (seed) run.master_seed = *seed;
        hybridq::validate_run_config(run);
    }
};

void add_run_flags(CLI::App* cmd, RunOverrides& ov) {
    cmd->add_option("--seed", ov.seed, "master seed (overrides scenario)");
    cmd->add_option("--requests", ov.requests, "requests per replication");
    cmd->add_option("--warmup", ov.warmup, "warm-up requests discarded per replication");
    cmd->add_option("--replications", ov.replications, "independent replications");
}

std::ostream& fixed6(std::ostream& os) { return os << std::fixed << std::setprecision(6); }

void print_analysis(std::ostream& os, const hybridq::SystemParams& p) {
    using namespace hybridq;
    const DerivedQuantities dq = derive(p);
    const FeasibleInterval fi = feasible_alpha_interval(p);
    const NonAggSolution na = nonagg_optimal_alpha(p);
    const AggApproxSolution ag = agg_split_ratio_approx(p);
    fixed6(os);
    os << "params: lambda=" << p.lambda << " mu=" << p.mu << " b1=" << p.b1 << " b2=" << p.b2
       << " n=" << p.n << "\n";
    os << "beta: " << dq.beta << "\n";
    os << "traffic_intensity: " << dq.traffic_intensity << "\n";
    os << "feasible_alpha: (" << fi.lo << ", " << fi.hi << ")\n";
    os << "nonagg_branch: " << branch_name(na.branch) << "\n";
    os << "nonagg_alpha_opt: " << na.alpha_opt << "\n";
    os << "nonagg_min_delay: " << na.min_delay << "\n";
    os << "agg_alpha_approx: " << ag.alpha << "\n";
    os << "agg_wifi_mean_delay: " << ag.wifi_mean_delay << "\n";
    os << "agg_vlc_mean_delay: " << ag.vlc_mean_delay << "\n";
}

void write_stats_csv(const std::string& path, const std::string& system, double alpha,
                     const hybridq::DelayStats& st) {
    std::ofstream out(path);
    if (!out) throw hybridq::ScenarioParseError("cannot open output file: " + path);
    out << "system,alpha,mean,variance,count,ci_halfwidth_95\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%.9g,%.9g,%.9g,%lld,%.9g\n", system.c_str(), alpha,
                  st.mean, st.variance, static_cast<long long>(st.count), st.ci_halfwidth_95);
    out << buf;
}

int run(int argc, char** argv) {
    CLI::App app{"Delay analysis toolkit for a hybrid WiFi + N-VLC access network"};
    app.require_subcommand(1);

    std::string scenario_path;
    auto* analyze = app.add_subcommand("analyze", "closed-form report for a scenario");
    analyze->add_option("scenario", scenario_path, "scenario file")->required();

    std::string sim_scenario;
    std::string system = "nonagg";
    std::optional<double> alpha_flag;
    std::string sim_out;
    RunOverrides sim_ov;
    auto* simulate = app.add_subcommand("simulate", "simulate one system at a given split");
    simulate->add_option("scenario", sim_scenario, "scenario file")->required();
    simulate->add_option("--system", system, "nonagg | agg")
        ->check(CLI::IsMember({"nonagg", "agg"}));
    simulate->add_option("--alpha", alpha_flag, "split ratio (overrides scenario)");
    simulate->add_option("--out", sim_out, "also write stats as CSV");
    add_run_flags(simulate, sim_ov);

    std::string sweep_spec_path;
    std::string sweep_out;
    std::string metric_flag;
    bool smoke = false;
    RunOverrides sweep_ov;
    auto* sweep = app.add_subcommand("sweep", "emit penalty/ratio tables as CSV");
    sweep->add_option("spec", sweep_spec_path, "sweep spec file (defaults when omitted)");
    sweep->add_option("--out", sweep_out, "existing output directory")->required();
    sweep->add_option("--metric", metric_flag, "penalty | ratio (overrides spec)")
        ->check(CLI::IsMember({"penalty", "ratio"}));
    sweep->add_flag("--smoke", smoke, "base point only, n in {1,2,5,10}");
    add_run_flags(sweep, sweep_ov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;  // keep --help at 0
    }

    if (analyze->parsed()) {
        print_analysis(std::cout, hybridq::load_scenario_file(scenario_path).params);
        return 0;
    }

    if (simulate->parsed()) {
        hybridq::Scenario sc = hybridq::load_scenario_file(sim_scenario);
        sim_ov.apply(sc.run);
        if (alpha_flag) sc.alpha = *alpha_flag;
        if (!sc.alpha)
            throw hybridq::ScenarioParseError("simulate needs alpha (scenario key or --alpha)");
        const double alpha = *sc.alpha;
        const hybridq::DelayStats st =
            system == "nonagg" ? hybridq::simulate_nonaggregated(sc.params, alpha, sc.run)
                               : hybridq::simulate_aggregated(sc.params, alpha, sc.run);
        fixed6(std::cout);
        std::cout << "system: " << system << "\n";
        std::cout << "alpha: " << alpha << "\n";
        std::cout << "mean_delay: " << st.mean << "\n";
        std::cout << "ci_halfwidth_95: " << st.ci_halfwidth_95 << "\n";
        std::cout << "count: " << st.count << "\n";
        if (!sim_out.empty()) write_stats_csv(sim_out, system, alpha, st);
        return 0;
    }

    // sweep
    hybridq::SweepFileSpec fs;
    if (!sweep_spec_path.empty()) fs = hybridq::load_sweep_spec_file(sweep_spec_path);
    if (fs.varied.empty())
        fs.varied = {hybridq::SweepParam::Lambda, hybridq::SweepParam::Mu,
                     hybridq::SweepParam::B1, hybridq::SweepParam::B2};
    if (metric_flag == "penalty") fs.metric = hybridq::SweepMetric::ApproxPenaltyPercent;
    if (metric_flag == "ratio") fs.metric = hybridq::SweepMetric::AggOverNonAggRatio;
    sweep_ov.apply(fs.run);
    if (smoke) {
        for (hybridq::SweepParam p : fs.varied) {
            double base_value = 0.0;
            switch (p) {
                case hybridq::SweepParam::Lambda: base_value = fs.base.lambda; break;
                case hybridq::SweepParam::Mu: base_value = fs.base.mu; break;
                case hybridq::SweepParam::B1: base_value = fs.base.b1; break;
                case hybridq::SweepParam::B2: base_value = fs.base.b2; break;
            }
            fs.grids[p] = {base_value};
        }
        if (fs.n_values.empty()) fs.n_values = {1, 2, 5, 10};
    }

    namespace fsys = std::filesystem;
    if (!fsys::is_directory(sweep_out))
        throw hybridq::ScenarioParseError("output directory does not exist: " + sweep_out);

    for (hybridq::SweepParam varied : fs.varied) {
        hybridq::SweepSpec spec;
        spec.metric = fs.metric;
        spec.varied = varied;
        spec.base = fs.base;
        if (auto it = fs.grids.find(varied); it != fs.grids.end()) spec.values = it->second;
        spec.n_values = fs.n_values;
        spec.run = fs.run;
        const std::vector<hybridq::SweepRow> rows = hybridq::run_sweep(spec);
        const std::string name = std::string(hybridq::metric_name(fs.metric) ==
                                                     std::string("approx_penalty_percent")
                                                 ? "penalty"
                                                 : "ratio") +
                                 "_" + hybridq::param_name(varied) + ".csv";
        const fsys::path path = fsys::path(sweep_out) / name;
        std::ofstream out(path);
        if (!out) throw hybridq::ScenarioParseError("cannot open output file: " + path.string());
        hybridq::write_sweep_csv(out, fs.metric, varied, rows);
        std::cout << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const hybridq::UnstableQueue& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnstable;
    } catch (const hybridq::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hybridq::ScenarioParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
