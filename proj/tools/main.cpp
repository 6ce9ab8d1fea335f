#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seltrack/energy.hpp"
#include "seltrack/errors.hpp"
#include "seltrack/io.hpp"
#include "seltrack/report.hpp"
#include "seltrack/sim.hpp"

namespace {

// Exit status classes (also documented in the README).
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitRunFailed = 4;

struct PolicyFlags {
    std::string policy = "full";
    int subset_size = 4;
    double reselection_period_s = 60.0;
    bool aided = true;  // selective tracking runs altitude-aided by default
    double gap = 0.05;
    int weight_iterations = 3;
};

seltrack::TrackingPolicy resolve_policy(const PolicyFlags& flags) {
    seltrack::TrackingPolicy policy;
    if (flags.policy == "full") {
        policy.kind = seltrack::PolicyKind::Full;
    } else if (flags.policy == "selective") {
        policy.kind = seltrack::PolicyKind::Selective;
    } else if (flags.policy == "random") {
        policy.kind = seltrack::PolicyKind::Random;
    } else {
        return seltrack::load_policy(flags.policy);
    }
    policy.selection.gdop_gap_threshold = flags.gap;
    policy.selection.altitude_aided = flags.aided;
    policy.selection.max_weight_iterations = flags.weight_iterations;
    policy.random_subset_size = flags.subset_size;
    policy.reselection_period_s = flags.reselection_period_s;
    policy.validate();
    return policy;
}

std::string policy_label(const seltrack::TrackingPolicy& policy) {
    return seltrack::policy_name(policy.kind);
}

void add_policy_flags(CLI::App* cmd, PolicyFlags& flags, bool multiple_policies,
                      std::vector<std::string>* policies) {
    if (multiple_policies) {
        cmd->add_option("--policies", *policies,
                        "Policies to compare: full|selective|random or policy file paths")
            ->delimiter(',');
    } else {
        cmd->add_option("--policy", flags.policy,
                        "Tracking policy: full|selective|random or a policy file path");
    }
    cmd->add_option("--subset-size", flags.subset_size, "Random-tracking subset size");
    cmd->add_option("--reselection-period", flags.reselection_period_s,
                    "Subset reselection period, seconds");
    cmd->add_flag("--aided,!--no-aided", flags.aided,
                  "Altitude-aided selection (3-satellite subsets allowed)");
    cmd->add_option("--gap", flags.gap, "Qualifying GDOP gap threshold (fraction)");
    cmd->add_option("--weight-iterations", flags.weight_iterations,
                    "Weight-optimization iterations per selection");
}

int cmd_generate(const seltrack::ScenarioOptions& options, const std::string& out_path) {
    const seltrack::Scenario scenario = seltrack::build_scenario(options);
    seltrack::write_file_atomic(out_path, seltrack::scenario_to_json(scenario));
    std::cout << "wrote " << out_path << " (id " << scenario.id << ")\n";
    return 0;
}

int cmd_run(const std::string& scenario_path, const PolicyFlags& policy_flags,
            const std::string& profile_name, std::uint64_t seed_override, bool has_seed,
            double rate_override, const std::string& out_dir, const std::string& format) {
    seltrack::Scenario scenario = seltrack::load_scenario(scenario_path);
    if (has_seed) {
        scenario.rng_seed = seed_override;
    }
    if (rate_override > 0.0) {
        scenario.update_rate_hz = rate_override;
    }
    const seltrack::TrackingPolicy policy = resolve_policy(policy_flags);
    const seltrack::EnergyModelParams params = seltrack::resolve_profile(profile_name);

    const seltrack::RunReport report = seltrack::run_scenario(scenario, policy, params);

    const std::string stem = out_dir + "/run_" + policy_label(policy) + "_seed" +
                             std::to_string(scenario.rng_seed);
    const std::string csv = seltrack::epochs_csv(report);
    const std::string summary = seltrack::run_summary_json(report, params.name);
    seltrack::write_file_atomic(stem + ".csv", csv);
    seltrack::write_file_atomic(stem + "_summary.json", summary);

    std::cout << (format == "csv" ? csv : summary);
    return 0;
}

int cmd_compare(const std::string& scenario_path, const std::vector<std::string>& policy_specs,
                const PolicyFlags& shared_flags, const std::vector<std::uint64_t>& seeds,
                const std::string& profile_name, double rate_override,
                const std::string& out_dir, const std::string& format) {
    if (seeds.empty()) {
        throw seltrack::ConfigError("compare needs at least one seed");
    }
    if (policy_specs.size() < 2) {
        throw seltrack::ConfigError("compare needs at least two policies");
    }

    seltrack::Scenario scenario = seltrack::load_scenario(scenario_path);
    if (rate_override > 0.0) {
        scenario.update_rate_hz = rate_override;
    }
    const seltrack::EnergyModelParams params = seltrack::resolve_profile(profile_name);

    std::vector<std::string> labels;
    std::vector<std::vector<seltrack::RunReport>> runs;
    for (const std::string& requested : policy_specs) {
        PolicyFlags flags = shared_flags;
        flags.policy = requested;
        const seltrack::TrackingPolicy policy = resolve_policy(flags);
        labels.push_back(policy_label(policy));

        std::vector<seltrack::RunReport> policy_runs;
        for (std::uint64_t seed : seeds) {
            seltrack::Scenario seeded = scenario;
            seeded.rng_seed = seed;
            policy_runs.push_back(seltrack::run_scenario(seeded, policy, params));
        }
        runs.push_back(std::move(policy_runs));
    }

    const seltrack::CompareSummary summary =
        seltrack::build_compare_summary(scenario.id, seeds, labels, runs);
    const std::string summary_json = seltrack::compare_summary_json(summary);
    const std::string metrics = seltrack::compare_metrics_csv(labels, runs);

    seltrack::write_file_atomic(out_dir + "/compare_summary.json", summary_json);
    seltrack::write_file_atomic(out_dir + "/compare_metrics.csv", metrics);
    for (size_t p = 0; p < runs.size(); ++p) {
        seltrack::write_file_atomic(out_dir + "/trajectory_" + labels[p] + ".csv",
                                    seltrack::trajectory_csv(runs[p].front()));
    }

    std::cout << (format == "csv" ? metrics : summary_json);
    return 0;
}

int cmd_energy(const std::string& profile_name, int satellites, double rate, bool as_json) {
    const seltrack::EnergyModelParams params = seltrack::resolve_profile(profile_name);
    const seltrack::PowerBreakdown b =
        seltrack::total_power(params, seltrack::OperatingPoint{satellites, rate});

    if (as_json) {
        const nlohmann::json j = {{"profile", params.name},
                                  {"tracked_satellites", satellites},
                                  {"update_rate_hz", rate},
                                  {"rf_mw", b.rf_mw},
                                  {"acquisition_mw", b.acquisition_mw},
                                  {"track_mw", b.track_mw},
                                  {"ephemeris_mw", b.ephemeris_mw},
                                  {"navigation_mw", b.navigation_mw},
                                  {"idle_mw", b.idle_mw},
                                  {"total_mw", b.total_mw}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::printf("profile: %s, N=%d, f=%g Hz\n", params.name.c_str(), satellites, rate);
    std::printf("%-12s %12s\n", "procedure", "power_mw");
    std::printf("%-12s %12.4f\n", "rf", b.rf_mw);
    std::printf("%-12s %12.4f\n", "acquisition", b.acquisition_mw);
    std::printf("%-12s %12.4f\n", "track", b.track_mw);
    std::printf("%-12s %12.4f\n", "ephemeris", b.ephemeris_mw);
    std::printf("%-12s %12.4f\n", "navigation", b.navigation_mw);
    std::printf("%-12s %12.4f\n", "idle", b.idle_mw);
    std::printf("%-12s %12.4f\n", "total", b.total_mw);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GPS receiver energy model and selective-tracking simulator"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Write a synthetic vehicle scenario file");
    seltrack::ScenarioOptions gen_options;
    std::string gen_out = "scenario.json";
    generate->add_option("--out", gen_out, "Output scenario path");
    generate->add_option("--duration", gen_options.duration_s, "Run duration, seconds");
    generate->add_option("--speed-kmh", gen_options.speed_kmh, "Vehicle speed, km/h");
    generate->add_option("--satellites", gen_options.satellite_count, "Constellation size");
    generate->add_option("--seed", gen_options.seed, "Run RNG seed stored in the scenario");
    generate->add_option("--rate", gen_options.update_rate_hz, "Update rate, Hz");
    generate->add_option("--sigma", gen_options.sigma_m, "Pseudorange noise sigma, meters");
    generate->add_option("--mask-deg", gen_options.mask_deg, "Elevation mask, degrees");
    generate->add_option("--start-lat", gen_options.start_lat_deg, "Start latitude, degrees");
    generate->add_option("--start-lon", gen_options.start_lon_deg, "Start longitude, degrees");
    generate->add_option("--height", gen_options.height_m, "Receiver height, meters");
    generate->add_option("--heading-deg", gen_options.heading_deg, "Initial heading, degrees");

    // run
    auto* run = app.add_subcommand("run", "Run one scenario under one tracking policy");
    std::string run_scenario_path;
    PolicyFlags run_policy;
    std::string run_profile = "namuru";
    std::uint64_t run_seed = 0;
    double run_rate = 0.0;
    std::string run_out_dir = "out";
    std::string run_format = "summary";
    run->add_option("--scenario", run_scenario_path, "Scenario file")->required();
    add_policy_flags(run, run_policy, false, nullptr);
    run->add_option("--profile", run_profile, "Energy profile: namuru or a profile file path");
    auto* run_seed_opt = run->add_option("--seed", run_seed, "Override the scenario seed");
    run->add_option("--rate", run_rate, "Override the scenario update rate, Hz");
    run->add_option("--out-dir", run_out_dir, "Report output directory");
    run->add_option("--format", run_format, "Stdout format: summary|csv")
        ->check(CLI::IsMember({"summary", "csv"}));

    // compare
    auto* compare = app.add_subcommand("compare", "Paired multi-policy comparison");
    std::string cmp_scenario_path;
    PolicyFlags cmp_policy;
    std::vector<std::string> cmp_policies;
    std::vector<std::uint64_t> cmp_seeds;
    std::string cmp_profile = "namuru";
    double cmp_rate = 0.0;
    std::string cmp_out_dir = "out";
    std::string cmp_format = "summary";
    compare->add_option("--scenario", cmp_scenario_path, "Scenario file")->required();
    add_policy_flags(compare, cmp_policy, true, &cmp_policies);
    compare->add_option("--seeds", cmp_seeds, "Seeds for paired runs")->delimiter(',');
    compare->add_option("--profile", cmp_profile, "Energy profile: namuru or a file path");
    compare->add_option("--rate", cmp_rate, "Override the scenario update rate, Hz");
    compare->add_option("--out-dir", cmp_out_dir, "Report output directory");
    compare->add_option("--format", cmp_format, "Stdout format: summary|csv")
        ->check(CLI::IsMember({"summary", "csv"}));

    // energy
    auto* energy = app.add_subcommand("energy", "Print the power breakdown at an operating point");
    std::string energy_profile = "namuru";
    int energy_n = 8;
    double energy_rate = 1.0;
    bool energy_json = false;
    energy->add_option("--profile", energy_profile, "Energy profile: namuru or a file path");
    energy->add_option("--satellites,-n", energy_n, "Tracked satellite count N");
    energy->add_option("--rate", energy_rate, "Update rate f, Hz");
    energy->add_flag("--json", energy_json, "Machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (app.got_subcommand(generate)) {
            return cmd_generate(gen_options, gen_out);
        }
        if (app.got_subcommand(run)) {
            return cmd_run(run_scenario_path, run_policy, run_profile, run_seed,
                           run_seed_opt->count() > 0, run_rate, run_out_dir, run_format);
        }
        if (app.got_subcommand(compare)) {
            return cmd_compare(cmp_scenario_path, cmp_policies, cmp_policy, cmp_seeds,
                               cmp_profile, cmp_rate, cmp_out_dir, cmp_format);
        }
        if (app.got_subcommand(energy)) {
            return cmd_energy(energy_profile, energy_n, energy_rate, energy_json);
        }
    } catch (const seltrack::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const seltrack::RunFailedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailed;
    } catch (const seltrack::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const seltrack::InvalidOperatingPointError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const seltrack::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
