#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seltrack/sim.hpp"

namespace seltrack {

// Report emission. Column orders and key names are stable; see the README.

/// One row per epoch:
/// time_s,visible_count,tracked_count,tracked_ids,fix,converged,iterations,
/// error_m,gdop,clock_bias_m,lat_deg,lon_deg,height_m,rf_mw,acquisition_mw,
/// track_mw,ephemeris_mw,navigation_mw,idle_mw,total_mw
std::string epochs_csv(const RunReport& report);

/// Fixed-key JSON summary of one run.
std::string run_summary_json(const RunReport& report, const std::string& profile_name);

/// Computed track of the run, fix epochs only: time_s,lat_deg,lon_deg,error_m
std::string trajectory_csv(const RunReport& report);

struct PolicyMetrics {
    std::string policy;
    double mean_error_m = 0.0;
    double mean_power_mw = 0.0;
    double total_energy_j = 0.0;   // mean per-run energy across seeds
    double saving_vs_full = 0.0;   // NaN when no full baseline is present
};

struct CompareSummary {
    std::string scenario_id;
    std::vector<std::uint64_t> seeds;
    std::vector<PolicyMetrics> policies;
};

/// Aggregates paired runs: outer index = policy, inner index = seed.
CompareSummary build_compare_summary(const std::string& scenario_id,
                                     const std::vector<std::uint64_t>& seeds,
                                     const std::vector<std::string>& policy_labels,
                                     const std::vector<std::vector<RunReport>>& runs);

std::string compare_summary_json(const CompareSummary& summary);

/// One row per (policy, seed):
/// policy,seed,mean_error_m,mean_power_mw,total_energy_j,reacquisition_events
std::string compare_metrics_csv(const std::vector<std::string>& policy_labels,
                                const std::vector<std::vector<RunReport>>& runs);

}  // namespace seltrack
