#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "seltrack/energy.hpp"
#include "seltrack/gdop.hpp"
#include "seltrack/geo.hpp"
#include "seltrack/nav.hpp"

namespace seltrack {

/// Circular-orbit constellation on evenly spaced planes. Orbits are modeled
/// directly in the ECEF frame; pseudoranges are generated and consumed in a
/// common ECEF snapshot per epoch.
struct ConstellationConfig {
    int satellite_count = 24;
    double orbital_radius_m = 26560000.0;
    double inclination_rad = deg_to_rad(55.0);
    int plane_count = 3;
    double phasing_rad = deg_to_rad(15.0);  // in-plane offset between adjacent planes
    double raan0_rad = 0.0;                 // ascending node of plane 0
    double epoch_s = 0.0;                   // time at which slot anomalies are nominal

    void validate() const;
};

/// Kepler period of the configured circular orbit, seconds.
double orbital_period_s(const ConstellationConfig& config);

/// Satellite (id, ECEF position) pairs at time t, ids ascending from 0.
std::vector<std::pair<int, EcefVector>> propagate_constellation(
    const ConstellationConfig& config, double t);

/// Two-state per-satellite availability process (viaducts, foliage, ...).
struct OutageModel {
    bool enabled = false;
    double mean_up_s = 120.0;
    double mean_down_s = 10.0;
};

struct Waypoint {
    double time_s = 0.0;
    GeodeticPosition position;
};

/// A reproducible simulation input: constellation, receiver trajectory,
/// noise level and seed. Trajectories interpolate linearly between waypoints
/// and hold the last waypoint afterwards.
struct Scenario {
    std::string id;
    ConstellationConfig constellation;
    std::vector<Waypoint> trajectory;
    double duration_s = 300.0;
    double update_rate_hz = 1.0;
    double pseudorange_noise_sigma_m = 5.0;
    double elevation_mask_rad = deg_to_rad(10.0);
    OutageModel outage;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

enum class PolicyKind { Full, Selective, Random };

const char* policy_name(PolicyKind kind);

struct TrackingPolicy {
    PolicyKind kind = PolicyKind::Full;
    SelectionConfig selection;        // selective tracking
    int random_subset_size = 4;       // random tracking
    double reselection_period_s = 60.0;

    void validate() const;
};

struct EpochRecord {
    double time_s = 0.0;
    int visible_count = 0;
    std::vector<int> tracked_indices;  // satellite ids, ascending
    bool has_fix = false;
    NavSolution solution;
    double error_3d_m = 0.0;
    PowerBreakdown power;
};

/// One subset (re)selection performed by the selective policy.
struct SelectionEvent {
    double time_s = 0.0;
    std::vector<int> selected_ids;
    double full_gdop = 0.0;
    double subset_gdop = 0.0;
    double relative_gap = 0.0;
};

struct RunReport {
    std::string scenario_id;
    std::string policy_id;
    std::uint64_t seed = 0;
    double update_rate_hz = 1.0;
    std::vector<EpochRecord> epochs;
    std::vector<SelectionEvent> selections;
    int fix_epochs = 0;
    double mean_error_m = 0.0;
    double mean_power_mw = 0.0;
    double total_energy_j = 0.0;
    int reacquisition_events = 0;
};

/// Ids of satellites at or above the elevation mask, ascending. `outage_on`,
/// when non-null, must hold one availability flag per satellite id.
std::vector<int> visible_satellites(const EcefVector& receiver,
                                    const std::vector<std::pair<int, EcefVector>>& satellites,
                                    double mask_rad,
                                    const std::vector<bool>* outage_on = nullptr);

/// Identifies the deterministic noise substream of one epoch.
struct NoiseStream {
    std::uint64_t seed = 0;
    std::uint64_t epoch = 0;
};

/// Forward-modeled pseudoranges with i.i.d. Gaussian noise. The draw for a
/// satellite depends only on (seed, epoch, satellite id), never on which
/// other satellites are tracked.
PseudorangeSet generate_measurements(const EcefVector& receiver, double true_bias,
                                     const std::vector<std::pair<int, EcefVector>>& satellites,
                                     double sigma, const NoiseStream& stream);

/// Receiver truth position at time t (linear interpolation between waypoints).
GeodeticPosition trajectory_at(const Scenario& scenario, double t);

/// Runs one scenario under one tracking policy. Throws RunFailedError when no
/// epoch at all produces a fix.
RunReport run_scenario(const Scenario& scenario, const TrackingPolicy& policy,
                       const EnergyModelParams& params);

/// Options for synthesizing a scenario (the CLI `generate` defaults).
struct ScenarioOptions {
    double duration_s = 300.0;
    double speed_kmh = 60.0;
    int satellite_count = 26;
    std::uint64_t seed = 1;
    double update_rate_hz = 1.0;
    double sigma_m = 5.0;
    double mask_deg = 10.0;
    double start_lat_deg = 35.0;
    double start_lon_deg = -120.0;
    double height_m = 200.0;
    double heading_deg = 90.0;

    void validate() const;
};

/// Deterministically builds a gently curving vehicle scenario from options.
Scenario build_scenario(const ScenarioOptions& options);

inline Scenario default_scenario(std::uint64_t seed) {
    ScenarioOptions options;
    options.seed = seed;
    return build_scenario(options);
}

}  // namespace seltrack
