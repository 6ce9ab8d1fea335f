#include "seltrack/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "seltrack/errors.hpp"
#include "seltrack/rng.hpp"

namespace seltrack {

namespace {

constexpr double kEarthMuM3S2 = 3.986004418e14;

// True receiver clock offset fed to the forward model (about 1 ms of light
// time); the solver estimates it jointly with position.
constexpr double kTrueClockBiasM = 299792.458;

// Substream purposes
constexpr std::uint64_t kPurposeMeasurement = 1;
constexpr std::uint64_t kPurposeOutage = 2;
constexpr std::uint64_t kPurposeRandomSelect = 3;

std::vector<EcefVector> positions_of(const std::vector<std::pair<int, EcefVector>>& sats,
                                     const std::vector<int>& ids) {
    std::vector<EcefVector> out;
    out.reserve(ids.size());
    for (int id : ids) {
        out.push_back(sats[static_cast<size_t>(id)].second);
    }
    return out;
}

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

void ConstellationConfig::validate() const {
    if (satellite_count < 1 || plane_count < 1) {
        throw ConfigError("constellation needs at least one satellite and one plane");
    }
    if (!(orbital_radius_m > kWgs84SemiMajorAxisM)) {
        throw ConfigError("orbital radius must exceed the Earth radius");
    }
    if (!(inclination_rad >= 0.0) || !(inclination_rad <= kPi)) {
        throw ConfigError("inclination must be in [0, pi]");
    }
}

double orbital_period_s(const ConstellationConfig& config) {
    config.validate();
    const double r = config.orbital_radius_m;
    return 2.0 * kPi * std::sqrt(r * r * r / kEarthMuM3S2);
}

std::vector<std::pair<int, EcefVector>> propagate_constellation(
    const ConstellationConfig& config, double t) {
    config.validate();

    const double mean_motion = 2.0 * kPi / orbital_period_s(config);
    const int per_plane =
        (config.satellite_count + config.plane_count - 1) / config.plane_count;
    const double cos_inc = std::cos(config.inclination_rad);
    const double sin_inc = std::sin(config.inclination_rad);

    std::vector<std::pair<int, EcefVector>> out;
    out.reserve(static_cast<size_t>(config.satellite_count));
    for (int i = 0; i < config.satellite_count; ++i) {
        const int plane = i / per_plane;
        const int slot = i % per_plane;
        const double raan = config.raan0_rad + 2.0 * kPi * plane / config.plane_count;
        const double anomaly = 2.0 * kPi * slot / per_plane + config.phasing_rad * plane +
                               mean_motion * (t - config.epoch_s);

        const double xp = config.orbital_radius_m * std::cos(anomaly);
        const double yp = config.orbital_radius_m * std::sin(anomaly);
        const double cos_raan = std::cos(raan);
        const double sin_raan = std::sin(raan);
        out.push_back({i,
                       {xp * cos_raan - yp * cos_inc * sin_raan,
                        xp * sin_raan + yp * cos_inc * cos_raan, yp * sin_inc}});
    }
    return out;
}

std::vector<int> visible_satellites(const EcefVector& receiver,
                                    const std::vector<std::pair<int, EcefVector>>& satellites,
                                    double mask_rad, const std::vector<bool>* outage_on) {
    std::vector<int> out;
    for (const auto& [id, pos] : satellites) {
        if (outage_on && !(*outage_on)[static_cast<size_t>(id)]) {
            continue;
        }
        if (look_angles(receiver, pos).elevation >= mask_rad) {
            out.push_back(id);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

PseudorangeSet generate_measurements(const EcefVector& receiver, double true_bias,
                                     const std::vector<std::pair<int, EcefVector>>& satellites,
                                     double sigma, const NoiseStream& stream) {
    if (sigma < 0.0) {
        throw DegenerateInputError("noise sigma must be non-negative");
    }
    PseudorangeSet set;
    set.entries.reserve(satellites.size());
    for (const auto& [id, pos] : satellites) {
        double range = predict_pseudorange(receiver, true_bias, pos);
        if (sigma > 0.0) {
            range += sigma * normal_from_key(stream_key(stream.seed, stream.epoch,
                                                        static_cast<std::uint64_t>(id),
                                                        kPurposeMeasurement));
        }
        set.entries.push_back({id, pos, range});
    }
    return set;
}

void Scenario::validate() const {
    constellation.validate();
    if (!(duration_s > 0.0)) {
        throw ConfigError("scenario duration must be positive");
    }
    if (!(update_rate_hz >= 1.0) || !(update_rate_hz <= 10.0)) {
        throw ConfigError("update rate must be in [1, 10] Hz");
    }
    if (pseudorange_noise_sigma_m < 0.0) {
        throw ConfigError("pseudorange noise sigma must be non-negative");
    }
    if (!(elevation_mask_rad >= -kPi / 2.0) || !(elevation_mask_rad <= kPi / 2.0)) {
        throw ConfigError("elevation mask must be in [-pi/2, pi/2]");
    }
    if (trajectory.empty()) {
        throw ConfigError("trajectory needs at least one waypoint");
    }
    for (size_t i = 1; i < trajectory.size(); ++i) {
        if (!(trajectory[i].time_s > trajectory[i - 1].time_s)) {
            throw ConfigError("trajectory waypoints must have strictly increasing times");
        }
    }
    if (outage.enabled && (!(outage.mean_up_s > 0.0) || !(outage.mean_down_s > 0.0))) {
        throw ConfigError("outage mean up/down times must be positive");
    }
}

const char* policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Full:
            return "full";
        case PolicyKind::Selective:
            return "selective";
        case PolicyKind::Random:
            return "random";
    }
    return "unknown";
}

void TrackingPolicy::validate() const {
    if (!(selection.gdop_gap_threshold > 0.0) || !(selection.gdop_gap_threshold < 1.0)) {
        throw ConfigError("gdop_gap_threshold must be in (0, 1)");
    }
    if (selection.max_weight_iterations < 1) {
        throw ConfigError("max_weight_iterations must be at least 1");
    }
    if (!(reselection_period_s > 0.0)) {
        throw ConfigError("reselection period must be positive");
    }
    const int min_subset = selection.altitude_aided ? 3 : 4;
    if (kind == PolicyKind::Random && random_subset_size < min_subset) {
        throw ConfigError("random subset size below the solvable minimum");
    }
}

GeodeticPosition trajectory_at(const Scenario& scenario, double t) {
    const auto& wp = scenario.trajectory;
    if (t <= wp.front().time_s) {
        return wp.front().position;
    }
    if (t >= wp.back().time_s) {
        return wp.back().position;
    }
    size_t hi = 1;
    while (wp[hi].time_s < t) {
        ++hi;
    }
    const Waypoint& a = wp[hi - 1];
    const Waypoint& b = wp[hi];
    const double s = (t - a.time_s) / (b.time_s - a.time_s);
    return {a.position.latitude + s * (b.position.latitude - a.position.latitude),
            a.position.longitude + s * (b.position.longitude - a.position.longitude),
            a.position.height + s * (b.position.height - a.position.height)};
}

RunReport run_scenario(const Scenario& scenario, const TrackingPolicy& policy,
                       const EnergyModelParams& params) {
    scenario.validate();
    policy.validate();
    params.validate();

    const double f = scenario.update_rate_hz;
    const int n_epochs = static_cast<int>(std::llround(scenario.duration_s * f));
    const double dt = 1.0 / f;

    RunReport report;
    report.scenario_id = scenario.id;
    report.policy_id = policy_name(policy.kind);
    report.seed = scenario.rng_seed;
    report.update_rate_hz = f;
    report.epochs.reserve(static_cast<size_t>(n_epochs));

    std::vector<bool> outage_on(static_cast<size_t>(scenario.constellation.satellite_count),
                                true);
    const double p_drop =
        scenario.outage.enabled ? 1.0 - std::exp(-dt / scenario.outage.mean_up_s) : 0.0;
    const double p_recover =
        scenario.outage.enabled ? 1.0 - std::exp(-dt / scenario.outage.mean_down_s) : 0.0;

    std::optional<InitialGuess> prev_fix;
    std::vector<int> chosen_ids;  // selective/random subset between refreshes
    bool have_subset = false;
    double last_refresh_t = 0.0;
    int last_known_n = 0;
    int reacq_events = 0;
    std::vector<int> charged_n;
    charged_n.reserve(static_cast<size_t>(n_epochs));

    for (int k = 0; k < n_epochs; ++k) {
        const double t = static_cast<double>(k) * dt;
        const GeodeticPosition truth_geo = trajectory_at(scenario, t);
        const EcefVector truth = geodetic_to_ecef(truth_geo);
        const auto sats = propagate_constellation(scenario.constellation, t);

        if (scenario.outage.enabled) {
            for (size_t s = 0; s < outage_on.size(); ++s) {
                const double u = uniform_from_key(stream_key(
                    scenario.rng_seed, static_cast<std::uint64_t>(k), s, kPurposeOutage));
                outage_on[s] = outage_on[s] ? (u >= p_drop) : (u < p_recover);
            }
        }

        const std::vector<int> visible = visible_satellites(
            truth, sats, scenario.elevation_mask_rad,
            scenario.outage.enabled ? &outage_on : nullptr);

        const bool aided_active = policy.kind == PolicyKind::Selective &&
                                  policy.selection.altitude_aided && prev_fix.has_value();
        const int min_solve = aided_active ? 3 : 4;

        // Determine the tracked set for this epoch.
        std::vector<int> tracked;
        bool refresh_epoch = false;
        switch (policy.kind) {
            case PolicyKind::Full:
                tracked = visible;
                break;
            case PolicyKind::Selective: {
                bool refresh = !have_subset ||
                               t - last_refresh_t >= policy.reselection_period_s - 1e-9;
                if (!refresh) {
                    tracked = intersect_sorted(chosen_ids, visible);
                    if (static_cast<int>(tracked.size()) < min_solve) {
                        ++reacq_events;  // lost the subset mid-interval
                        refresh = true;
                    }
                }
                if (refresh) {
                    tracked = visible;  // full-tracking snapshot
                    refresh_epoch = true;
                }
                break;
            }
            case PolicyKind::Random: {
                bool refresh = !have_subset ||
                               t - last_refresh_t >= policy.reselection_period_s - 1e-9;
                if (!refresh) {
                    tracked = intersect_sorted(chosen_ids, visible);
                    if (static_cast<int>(tracked.size()) < min_solve) {
                        ++reacq_events;
                        refresh = true;
                    }
                }
                if (refresh) {
                    // Seeded partial Fisher-Yates over the visible set.
                    std::vector<int> pool = visible;
                    const size_t want = std::min(pool.size(),
                                                 static_cast<size_t>(policy.random_subset_size));
                    for (size_t i = 0; i < want; ++i) {
                        const std::uint64_t key =
                            stream_key(scenario.rng_seed, static_cast<std::uint64_t>(k), i,
                                       kPurposeRandomSelect);
                        const size_t j = i + key % (pool.size() - i);
                        std::swap(pool[i], pool[j]);
                    }
                    pool.resize(want);
                    std::sort(pool.begin(), pool.end());
                    chosen_ids = pool;
                    have_subset = true;
                    last_refresh_t = t;
                    tracked = chosen_ids;
                }
                break;
            }
        }

        EpochRecord record;
        record.time_s = t;
        record.visible_count = static_cast<int>(visible.size());
        record.tracked_indices = tracked;

        if (static_cast<int>(tracked.size()) >= min_solve) {
            PseudorangeSet meas = generate_measurements(
                truth, kTrueClockBiasM,
                [&] {
                    std::vector<std::pair<int, EcefVector>> subset;
                    subset.reserve(tracked.size());
                    for (int id : tracked) {
                        subset.push_back(sats[static_cast<size_t>(id)]);
                    }
                    return subset;
                }(),
                scenario.pseudorange_noise_sigma_m,
                {scenario.rng_seed, static_cast<std::uint64_t>(k)});
            meas.epoch_time = t;

            std::optional<AltitudeAiding> aiding;
            if (aided_active) {
                aiding = AltitudeAiding{ecef_to_geodetic(prev_fix->position).height, 1.0};
            }

            try {
                const NavSolution sol =
                    solve_position(meas, prev_fix.value_or(InitialGuess{}), aiding);
                record.has_fix = true;
                record.solution = sol;
                record.error_3d_m = solution_error(sol, truth);
                if (sol.converged) {
                    prev_fix = InitialGuess{sol.position, sol.clock_bias};
                }
            } catch (const DegenerateGeometryError&) {
                record.has_fix = false;
            }
        }

        // A selective refresh re-selects from the full-visibility snapshot,
        // anchored at the fix just computed.
        if (policy.kind == PolicyKind::Selective && refresh_epoch && record.has_fix) {
            const int min_subset = policy.selection.altitude_aided ? 3 : 4;
            if (static_cast<int>(visible.size()) >= min_subset) {
                try {
                    const EcefVector anchor = record.solution.position;
                    const GeometryMatrix a = geometry_matrix(anchor, positions_of(sats, visible));
                    std::optional<std::array<double, 4>> alt_row;
                    if (policy.selection.altitude_aided) {
                        alt_row = altitude_constraint_row(anchor);
                    }
                    const SelectionResult res = select_subset(a, policy.selection, alt_row);
                    chosen_ids.clear();
                    for (int row : res.selected_indices) {
                        chosen_ids.push_back(visible[static_cast<size_t>(row)]);
                    }
                    std::sort(chosen_ids.begin(), chosen_ids.end());
                    report.selections.push_back(
                        {t, chosen_ids, res.full_gdop, res.subset_gdop, res.relative_gap});
                } catch (const DegenerateGeometryError&) {
                    chosen_ids = visible;  // no reduction possible this interval
                }
                have_subset = true;
                last_refresh_t = t;
            }
        }

        int n_power = static_cast<int>(tracked.size());
        if (record.has_fix) {
            last_known_n = n_power;
        } else {
            n_power = last_known_n > 0 ? last_known_n : std::max(1, n_power);
        }
        record.power = total_power(params, OperatingPoint{n_power, f});
        charged_n.push_back(n_power);

        report.epochs.push_back(std::move(record));
    }

    double error_sum = 0.0;
    for (const EpochRecord& e : report.epochs) {
        if (e.has_fix) {
            ++report.fix_epochs;
            error_sum += e.error_3d_m;
        }
    }
    if (report.fix_epochs == 0) {
        throw RunFailedError("no epoch produced a position fix");
    }
    report.mean_error_m = error_sum / report.fix_epochs;
    report.reacquisition_events = reacq_events;

    const RunEnergy energy = accumulate_run_energy(charged_n, f, params, reacq_events);
    report.total_energy_j = energy.energy_j;
    report.mean_power_mw = energy.mean_power_mw;
    return report;
}

void ScenarioOptions::validate() const {
    if (!(duration_s > 0.0)) {
        throw ConfigError("duration must be positive");
    }
    if (speed_kmh < 0.0) {
        throw ConfigError("speed must be non-negative");
    }
    if (satellite_count < 1) {
        throw ConfigError("satellite count must be at least 1");
    }
    if (!(update_rate_hz >= 1.0) || !(update_rate_hz <= 10.0)) {
        throw ConfigError("update rate must be in [1, 10] Hz");
    }
    if (sigma_m < 0.0) {
        throw ConfigError("noise sigma must be non-negative");
    }
    if (mask_deg < -90.0 || mask_deg > 90.0) {
        throw ConfigError("elevation mask must be in [-90, 90] degrees");
    }
    if (start_lat_deg < -90.0 || start_lat_deg > 90.0 || start_lon_deg < -180.0 ||
        start_lon_deg > 180.0) {
        throw ConfigError("start coordinates out of range");
    }
}

Scenario build_scenario(const ScenarioOptions& options) {
    options.validate();

    Scenario scenario;
    char id[128];
    std::snprintf(id, sizeof(id), "synthetic-d%g-v%g-n%d-s%llu", options.duration_s,
                  options.speed_kmh, options.satellite_count,
                  static_cast<unsigned long long>(options.seed));
    scenario.id = id;
    scenario.constellation.satellite_count = options.satellite_count;
    scenario.duration_s = options.duration_s;
    scenario.update_rate_hz = options.update_rate_hz;
    scenario.pseudorange_noise_sigma_m = options.sigma_m;
    scenario.elevation_mask_rad = deg_to_rad(options.mask_deg);
    scenario.rng_seed = options.seed;

    // Integrate a gently S-curving track at 1 s steps; keep a waypoint every 10 s.
    double lat = deg_to_rad(options.start_lat_deg);
    double lon = deg_to_rad(options.start_lon_deg);
    const double h = options.height_m;
    const double v = options.speed_kmh / 3.6;
    const double heading0 = deg_to_rad(options.heading_deg);

    scenario.trajectory.push_back({0.0, {lat, lon, h}});
    const int steps = static_cast<int>(std::ceil(options.duration_s));
    for (int s = 1; s <= steps; ++s) {
        const double heading = heading0 + 0.6 * std::sin(2.0 * kPi * s / 150.0);
        const double sin_lat = std::sin(lat);
        const double one_m_e2s2 = 1.0 - kWgs84EccentricitySq * sin_lat * sin_lat;
        const double m_radius = kWgs84SemiMajorAxisM * (1.0 - kWgs84EccentricitySq) /
                                (one_m_e2s2 * std::sqrt(one_m_e2s2));
        const double n_radius = kWgs84SemiMajorAxisM / std::sqrt(one_m_e2s2);
        lat += v * std::cos(heading) / (m_radius + h);
        lon += v * std::sin(heading) / ((n_radius + h) * std::cos(lat));
        if (s % 10 == 0 || s == steps) {
            scenario.trajectory.push_back({static_cast<double>(s), {lat, lon, h}});
        }
    }
    return scenario;
}

}  // namespace seltrack
