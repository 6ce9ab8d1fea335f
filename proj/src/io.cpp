#include "seltrack/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "seltrack/errors.hpp"

namespace seltrack {

namespace {

using nlohmann::json;

json constellation_to_json(const ConstellationConfig& c) {
    return {{"satellite_count", c.satellite_count},
            {"orbital_radius_m", c.orbital_radius_m},
            {"inclination_deg", rad_to_deg(c.inclination_rad)},
            {"plane_count", c.plane_count},
            {"phasing_deg", rad_to_deg(c.phasing_rad)},
            {"raan0_deg", rad_to_deg(c.raan0_rad)},
            {"epoch_s", c.epoch_s}};
}

ConstellationConfig constellation_from_json(const json& j) {
    ConstellationConfig c;
    c.satellite_count = j.at("satellite_count").get<int>();
    c.orbital_radius_m = j.at("orbital_radius_m").get<double>();
    c.inclination_rad = deg_to_rad(j.at("inclination_deg").get<double>());
    c.plane_count = j.at("plane_count").get<int>();
    c.phasing_rad = deg_to_rad(j.at("phasing_deg").get<double>());
    c.raan0_rad = deg_to_rad(j.at("raan0_deg").get<double>());
    c.epoch_s = j.at("epoch_s").get<double>();
    return c;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string scenario_to_json(const Scenario& scenario) {
    json waypoints = json::array();
    for (const Waypoint& w : scenario.trajectory) {
        waypoints.push_back({{"time_s", w.time_s},
                             {"lat_deg", rad_to_deg(w.position.latitude)},
                             {"lon_deg", rad_to_deg(w.position.longitude)},
                             {"height_m", w.position.height}});
    }
    const json j = {{"id", scenario.id},
                    {"constellation", constellation_to_json(scenario.constellation)},
                    {"duration_s", scenario.duration_s},
                    {"update_rate_hz", scenario.update_rate_hz},
                    {"pseudorange_noise_sigma_m", scenario.pseudorange_noise_sigma_m},
                    {"elevation_mask_deg", rad_to_deg(scenario.elevation_mask_rad)},
                    {"rng_seed", scenario.rng_seed},
                    {"outage",
                     {{"enabled", scenario.outage.enabled},
                      {"mean_up_s", scenario.outage.mean_up_s},
                      {"mean_down_s", scenario.outage.mean_down_s}}},
                    {"trajectory", waypoints}};
    return dump(j);
}

Scenario scenario_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        Scenario s;
        s.id = j.at("id").get<std::string>();
        s.constellation = constellation_from_json(j.at("constellation"));
        s.duration_s = j.at("duration_s").get<double>();
        s.update_rate_hz = j.at("update_rate_hz").get<double>();
        s.pseudorange_noise_sigma_m = j.at("pseudorange_noise_sigma_m").get<double>();
        s.elevation_mask_rad = deg_to_rad(j.at("elevation_mask_deg").get<double>());
        s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        const json& outage = j.at("outage");
        s.outage.enabled = outage.at("enabled").get<bool>();
        s.outage.mean_up_s = outage.at("mean_up_s").get<double>();
        s.outage.mean_down_s = outage.at("mean_down_s").get<double>();
        for (const json& w : j.at("trajectory")) {
            s.trajectory.push_back({w.at("time_s").get<double>(),
                                    {deg_to_rad(w.at("lat_deg").get<double>()),
                                     deg_to_rad(w.at("lon_deg").get<double>()),
                                     w.at("height_m").get<double>()}});
        }
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid scenario file: ") + e.what());
    } catch (const ConfigError& e) {
        throw ParseError(std::string("invalid scenario file: ") + e.what());
    }
}

std::string profile_to_json(const EnergyModelParams& p) {
    const json j = {
        {"name", p.name},
        {"rf",
         {{"voltage_v", p.rf_voltage_v},
          {"current_a", p.rf_current_a},
          {"sample_time_s", p.rf_sample_time_s}}},
        {"acquisition",
         {{"voltage_v", p.cpu_voltage_v},
          {"current_a", p.acq_current_a},
          {"time_s", p.acq_time_s},
          {"period_s", p.acq_period_s}}},
        {"track_fit",
         {{"intercept_mw", p.track_fit.intercept_mw}, {"slope_mw_per_nl", p.track_fit.slope_mw}}},
        {"ephemeris",
         {{"current_a", p.eph_current_a},
          {"time_s", p.eph_time_s},
          {"rf_time_s", p.eph_rf_time_s},
          {"period_s", p.eph_period_s}}},
        {"navigation_fit",
         {{"intercept_mw", p.nav_fit.intercept_mw}, {"slope_mw_per_nl", p.nav_fit.slope_mw}}},
        {"idle", {{"power_mw", p.idle_power_mw}, {"included", p.include_idle}}}};
    return dump(j);
}

EnergyModelParams profile_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        EnergyModelParams p;
        p.name = j.value("name", "custom");
        const json& rf = j.at("rf");
        p.rf_voltage_v = rf.at("voltage_v").get<double>();
        p.rf_current_a = rf.at("current_a").get<double>();
        p.rf_sample_time_s = rf.at("sample_time_s").get<double>();
        const json& acq = j.at("acquisition");
        p.cpu_voltage_v = acq.at("voltage_v").get<double>();
        p.acq_current_a = acq.at("current_a").get<double>();
        p.acq_time_s = acq.at("time_s").get<double>();
        p.acq_period_s = acq.at("period_s").get<double>();
        const json& track = j.at("track_fit");
        p.track_fit = {track.at("intercept_mw").get<double>(),
                       track.at("slope_mw_per_nl").get<double>()};
        const json& eph = j.at("ephemeris");
        p.eph_current_a = eph.at("current_a").get<double>();
        p.eph_time_s = eph.at("time_s").get<double>();
        p.eph_rf_time_s = eph.at("rf_time_s").get<double>();
        p.eph_period_s = eph.at("period_s").get<double>();
        const json& nav = j.at("navigation_fit");
        p.nav_fit = {nav.at("intercept_mw").get<double>(),
                     nav.at("slope_mw_per_nl").get<double>()};
        const json& idle = j.at("idle");
        p.idle_power_mw = idle.at("power_mw").get<double>();
        p.include_idle = idle.at("included").get<bool>();
        p.validate();
        return p;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid profile file: ") + e.what());
    } catch (const ConfigError& e) {
        throw ParseError(std::string("invalid profile file: ") + e.what());
    }
}

EnergyModelParams resolve_profile(const std::string& name_or_path) {
    if (name_or_path == "namuru") {
        return namuru_params();
    }
    return load_profile(name_or_path);
}

std::string policy_to_json(const TrackingPolicy& p) {
    const json j = {{"kind", policy_name(p.kind)},
                    {"gdop_gap_threshold", p.selection.gdop_gap_threshold},
                    {"altitude_aided", p.selection.altitude_aided},
                    {"max_weight_iterations", p.selection.max_weight_iterations},
                    {"initial_step", p.selection.initial_step},
                    {"step_shrink", p.selection.step_shrink},
                    {"random_subset_size", p.random_subset_size},
                    {"reselection_period_s", p.reselection_period_s}};
    return dump(j);
}

TrackingPolicy policy_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        TrackingPolicy p;
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "full") {
            p.kind = PolicyKind::Full;
        } else if (kind == "selective") {
            p.kind = PolicyKind::Selective;
        } else if (kind == "random") {
            p.kind = PolicyKind::Random;
        } else {
            throw ParseError("unknown policy kind: " + kind);
        }
        p.selection.gdop_gap_threshold =
            j.value("gdop_gap_threshold", p.selection.gdop_gap_threshold);
        p.selection.altitude_aided = j.value("altitude_aided", p.selection.altitude_aided);
        p.selection.max_weight_iterations =
            j.value("max_weight_iterations", p.selection.max_weight_iterations);
        p.selection.initial_step = j.value("initial_step", p.selection.initial_step);
        p.selection.step_shrink = j.value("step_shrink", p.selection.step_shrink);
        p.random_subset_size = j.value("random_subset_size", p.random_subset_size);
        p.reselection_period_s = j.value("reselection_period_s", p.reselection_period_s);
        p.validate();
        return p;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid policy file: ") + e.what());
    } catch (const ConfigError& e) {
        throw ParseError(std::string("invalid policy file: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(read_file(path)); }

void save_scenario(const Scenario& scenario, const std::string& path) {
    write_file_atomic(path, scenario_to_json(scenario));
}

EnergyModelParams load_profile(const std::string& path) {
    return profile_from_json(read_file(path));
}

TrackingPolicy load_policy(const std::string& path) {
    return policy_from_json(read_file(path));
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) {
        std::filesystem::create_directories(target.parent_path());
    }
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write file: " + tmp.string());
        }
        out << content;
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace seltrack
