#include "seltrack/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "seltrack/errors.hpp"

namespace seltrack {

namespace {

std::string fmt(double value, int precision) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
    return buffer;
}

std::string join_ids(const std::vector<int>& ids) {
    std::string out;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) {
            out += ';';
        }
        out += std::to_string(ids[i]);
    }
    return out;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string epochs_csv(const RunReport& report) {
    std::ostringstream out;
    out << "time_s,visible_count,tracked_count,tracked_ids,fix,converged,iterations,"
           "error_m,gdop,clock_bias_m,lat_deg,lon_deg,height_m,rf_mw,acquisition_mw,"
           "track_mw,ephemeris_mw,navigation_mw,idle_mw,total_mw\n";
    for (const EpochRecord& e : report.epochs) {
        const bool fix = e.has_fix;
        GeodeticPosition geo;
        if (fix) {
            geo = ecef_to_geodetic(e.solution.position);
        }
        out << fmt(e.time_s, 3) << ',' << e.visible_count << ',' << e.tracked_indices.size()
            << ',' << join_ids(e.tracked_indices) << ',' << (fix ? 1 : 0) << ','
            << (fix && e.solution.converged ? 1 : 0) << ',' << (fix ? e.solution.iterations : 0)
            << ',' << fmt(fix ? e.error_3d_m : kNan, 3) << ','
            << fmt(fix ? e.solution.gdop_at_solution : kNan, 4) << ','
            << fmt(fix ? e.solution.clock_bias : kNan, 3) << ','
            << fmt(fix ? rad_to_deg(geo.latitude) : kNan, 9) << ','
            << fmt(fix ? rad_to_deg(geo.longitude) : kNan, 9) << ','
            << fmt(fix ? geo.height : kNan, 3) << ',' << fmt(e.power.rf_mw, 4) << ','
            << fmt(e.power.acquisition_mw, 4) << ',' << fmt(e.power.track_mw, 4) << ','
            << fmt(e.power.ephemeris_mw, 4) << ',' << fmt(e.power.navigation_mw, 4) << ','
            << fmt(e.power.idle_mw, 4) << ',' << fmt(e.power.total_mw, 4) << '\n';
    }
    return out.str();
}

std::string run_summary_json(const RunReport& report, const std::string& profile_name) {
    double tracked_sum = 0.0;
    double visible_sum = 0.0;
    for (const EpochRecord& e : report.epochs) {
        tracked_sum += static_cast<double>(e.tracked_indices.size());
        visible_sum += e.visible_count;
    }
    const double n = static_cast<double>(report.epochs.size());
    double max_gap = 0.0;
    for (const SelectionEvent& s : report.selections) {
        max_gap = std::max(max_gap, s.relative_gap);
    }

    const nlohmann::json j = {
        {"scenario_id", report.scenario_id},
        {"policy", report.policy_id},
        {"seed", report.seed},
        {"profile", profile_name},
        {"update_rate_hz", report.update_rate_hz},
        {"epochs", report.epochs.size()},
        {"fix_epochs", report.fix_epochs},
        {"no_fix_epochs", report.epochs.size() - static_cast<size_t>(report.fix_epochs)},
        {"mean_error_m", report.mean_error_m},
        {"mean_power_mw", report.mean_power_mw},
        {"total_energy_j", report.total_energy_j},
        {"reacquisition_events", report.reacquisition_events},
        {"mean_tracked", n > 0 ? tracked_sum / n : 0.0},
        {"mean_visible", n > 0 ? visible_sum / n : 0.0},
        {"selection_count", report.selections.size()},
        {"max_selection_gap", max_gap}};
    return j.dump(2) + "\n";
}

std::string trajectory_csv(const RunReport& report) {
    std::ostringstream out;
    out << "time_s,lat_deg,lon_deg,error_m\n";
    for (const EpochRecord& e : report.epochs) {
        if (!e.has_fix) {
            continue;
        }
        const GeodeticPosition geo = ecef_to_geodetic(e.solution.position);
        out << fmt(e.time_s, 3) << ',' << fmt(rad_to_deg(geo.latitude), 9) << ','
            << fmt(rad_to_deg(geo.longitude), 9) << ',' << fmt(e.error_3d_m, 3) << '\n';
    }
    return out.str();
}

CompareSummary build_compare_summary(const std::string& scenario_id,
                                     const std::vector<std::uint64_t>& seeds,
                                     const std::vector<std::string>& policy_labels,
                                     const std::vector<std::vector<RunReport>>& runs) {
    if (policy_labels.size() != runs.size()) {
        throw Error("policy label/run count mismatch");
    }

    CompareSummary summary;
    summary.scenario_id = scenario_id;
    summary.seeds = seeds;

    // Seed-averaged metrics per policy.
    std::vector<PolicyMetrics> metrics;
    for (size_t p = 0; p < runs.size(); ++p) {
        PolicyMetrics m;
        m.policy = policy_labels[p];
        for (const RunReport& r : runs[p]) {
            m.mean_error_m += r.mean_error_m;
            m.mean_power_mw += r.mean_power_mw;
            m.total_energy_j += r.total_energy_j;
        }
        const double n = static_cast<double>(runs[p].size());
        m.mean_error_m /= n;
        m.mean_power_mw /= n;
        m.total_energy_j /= n;
        metrics.push_back(m);
    }

    const PolicyMetrics* full_baseline = nullptr;
    for (const PolicyMetrics& m : metrics) {
        if (m.policy == "full") {
            full_baseline = &m;
            break;
        }
    }
    for (PolicyMetrics& m : metrics) {
        m.saving_vs_full = full_baseline
                               ? energy_saving(full_baseline->mean_power_mw, m.mean_power_mw)
                               : kNan;
    }
    summary.policies = std::move(metrics);
    return summary;
}

std::string compare_summary_json(const CompareSummary& summary) {
    nlohmann::json policies = nlohmann::json::array();
    for (const PolicyMetrics& m : summary.policies) {
        policies.push_back({{"policy", m.policy},
                            {"mean_error_m", m.mean_error_m},
                            {"mean_power_mw", m.mean_power_mw},
                            {"total_energy_j", m.total_energy_j},
                            {"saving_vs_full", m.saving_vs_full}});
    }
    const nlohmann::json j = {{"scenario_id", summary.scenario_id},
                              {"seeds", summary.seeds},
                              {"policies", policies}};
    return j.dump(2) + "\n";
}

std::string compare_metrics_csv(const std::vector<std::string>& policy_labels,
                                const std::vector<std::vector<RunReport>>& runs) {
    std::ostringstream out;
    out << "policy,seed,mean_error_m,mean_power_mw,total_energy_j,reacquisition_events\n";
    for (size_t p = 0; p < runs.size(); ++p) {
        for (const RunReport& r : runs[p]) {
            out << policy_labels[p] << ',' << r.seed << ',' << fmt(r.mean_error_m, 3) << ','
                << fmt(r.mean_power_mw, 4) << ',' << fmt(r.total_energy_j, 4) << ','
                << r.reacquisition_events << '\n';
        }
    }
    return out.str();
}

}  // namespace seltrack
