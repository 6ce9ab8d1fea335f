#include "seltrack/energy.hpp"

#include <cmath>

#include "seltrack/errors.hpp"

namespace seltrack {

namespace {

void check_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ConfigError(std::string("energy model parameter must be positive: ") + name);
    }
}

void check_operating_point(const OperatingPoint& op) {
    if (op.tracked_satellites < 1) {
        throw InvalidOperatingPointError("tracked satellite count must be at least 1");
    }
    if (!(op.update_rate_hz >= 1.0) || !(op.update_rate_hz <= 10.0)) {
        throw InvalidOperatingPointError("update rate must be in [1, 10] Hz");
    }
}

}  // namespace

void EnergyModelParams::validate() const {
    check_positive(rf_voltage_v, "rf_voltage_v");
    check_positive(rf_current_a, "rf_current_a");
    check_positive(rf_sample_time_s, "rf_sample_time_s");
    check_positive(cpu_voltage_v, "cpu_voltage_v");
    check_positive(acq_current_a, "acq_current_a");
    check_positive(acq_time_s, "acq_time_s");
    check_positive(acq_period_s, "acq_period_s");
    check_positive(eph_current_a, "eph_current_a");
    check_positive(eph_time_s, "eph_time_s");
    check_positive(eph_rf_time_s, "eph_rf_time_s");
    check_positive(eph_period_s, "eph_period_s");
    if (acq_period_s > eph_period_s) {
        throw ConfigError("acquisition period must not exceed the ephemeris period");
    }
    if (idle_power_mw < 0.0 || !std::isfinite(idle_power_mw)) {
        throw ConfigError("idle power must be non-negative");
    }
}

EnergyModelParams namuru_params() {
    EnergyModelParams p;
    p.name = "namuru";
    p.rf_voltage_v = 5.0;
    p.rf_current_a = 0.064;
    p.rf_sample_time_s = 0.002;
    p.cpu_voltage_v = 3.3;
    p.acq_current_a = 0.130;
    p.acq_time_s = 1.2;
    p.acq_period_s = 60.0;
    p.track_fit = {11.88, 7.26};
    p.eph_current_a = 0.131;
    p.eph_time_s = 50.0;
    p.eph_rf_time_s = 36.0;
    p.eph_period_s = 1800.0;
    p.nav_fit = {2.0, 1.65};
    p.idle_power_mw = 0.0;
    p.include_idle = false;
    return p;
}

double procedure_power(Procedure procedure, const EnergyModelParams& params,
                       const OperatingPoint& op) {
    params.validate();
    check_operating_point(op);

    const double f = op.update_rate_hz;
    const double nl = static_cast<double>(op.tracked_satellites) * op.raw_data_ms_per_s();

    switch (procedure) {
        case Procedure::Rf:
            return 1000.0 * params.rf_voltage_v * params.rf_current_a *
                   params.rf_sample_time_s * f;
        case Procedure::Acquisition:
            return 1000.0 *
                   (params.cpu_voltage_v * params.acq_current_a * params.acq_time_s +
                    params.rf_voltage_v * params.rf_current_a * params.rf_sample_time_s) /
                   params.acq_period_s;
        case Procedure::Track:
            return params.track_fit.intercept_mw + params.track_fit.slope_mw * nl;
        case Procedure::Ephemeris:
            return 1000.0 *
                   (params.cpu_voltage_v * params.eph_current_a * params.eph_time_s +
                    params.rf_voltage_v * params.rf_current_a * params.eph_rf_time_s) /
                   params.eph_period_s;
        case Procedure::Navigation:
            return params.nav_fit.intercept_mw + params.nav_fit.slope_mw * nl;
    }
    throw InvalidOperatingPointError("unknown procedure");
}

PowerBreakdown total_power(const EnergyModelParams& params, const OperatingPoint& op) {
    PowerBreakdown b;
    b.rf_mw = procedure_power(Procedure::Rf, params, op);
    b.acquisition_mw = procedure_power(Procedure::Acquisition, params, op);
    b.track_mw = procedure_power(Procedure::Track, params, op);
    b.ephemeris_mw = procedure_power(Procedure::Ephemeris, params, op);
    b.navigation_mw = procedure_power(Procedure::Navigation, params, op);
    b.idle_mw = params.include_idle ? params.idle_power_mw : 0.0;
    b.total_mw =
        b.rf_mw + b.acquisition_mw + b.track_mw + b.ephemeris_mw + b.navigation_mw + b.idle_mw;
    return b;
}

double acquisition_event_energy_j(const EnergyModelParams& params) {
    return params.cpu_voltage_v * params.acq_current_a * params.acq_time_s +
           params.rf_voltage_v * params.rf_current_a * params.rf_sample_time_s;
}

RunEnergy accumulate_run_energy(const std::vector<int>& per_epoch_tracked,
                                double update_rate_hz, const EnergyModelParams& params,
                                int reacquisition_events) {
    if (per_epoch_tracked.empty()) {
        throw DegenerateInputError("run energy needs at least one epoch");
    }
    if (reacquisition_events < 0) {
        throw DegenerateInputError("reacquisition event count must be non-negative");
    }

    double energy_j = 0.0;
    for (int n : per_epoch_tracked) {
        const PowerBreakdown b = total_power(params, OperatingPoint{n, update_rate_hz});
        energy_j += b.total_mw / 1000.0 / update_rate_hz;
    }
    energy_j += static_cast<double>(reacquisition_events) * acquisition_event_energy_j(params);

    const double duration_s =
        static_cast<double>(per_epoch_tracked.size()) / update_rate_hz;
    return {energy_j, 1000.0 * energy_j / duration_s};
}

double energy_saving(double full_mean_mw, double selective_mean_mw) {
    if (!(full_mean_mw > 0.0)) {
        throw InvalidOperatingPointError("full-tracking power must be positive");
    }
    return (full_mean_mw - selective_mean_mw) / full_mean_mw;
}

}  // namespace seltrack
