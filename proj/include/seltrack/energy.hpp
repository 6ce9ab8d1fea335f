#pragma once

#include <string>
#include <vector>

namespace seltrack {

enum class Procedure { Rf, Acquisition, Track, Ephemeris, Navigation };

/// Linear fit of an amortized procedure power: mW = intercept + slope * N * L,
/// where N is the tracked-satellite count and L the milliseconds of raw data
/// sampled per second.
struct LinearFitMw {
    double intercept_mw = 0.0;
    double slope_mw = 0.0;
};

/// All voltages, currents, durations and periods of the parametric receiver
/// power model, plus the fitted per-procedure linear terms.
struct EnergyModelParams {
    std::string name;

    // Radio front end
    double rf_voltage_v = 0.0;      // U_r
    double rf_current_a = 0.0;      // I_r
    double rf_sample_time_s = 0.0;  // t_r, raw-signal capture per fix

    // Acquisition (cold search for visible satellites)
    double cpu_voltage_v = 0.0;  // U_s
    double acq_current_a = 0.0;  // I_a
    double acq_time_s = 0.0;     // t_a
    double acq_period_s = 0.0;   // T_a

    LinearFitMw track_fit;

    // Ephemeris extraction
    double eph_current_a = 0.0;  // I_e
    double eph_time_s = 0.0;     // t_e
    double eph_rf_time_s = 0.0;  // t_re, continuous RF sampling before decode
    double eph_period_s = 0.0;   // T_e

    LinearFitMw nav_fit;

    // Idle is orders of magnitude below the active procedures and excluded
    // from totals unless explicitly included.
    double idle_power_mw = 0.0;
    bool include_idle = false;

    /// Throws ConfigError when a voltage/current/duration/period is not
    /// positive or the acquisition period exceeds the ephemeris period.
    void validate() const;
};

/// Measured constants of the Namuru V2 receiver.
EnergyModelParams namuru_params();

/// Receiver operating point: N tracked satellites at f position fixes per
/// second. The raw-data rate is tied to the fix rate: L = 2f ms per second.
struct OperatingPoint {
    int tracked_satellites = 1;   // N >= 1
    double update_rate_hz = 1.0;  // f in [1, 10]

    double raw_data_ms_per_s() const { return 2.0 * update_rate_hz; }
};

struct PowerBreakdown {
    double rf_mw = 0.0;
    double acquisition_mw = 0.0;
    double track_mw = 0.0;
    double ephemeris_mw = 0.0;
    double navigation_mw = 0.0;
    double idle_mw = 0.0;
    double total_mw = 0.0;
};

/// Amortized power of one procedure at an operating point, mW.
/// Throws InvalidOperatingPointError for N < 1 or f outside [1, 10].
double procedure_power(Procedure procedure, const EnergyModelParams& params,
                       const OperatingPoint& op);

/// Amortized power of the whole receiver; components sum to total.
PowerBreakdown total_power(const EnergyModelParams& params, const OperatingPoint& op);

/// Energy charged for one reacquisition event (a full cold search), joules.
double acquisition_event_energy_j(const EnergyModelParams& params);

struct RunEnergy {
    double energy_j = 0.0;
    double mean_power_mw = 0.0;
};

/// Total energy of a run with a possibly varying tracked-satellite count,
/// one entry per epoch of length 1/f, plus one full acquisition charge per
/// reacquisition event.
RunEnergy accumulate_run_energy(const std::vector<int>& per_epoch_tracked,
                                double update_rate_hz, const EnergyModelParams& params,
                                int reacquisition_events);

/// Fractional saving of `selective` relative to `full`. Throws
/// InvalidOperatingPointError when full is not positive.
double energy_saving(double full_mean_mw, double selective_mean_mw);

}  // namespace seltrack
