#include <cmath>

#include <doctest.h>

#include "seltrack/energy.hpp"
#include "seltrack/errors.hpp"

using namespace seltrack;

namespace {

// Closed-form Namuru total at N, f: 40.87 + 0.64 f + 17.82 N f (mW).
double namuru_closed_form(int n, double f) { return 40.87 + 0.64 * f + 17.82 * n * f; }

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("published per-procedure constants are reproduced") {
    const EnergyModelParams p = namuru_params();

    CHECK(procedure_power(Procedure::Acquisition, p, {8, 1.0}) ==
          doctest::Approx(8.59).epsilon(0.01 / 8.59));
    CHECK(procedure_power(Procedure::Ephemeris, p, {8, 1.0}) ==
          doctest::Approx(18.4).epsilon(0.05 / 18.4));
    for (double f = 1.0; f <= 10.0; f += 1.0) {
        CHECK(procedure_power(Procedure::Rf, p, {4, f}) ==
              doctest::Approx(0.64 * f).epsilon(1e-12));
    }
}

TEST_CASE("amortized total reconstructs the closed-form model") {
    const EnergyModelParams p = namuru_params();
    for (int n = 1; n <= 12; ++n) {
        for (int f = 1; f <= 10; ++f) {
            const PowerBreakdown b = total_power(p, {n, static_cast<double>(f)});
            CHECK(std::fabs(b.total_mw - namuru_closed_form(n, f)) < 0.05);
        }
    }
    CHECK(total_power(p, {8, 1.0}).total_mw == doctest::Approx(184.07).epsilon(0.05 / 184.07));
}

TEST_CASE("constant and slope decompose into the per-procedure terms") {
    const EnergyModelParams p = namuru_params();
    const double constant = procedure_power(Procedure::Acquisition, p, {1, 1.0}) +
                            procedure_power(Procedure::Ephemeris, p, {1, 1.0}) +
                            p.track_fit.intercept_mw + p.nav_fit.intercept_mw;
    CHECK(std::fabs(constant - 40.87) < 0.01);
    CHECK(std::fabs(2.0 * (p.track_fit.slope_mw + p.nav_fit.slope_mw) - 17.82) < 0.01);
}

TEST_CASE("breakdown components sum to the total") {
    const EnergyModelParams p = namuru_params();
    for (int n : {1, 5, 9}) {
        for (double f : {1.0, 2.5, 10.0}) {
            const PowerBreakdown b = total_power(p, {n, f});
            const double sum = b.rf_mw + b.acquisition_mw + b.track_mw + b.ephemeris_mw +
                               b.navigation_mw + b.idle_mw;
            CHECK(std::fabs(sum - b.total_mw) < 1e-9);
            CHECK(b.rf_mw > 0.0);
            CHECK(b.acquisition_mw > 0.0);
            CHECK(b.track_mw > 0.0);
            CHECK(b.ephemeris_mw > 0.0);
            CHECK(b.navigation_mw > 0.0);
        }
    }
}

TEST_CASE("total power is affine in N and f: second differences vanish") {
    const EnergyModelParams p = namuru_params();
    for (int n = 1; n <= 10; ++n) {
        const double a = total_power(p, {n, 2.0}).total_mw;
        const double b = total_power(p, {n + 1, 2.0}).total_mw;
        const double c = total_power(p, {n + 2, 2.0}).total_mw;
        CHECK(std::fabs(c - 2.0 * b + a) < 1e-9);
    }
    for (double f = 1.0; f <= 8.0; f += 1.0) {
        const double a = total_power(p, {6, f}).total_mw;
        const double b = total_power(p, {6, f + 1.0}).total_mw;
        const double c = total_power(p, {6, f + 2.0}).total_mw;
        CHECK(std::fabs(c - 2.0 * b + a) < 1e-9);
    }
}

TEST_CASE("idle power enters the total only when included") {
    EnergyModelParams p = namuru_params();
    p.idle_power_mw = 0.4;
    const double without = total_power(p, {6, 1.0}).total_mw;
    p.include_idle = true;
    const PowerBreakdown with_idle = total_power(p, {6, 1.0});
    CHECK(with_idle.idle_mw == 0.4);
    CHECK(with_idle.total_mw == doctest::Approx(without + 0.4).epsilon(1e-12));
}

TEST_CASE("operating point validation") {
    const EnergyModelParams p = namuru_params();
    CHECK_THROWS_AS(total_power(p, {0, 1.0}), InvalidOperatingPointError);
    CHECK_THROWS_AS(total_power(p, {4, 0.5}), InvalidOperatingPointError);
    CHECK_THROWS_AS(total_power(p, {4, 11.0}), InvalidOperatingPointError);
}

TEST_CASE("run energy accumulates epoch powers plus reacquisition charges") {
    const EnergyModelParams p = namuru_params();

    SUBCASE("constant N=8 at 1 Hz for 100 epochs is 18.407 J") {
        const std::vector<int> epochs(100, 8);
        const RunEnergy e = accumulate_run_energy(epochs, 1.0, p, 0);
        CHECK(std::fabs(e.energy_j - 18.407) < 0.01);
        CHECK(e.mean_power_mw == doctest::Approx(total_power(p, {8, 1.0}).total_mw));
    }

    SUBCASE("constant N at any rate gives mean power equal to total_power") {
        const std::vector<int> epochs(250, 5);
        const RunEnergy e = accumulate_run_energy(epochs, 5.0, p, 0);
        CHECK(e.mean_power_mw ==
              doctest::Approx(total_power(p, {5, 5.0}).total_mw).epsilon(1e-12));
    }

    SUBCASE("alternating N averages the two totals") {
        std::vector<int> epochs;
        for (int i = 0; i < 50; ++i) {
            epochs.push_back(8);
            epochs.push_back(4);
        }
        const RunEnergy e = accumulate_run_energy(epochs, 1.0, p, 0);
        const double expected =
            0.5 * (total_power(p, {8, 1.0}).total_mw + total_power(p, {4, 1.0}).total_mw);
        CHECK(std::fabs(e.mean_power_mw - expected) < 1e-9);
    }

    SUBCASE("each reacquisition event charges one full cold search") {
        const std::vector<int> epochs(60, 6);
        const RunEnergy base = accumulate_run_energy(epochs, 1.0, p, 0);
        const RunEnergy charged = accumulate_run_energy(epochs, 1.0, p, 3);
        CHECK(charged.energy_j - base.energy_j ==
              doctest::Approx(3.0 * acquisition_event_energy_j(p)).epsilon(1e-12));
        CHECK(acquisition_event_energy_j(p) == doctest::Approx(0.51544).epsilon(1e-9));
    }

    SUBCASE("empty epoch list is rejected") {
        CHECK_THROWS_AS(accumulate_run_energy({}, 1.0, p, 0), DegenerateInputError);
    }
}

TEST_CASE("energy saving fractions match the closed-form arithmetic") {
    CHECK(energy_saving(166.25, 166.25) == 0.0);

    // N_full = 7 vs N_sel = 5 at f = 1
    const EnergyModelParams p = namuru_params();
    const double full = total_power(p, {7, 1.0}).total_mw;
    const double sel = total_power(p, {5, 1.0}).total_mw;
    CHECK(full - sel == doctest::Approx(35.64).epsilon(0.05 / 35.64));
    CHECK(energy_saving(full, sel) == doctest::Approx(0.2144).epsilon(0.001 / 0.2144));

    // N_full = 7 vs a selective mean of 4.6 satellites
    const double sel_mean = 40.87 + 0.64 + 17.82 * 4.6;
    CHECK(energy_saving(full, sel_mean) == doctest::Approx(0.257).epsilon(0.002 / 0.257));

    CHECK_THROWS_AS(energy_saving(0.0, 1.0), InvalidOperatingPointError);
    CHECK_THROWS_AS(energy_saving(-5.0, 1.0), InvalidOperatingPointError);
}

TEST_CASE("parameter validation rejects non-positive values and period inversion") {
    EnergyModelParams p = namuru_params();
    p.rf_voltage_v = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);

    p = namuru_params();
    p.acq_period_s = 3600.0;  // exceeds the 1800 s ephemeris period
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

}  // TEST_SUITE
