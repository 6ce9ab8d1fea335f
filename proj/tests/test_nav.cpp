#include <cmath>
#include <random>

#include <doctest.h>

#include "seltrack/errors.hpp"
#include "seltrack/nav.hpp"
#include "oracles.hpp"

using namespace seltrack;

namespace {

PseudorangeSet forward_measurements(const oracles::RandomGeometry& g, double bias,
                                    double extra = 0.0) {
    PseudorangeSet set;
    for (size_t i = 0; i < g.satellites.size(); ++i) {
        set.entries.push_back({static_cast<int>(i), g.satellites[i],
                               predict_pseudorange(g.receiver, bias, g.satellites[i]) + extra});
    }
    return set;
}

}  // namespace

TEST_SUITE("nav") {

TEST_CASE("predict_pseudorange is range plus bias") {
    const EcefVector receiver{1.0e6, 2.0e6, -0.5e6};
    const EcefVector satellite = receiver + EcefVector{20200000.0, 0.0, 0.0};
    CHECK(predict_pseudorange(receiver, 0.0, satellite) == doctest::Approx(20200000.0));
    CHECK(predict_pseudorange(receiver, 300.0, satellite) == doctest::Approx(20200300.0));
    CHECK_THROWS_AS(predict_pseudorange(receiver, 0.0, receiver), DegenerateInputError);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0e7, 3.0e7);
    for (int i = 0; i < 50; ++i) {
        const EcefVector s{u(rng), u(rng), u(rng)};
        const double dx = s.x - receiver.x, dy = s.y - receiver.y, dz = s.z - receiver.z;
        const double expected = std::sqrt(dx * dx + dy * dy + dz * dz) + 123.0;
        CHECK(predict_pseudorange(receiver, 123.0, s) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("noiseless forward measurements are inverted from an Earth-center guess") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int r = 4 + static_cast<int>(seed % 7);
        const auto g = oracles::random_geometry(100 + seed, r);
        const double bias = 1000.0 + static_cast<double>(seed);

        const NavSolution sol = solve_position(forward_measurements(g, bias), InitialGuess{});
        REQUIRE(sol.converged);
        CHECK(solution_error(sol, g.receiver) < 1e-6);
        CHECK(std::fabs(sol.clock_bias - bias) < 1e-6);
        CHECK(sol.residual_rms < 1e-6);
        CHECK(sol.gdop_at_solution > 0.0);
    }
}

TEST_CASE("a constant pseudorange offset moves only the clock bias") {
    const auto g = oracles::random_geometry(321, 6);
    const NavSolution base = solve_position(forward_measurements(g, 500.0), InitialGuess{});
    const NavSolution shifted =
        solve_position(forward_measurements(g, 500.0, 300.0), InitialGuess{});
    REQUIRE(base.converged);
    REQUIRE(shifted.converged);
    CHECK((shifted.position - base.position).norm() < 1e-6);
    CHECK(shifted.clock_bias - base.clock_bias == doctest::Approx(300.0).epsilon(1e-9));
}

TEST_CASE("three satellites without aiding are rejected") {
    const auto g = oracles::random_geometry(77, 3);
    CHECK_THROWS_AS(solve_position(forward_measurements(g, 0.0), InitialGuess{}),
                    InsufficientMeasurementsError);
}

TEST_CASE("measurement sets with duplicates or bad ranges are rejected") {
    const auto g = oracles::random_geometry(88, 5);
    PseudorangeSet set = forward_measurements(g, 0.0);

    PseudorangeSet duplicated = set;
    duplicated.entries[1].satellite_index = duplicated.entries[0].satellite_index;
    CHECK_THROWS_AS(solve_position(duplicated, InitialGuess{}), DegenerateInputError);

    PseudorangeSet negative = set;
    negative.entries[2].pseudorange = -1.0;
    CHECK_THROWS_AS(solve_position(negative, InitialGuess{}), DegenerateInputError);
}

TEST_CASE("altitude-aided three-satellite solve recovers the truth") {
    // The prior height comes from fix history, so an aided solve always has
    // a previous fix available as its initial guess.
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto g = oracles::random_geometry(200 + seed, 3);
        const double truth_height = ecef_to_geodetic(g.receiver).height;
        const InitialGuess previous_fix{g.receiver + EcefVector{120.0, -260.0, 90.0}, 40.0};
        const NavSolution sol = solve_position(forward_measurements(g, 250.0), previous_fix,
                                               AltitudeAiding{truth_height, 1.0});
        REQUIRE(sol.converged);
        CHECK(solution_error(sol, g.receiver) < 1e-5);
        CHECK(std::fabs(sol.clock_bias - 250.0) < 1e-5);
    }
}

TEST_CASE("solution is translation equivariant") {
    const auto g = oracles::random_geometry(31, 6);
    const EcefVector shift{1500.0, -2200.0, 900.0};

    const NavSolution base = solve_position(forward_measurements(g, 100.0),
                                            InitialGuess{g.receiver + EcefVector{10.0, 0.0, 0.0}});

    oracles::RandomGeometry moved = g;
    moved.receiver = g.receiver + shift;
    for (EcefVector& s : moved.satellites) {
        s = s + shift;
    }
    const NavSolution translated =
        solve_position(forward_measurements(moved, 100.0),
                       InitialGuess{moved.receiver + EcefVector{10.0, 0.0, 0.0}});

    CHECK((translated.position - (base.position + shift)).norm() < 1e-9 * 1e3);
    CHECK(translated.clock_bias == doctest::Approx(base.clock_bias).epsilon(1e-9));
}

TEST_CASE("degenerate geometry raises instead of returning garbage") {
    // Four satellites in the same direction: normal matrix is rank deficient.
    const EcefVector receiver = geodetic_to_ecef({deg_to_rad(10.0), deg_to_rad(10.0), 0.0});
    const EcefVector dir = receiver.normalized();
    PseudorangeSet set;
    for (int i = 0; i < 4; ++i) {
        const EcefVector sat = receiver + (2.0e7 + 1.0e6 * i) * dir;
        set.entries.push_back({i, sat, predict_pseudorange(receiver, 0.0, sat)});
    }
    CHECK_THROWS_AS(solve_position(set, InitialGuess{receiver}), DegenerateGeometryError);
}

TEST_CASE("mean solution error over epochs matches a direct average") {
    const auto g = oracles::random_geometry(55, 6);
    std::vector<double> errors;
    double sum = 0.0;
    for (int i = 0; i < 10; ++i) {
        NavSolution sol;
        sol.position = g.receiver + EcefVector{3.0 * i, 4.0 * i, 0.0};
        const double err = solution_error(sol, g.receiver);
        CHECK(err == doctest::Approx(5.0 * i).epsilon(1e-12));
        errors.push_back(err);
        sum += err;
    }
    const double mean = sum / static_cast<double>(errors.size());
    CHECK(mean == doctest::Approx(5.0 * 4.5).epsilon(1e-12));
}

TEST_CASE("solution error is zero at truth and Pythagorean off it") {
    NavSolution sol;
    sol.position = {10.0, 20.0, 30.0};
    CHECK(solution_error(sol, {10.0, 20.0, 30.0}) == 0.0);
    CHECK(solution_error(sol, {7.0, 16.0, 30.0}) == doctest::Approx(5.0));
}

TEST_CASE("Monte Carlo error ordering follows GDOP across geometry classes") {
    // Good: wide elevation/azimuth spread. Medium: moderate cone.
    // Poor: satellites bunched into a narrow cone.
    auto make_class = [](double elev_lo, double elev_hi, double az_span,
                         std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const GeodeticPosition site{deg_to_rad(40.0), deg_to_rad(8.0), 300.0};
        const EcefVector receiver = geodetic_to_ecef(site);
        const EnuBasis basis = enu_basis(site);
        oracles::RandomGeometry g;
        g.receiver = receiver;
        for (int i = 0; i < 6; ++i) {
            const double elev = deg_to_rad(elev_lo + (elev_hi - elev_lo) * u01(rng));
            const double az = az_span * u01(rng);
            const EcefVector dir = std::cos(elev) * std::sin(az) * basis.east +
                                   std::cos(elev) * std::cos(az) * basis.north +
                                   std::sin(elev) * basis.up;
            g.satellites.push_back(receiver + 2.2e7 * dir);
        }
        return g;
    };

    const auto good = make_class(15.0, 80.0, 2.0 * kPi, 9001);
    const auto medium = make_class(35.0, 70.0, kPi, 9002);
    const auto poor = make_class(55.0, 70.0, 0.7, 9003);

    const double sigma = 5.0;
    std::mt19937_64 noise_rng(424242);
    std::normal_distribution<double> noise(0.0, sigma);

    auto rms_error = [&](const oracles::RandomGeometry& g, double& gdop_out) {
        double sum_sq = 0.0;
        gdop_out = 0.0;
        const int trials = 2000;
        for (int t = 0; t < trials; ++t) {
            PseudorangeSet set = forward_measurements(g, 777.0);
            for (auto& entry : set.entries) {
                entry.pseudorange += noise(noise_rng);
            }
            const NavSolution sol = solve_position(set, InitialGuess{g.receiver});
            sum_sq += solution_error(sol, g.receiver) * solution_error(sol, g.receiver);
            gdop_out = sol.gdop_at_solution;
        }
        return std::sqrt(sum_sq / trials);
    };

    double gdop_good = 0.0, gdop_medium = 0.0, gdop_poor = 0.0;
    const double rms_good = rms_error(good, gdop_good);
    const double rms_medium = rms_error(medium, gdop_medium);
    const double rms_poor = rms_error(poor, gdop_poor);

    REQUIRE(gdop_good < gdop_medium);
    REQUIRE(gdop_medium < gdop_poor);
    CHECK(rms_good < rms_medium);
    CHECK(rms_medium < rms_poor);
}

}  // TEST_SUITE
