#include "seltrack/nav.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "seltrack/errors.hpp"
#include "seltrack/linalg.hpp"

namespace seltrack {

namespace {

void check_measurements(const PseudorangeSet& measurements, bool aided) {
    const size_t minimum = aided ? 3 : 4;
    if (measurements.entries.size() < minimum) {
        throw InsufficientMeasurementsError("need at least " + std::to_string(minimum) +
                                            " pseudoranges");
    }
    std::set<int> seen;
    for (const auto& entry : measurements.entries) {
        if (!(entry.pseudorange > 0.0) || !std::isfinite(entry.pseudorange)) {
            throw DegenerateInputError("pseudoranges must be positive and finite");
        }
        if (!seen.insert(entry.satellite_index).second) {
            throw DegenerateInputError("duplicate satellite index in measurement set");
        }
    }
}

}  // namespace

double predict_pseudorange(const EcefVector& receiver, double clock_bias,
                           const EcefVector& satellite) {
    const double range = (satellite - receiver).norm();
    if (range == 0.0) {
        throw DegenerateInputError("satellite coincident with receiver");
    }
    return range + clock_bias;
}

NavSolution solve_position(const PseudorangeSet& measurements, const InitialGuess& guess,
                           const std::optional<AltitudeAiding>& aiding,
                           const NavConfig& config) {
    check_measurements(measurements, aiding.has_value());

    auto gauss_newton = [&](EcefVector x, double bias) {
        NavSolution solution;
        Mat4 normal{};
        bool below_tolerance = false;  // converge on two consecutive small updates
        for (int iter = 1; iter <= config.max_iterations; ++iter) {
            normal = Mat4{};
            Vec4 rhs{};
            auto accumulate = [&](const Vec4& row, double residual) {
                for (int p = 0; p < 4; ++p) {
                    for (int q = 0; q < 4; ++q) {
                        normal[p][q] += row[p] * row[q];
                    }
                    rhs[p] += row[p] * residual;
                }
            };

            for (const auto& entry : measurements.entries) {
                const EcefVector d = entry.satellite_position - x;
                const double range = d.norm();
                if (range < 1e-3) {
                    throw DegenerateGeometryError("iterate coincides with a satellite");
                }
                const EcefVector u = d.normalized();
                const double residual = entry.pseudorange - (range + bias);
                accumulate({-u.x, -u.y, -u.z, 1.0}, residual);
            }
            if (aiding && x.norm() > 1e3) {
                const GeodeticPosition g = ecef_to_geodetic(x);
                const EcefVector up = enu_basis(g).up;
                const double s = std::sqrt(aiding->weight);
                accumulate({s * up.x, s * up.y, s * up.z, 0.0},
                           s * (aiding->height - g.height));
            }

            const auto delta = spd_solve4(normal, rhs);
            if (!delta) {
                throw DegenerateGeometryError("singular normal equations");
            }

            x = x + EcefVector{(*delta)[0], (*delta)[1], (*delta)[2]};
            bias += (*delta)[3];
            solution.iterations = iter;

            const double update_norm =
                std::sqrt((*delta)[0] * (*delta)[0] + (*delta)[1] * (*delta)[1] +
                          (*delta)[2] * (*delta)[2] + (*delta)[3] * (*delta)[3]);
            if (!std::isfinite(update_norm)) {
                below_tolerance = false;
                break;
            }
            if (update_norm < config.tolerance) {
                if (below_tolerance) {
                    solution.converged = true;
                    break;
                }
                below_tolerance = true;  // one polishing pass
            } else {
                below_tolerance = false;
            }
        }
        if (below_tolerance) {
            solution.converged = true;  // budget ended right after a small update
        }

        solution.position = x;
        solution.clock_bias = bias;

        double sum_sq = 0.0;
        for (const auto& entry : measurements.entries) {
            const double residual =
                entry.pseudorange - predict_pseudorange(x, bias, entry.satellite_position);
            sum_sq += residual * residual;
        }
        solution.residual_rms =
            std::sqrt(sum_sq / static_cast<double>(measurements.entries.size()));

        // Dilution of precision of the geometry actually solved (including
        // the altitude pseudo-measurement when present).
        const auto covariance = spd_inverse4(normal);
        solution.gdop_at_solution = covariance
                                        ? std::sqrt(trace4(*covariance))
                                        : std::numeric_limits<double>::quiet_NaN();
        return solution;
    };

    if (guess.position.norm() >= 1e6) {
        return gauss_newton(guess.position, guess.clock_bias);
    }

    // Uninformative (geocenter) guess. Start on the Earth shell under the
    // satellite centroid with a range-matched bias; with exactly four
    // satellites the pseudorange system has a second exact root, so a
    // converged solution far from the shell is rejected and re-solved from
    // tilted starts until a near-Earth one is found.
    EcefVector dir_sum{};
    for (const auto& entry : measurements.entries) {
        dir_sum = dir_sum + entry.satellite_position.normalized();
    }
    const EcefVector dir =
        dir_sum.norm() > 0.0 ? dir_sum.normalized() : EcefVector{1.0, 0.0, 0.0};
    const double shell = kWgs84SemiMajorAxisM + (aiding ? aiding->height : 0.0);

    const auto start_from = [&](const EcefVector& d) {
        const EcefVector x0 = shell * d.normalized();
        double bias0 = 0.0;
        for (const auto& entry : measurements.entries) {
            bias0 += (entry.pseudorange - (entry.satellite_position - x0).norm()) /
                     static_cast<double>(measurements.entries.size());
        }
        return gauss_newton(x0, bias0);
    };
    const auto plausible = [](const NavSolution& s) {
        const double radius = s.position.norm();
        return s.converged && radius > kWgs84SemiMajorAxisM - 1e5 &&
               radius < kWgs84SemiMajorAxisM + 2e6;
    };

    NavSolution solution = start_from(dir);
    if (plausible(solution)) {
        return solution;
    }

    // Two perpendicular tilt axes around the centroid direction.
    const EcefVector ref = std::fabs(dir.z) < 0.9 ? EcefVector{0.0, 0.0, 1.0}
                                                  : EcefVector{1.0, 0.0, 0.0};
    const EcefVector u = EcefVector{dir.y * ref.z - dir.z * ref.y,
                                    dir.z * ref.x - dir.x * ref.z,
                                    dir.x * ref.y - dir.y * ref.x}
                             .normalized();
    const EcefVector v = EcefVector{dir.y * u.z - dir.z * u.y, dir.z * u.x - dir.x * u.z,
                                    dir.x * u.y - dir.y * u.x};
    for (double tilt : {0.25, -0.25, 0.5, -0.5}) {
        for (const EcefVector& axis : {u, v}) {
            const NavSolution retry =
                start_from(std::cos(tilt) * dir + std::sin(tilt) * axis);
            if (plausible(retry)) {
                return retry;
            }
        }
    }
    return solution;  // no near-Earth root found; report the first result
}

double solution_error(const NavSolution& solution, const EcefVector& truth) {
    return (solution.position - truth).norm();
}

}  // namespace seltrack
