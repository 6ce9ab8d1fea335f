#pragma once

#include <optional>
#include <vector>

#include "seltrack/geo.hpp"

namespace seltrack {

struct PseudorangeEntry {
    int satellite_index = 0;
    EcefVector satellite_position;
    double pseudorange = 0.0;  // meters
};

/// One epoch of pseudorange measurements. Satellite indices must be unique,
/// pseudoranges positive and finite.
struct PseudorangeSet {
    std::vector<PseudorangeEntry> entries;
    double epoch_time = 0.0;  // seconds
};

struct NavSolution {
    EcefVector position;
    double clock_bias = 0.0;  // c * dt, meters
    int iterations = 0;
    bool converged = false;
    double residual_rms = 0.0;       // post-fit pseudorange residuals, meters
    double gdop_at_solution = 0.0;   // from the geometry actually used
};

struct InitialGuess {
    EcefVector position;      // defaults to the geocenter
    double clock_bias = 0.0;  // meters
};

/// Prior geodetic height used as one extra pseudo-measurement.
struct AltitudeAiding {
    double height = 0.0;  // meters above the ellipsoid
    double weight = 1.0;  // relative to one pseudorange
};

struct NavConfig {
    double tolerance = 1e-4;  // update-norm convergence threshold, meters
    int max_iterations = 20;
};

/// ||satellite - receiver|| + clock_bias. Throws DegenerateInputError when
/// the points coincide.
double predict_pseudorange(const EcefVector& receiver, double clock_bias,
                           const EcefVector& satellite);

/// Gauss-Newton least-squares solve for receiver position and clock bias.
/// Needs 4 measurements, or 3 with altitude aiding. Non-convergence within
/// max_iterations is reported via converged = false, not an error.
NavSolution solve_position(const PseudorangeSet& measurements, const InitialGuess& guess,
                           const std::optional<AltitudeAiding>& aiding = std::nullopt,
                           const NavConfig& config = {});

/// 3D distance between a solution and the true position, meters.
double solution_error(const NavSolution& solution, const EcefVector& truth);

}  // namespace seltrack
