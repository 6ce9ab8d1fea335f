#pragma once

#include <array>
#include <optional>
#include <vector>

#include "seltrack/geo.hpp"

namespace seltrack {

/// Diagonal of the satellite weight matrix W, one non-negative entry per
/// geometry row. Weights produced by optimize_weights are normalized to sum
/// to the row count; weighted_dilution and weight_gradient accept any
/// non-negative weights.
struct WeightVector {
    std::vector<double> weights;

    int size() const { return static_cast<int>(weights.size()); }
};

WeightVector uniform_weights(int r);

struct SelectionConfig {
    double gdop_gap_threshold = 0.05;  // qualified when |G - Gw| / G is below this
    bool altitude_aided = false;       // subsets may start at 3 satellites
    int max_weight_iterations = 3;
    double initial_step = 1.0;   // first gradient step length
    double step_shrink = 0.5;    // step multiplier on a rejected step
};

struct SelectionResult {
    std::vector<int> selected_indices;  // row indices into the input matrix, ascending
    double full_gdop = 0.0;
    double subset_gdop = 0.0;
    double relative_gap = 0.0;
};

/// Geometric dilution of precision, sqrt(trace((A^T A)^-1)).
/// Throws DegenerateGeometryError when A^T A is singular or its condition
/// estimate exceeds 1e12.
double gdop(const GeometryMatrix& a);

/// Weighted objective f(W) = trace((A^T W A)^-1).
double weighted_dilution(const GeometryMatrix& a, const WeightVector& w);

/// Analytic gradient of weighted_dilution: component k is -sum_j m_kj^2 with
/// M = A (A^T W A)^-1. Always component-wise non-positive.
std::vector<double> weight_gradient(const GeometryMatrix& a, const WeightVector& w);

/// Projected gradient descent on f(W) over {w >= 0, sum w = r}, starting from
/// uniform weights. Steps that fail to decrease the objective (or make the
/// normal matrix singular) are rejected and retried with a shrunken step.
WeightVector optimize_weights(const GeometryMatrix& a, const SelectionConfig& config);

/// Greedy weight-ranked subset selection: start from the 3 (altitude aided)
/// or 4 largest-weight satellites and grow by weight rank until the subset
/// GDOP is within the configured gap of the full-set GDOP. When
/// config.altitude_aided is set, `altitude_row` must be supplied and is
/// appended to both the full set and every candidate subset before comparing.
SelectionResult select_subset(const GeometryMatrix& a, const SelectionConfig& config,
                              const std::optional<std::array<double, 4>>& altitude_row =
                                  std::nullopt);

}  // namespace seltrack
