#include "seltrack/gdop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seltrack/errors.hpp"
#include "seltrack/linalg.hpp"

namespace seltrack {

namespace {

constexpr double kConditionLimit = 1e12;

Mat4 normal_matrix(const GeometryMatrix& a, const std::vector<double>* weights) {
    Mat4 b{};
    for (int i = 0; i < a.r(); ++i) {
        const auto& row = a.rows[i];
        const double w = weights ? (*weights)[i] : 1.0;
        for (int p = 0; p < 4; ++p) {
            for (int q = p; q < 4; ++q) {
                b[p][q] += w * row[p] * row[q];
            }
        }
    }
    for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < p; ++q) {
            b[p][q] = b[q][p];
        }
    }
    return b;
}

/// Inverse of A^T W A with a Frobenius-based condition estimate gate.
Mat4 inverted_normal_matrix(const GeometryMatrix& a, const std::vector<double>* weights) {
    const Mat4 b = normal_matrix(a, weights);
    const auto inv = spd_inverse4(b);
    if (!inv) {
        throw DegenerateGeometryError("singular normal matrix");
    }
    if (!(frobenius4(b) * frobenius4(*inv) < kConditionLimit)) {
        throw DegenerateGeometryError("ill-conditioned normal matrix");
    }
    return *inv;
}

void check_weights(const GeometryMatrix& a, const WeightVector& w) {
    if (w.size() != a.r()) {
        throw DegenerateInputError("weight count does not match geometry rows");
    }
    for (double v : w.weights) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DegenerateInputError("weights must be finite and non-negative");
        }
    }
}

GeometryMatrix subset_matrix(const GeometryMatrix& a, const std::vector<int>& indices,
                             const std::optional<std::array<double, 4>>& altitude_row) {
    GeometryMatrix m;
    m.rows.reserve(indices.size() + (altitude_row ? 1 : 0));
    for (int i : indices) {
        m.rows.push_back(a.rows[i]);
    }
    if (altitude_row) {
        m.rows.push_back(*altitude_row);
    }
    return m;
}

std::optional<double> try_gdop(const GeometryMatrix& a) {
    try {
        return gdop(a);
    } catch (const DegenerateGeometryError&) {
        return std::nullopt;
    }
}

}  // namespace

WeightVector uniform_weights(int r) {
    return WeightVector{std::vector<double>(static_cast<size_t>(r), 1.0)};
}

double gdop(const GeometryMatrix& a) {
    if (a.r() < 4) {
        throw DegenerateGeometryError("GDOP needs at least four geometry rows");
    }
    const Mat4 inv = inverted_normal_matrix(a, nullptr);
    return std::sqrt(trace4(inv));
}

double weighted_dilution(const GeometryMatrix& a, const WeightVector& w) {
    check_weights(a, w);
    const Mat4 inv = inverted_normal_matrix(a, &w.weights);
    return trace4(inv);
}

namespace {

struct RowSensitivity {
    std::vector<double> gradient;  // -sum_j m_kj^2
    std::vector<double> leverage;  // a_k^T (A^T W A)^-1 a_k
};

RowSensitivity row_sensitivity(const GeometryMatrix& a, const std::vector<double>& weights) {
    const Mat4 inv = inverted_normal_matrix(a, &weights);
    RowSensitivity out;
    out.gradient.resize(static_cast<size_t>(a.r()));
    out.leverage.resize(static_cast<size_t>(a.r()));
    for (int k = 0; k < a.r(); ++k) {
        const auto& row = a.rows[k];
        double sum_sq = 0.0;
        double lev = 0.0;
        for (int j = 0; j < 4; ++j) {
            double m_kj = 0.0;
            for (int p = 0; p < 4; ++p) {
                m_kj += row[p] * inv[p][j];
            }
            sum_sq += m_kj * m_kj;
            lev += m_kj * row[j];
        }
        out.gradient[static_cast<size_t>(k)] = -sum_sq;
        out.leverage[static_cast<size_t>(k)] = lev;
    }
    return out;
}

}  // namespace

std::vector<double> weight_gradient(const GeometryMatrix& a, const WeightVector& w) {
    check_weights(a, w);
    return row_sensitivity(a, w.weights).gradient;
}

WeightVector optimize_weights(const GeometryMatrix& a, const SelectionConfig& config) {
    if (a.r() < 4) {
        throw DegenerateGeometryError("weight optimization needs at least four rows");
    }
    if (config.max_weight_iterations < 1) {
        throw ConfigError("max_weight_iterations must be at least 1");
    }

    const double r = static_cast<double>(a.r());
    WeightVector w = uniform_weights(a.r());
    double objective = weighted_dilution(a, w);  // throws on degenerate geometry

    double step = config.initial_step;
    for (int iter = 0; iter < config.max_weight_iterations; ++iter) {
        // Leverage-preconditioned descent direction. By Sherman-Morrison,
        // zeroing w_k raises the objective by w_k |g_k| / (1 - w_k h_k), so
        // -g_k / (1 - w_k h_k) scales each coordinate by that satellite's
        // actual effect on the objective; the plain gradient misranks rows
        // whose leverages differ. Normalized so max component is 1.
        const RowSensitivity sens = row_sensitivity(a, w.weights);
        std::vector<double> direction(static_cast<size_t>(a.r()));
        double largest = 0.0;
        for (int k = 0; k < a.r(); ++k) {
            const double slack =
                std::max(1e-3, 1.0 - w.weights[k] * sens.leverage[static_cast<size_t>(k)]);
            direction[static_cast<size_t>(k)] =
                -sens.gradient[static_cast<size_t>(k)] / slack;
            largest = std::max(largest, direction[static_cast<size_t>(k)]);
        }
        if (largest <= 0.0) {
            break;
        }
        for (double& d : direction) {
            d /= largest;
        }

        bool accepted = false;
        for (int retry = 0; retry < 40 && !accepted; ++retry) {
            // Step downhill, clamp negatives, renormalize to sum = r.
            WeightVector candidate = w;
            for (int k = 0; k < a.r(); ++k) {
                candidate.weights[k] =
                    std::max(0.0, w.weights[k] + step * direction[static_cast<size_t>(k)]);
            }
            const double total =
                std::accumulate(candidate.weights.begin(), candidate.weights.end(), 0.0);
            if (total <= 0.0) {
                step *= config.step_shrink;
                continue;
            }
            for (double& v : candidate.weights) {
                v *= r / total;
            }

            try {
                const double value = weighted_dilution(a, candidate);
                if (value < objective) {
                    w = std::move(candidate);
                    objective = value;
                    accepted = true;
                } else {
                    step *= config.step_shrink;
                }
            } catch (const DegenerateGeometryError&) {
                step *= config.step_shrink;
            }
        }
        if (!accepted) {
            break;  // no usable step left; current weights already satisfy the descent contract
        }
        step /= config.step_shrink;  // allow the next line search to re-expand
    }
    return w;
}

SelectionResult select_subset(const GeometryMatrix& a, const SelectionConfig& config,
                              const std::optional<std::array<double, 4>>& altitude_row) {
    if (!(config.gdop_gap_threshold > 0.0) || !(config.gdop_gap_threshold < 1.0)) {
        throw ConfigError("gdop_gap_threshold must be in (0, 1)");
    }
    if (config.altitude_aided && !altitude_row) {
        throw ConfigError("altitude-aided selection needs an altitude constraint row");
    }
    const std::optional<std::array<double, 4>> aid_row =
        config.altitude_aided ? altitude_row : std::nullopt;

    const int initial_size = config.altitude_aided ? 3 : 4;
    const int r = a.r();
    if (r < initial_size) {
        throw DegenerateGeometryError("fewer satellites than the minimum subset size");
    }

    std::vector<int> all(static_cast<size_t>(r));
    std::iota(all.begin(), all.end(), 0);
    const double full_gdop = gdop(subset_matrix(a, all, aid_row));

    if (r <= initial_size) {
        return {all, full_gdop, full_gdop, 0.0};
    }

    // Rank satellites by optimized weight, ties broken by lower index.
    const WeightVector w = optimize_weights(a, config);
    std::vector<int> order(all);
    std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        return w.weights[lhs] > w.weights[rhs];
    });

    std::vector<int> selected(order.begin(), order.begin() + initial_size);
    std::vector<int> rest(order.begin() + initial_size, order.end());

    for (;;) {
        const auto subset_gdop = try_gdop(subset_matrix(a, selected, aid_row));
        if (subset_gdop) {
            const double gap = std::fabs(full_gdop - *subset_gdop) / full_gdop;
            if (gap < config.gdop_gap_threshold) {
                std::sort(selected.begin(), selected.end());
                return {selected, full_gdop, *subset_gdop, gap};
            }
        }
        if (rest.empty()) {
            // selected == full set, whose gap is identically 0.
            throw DegenerateGeometryError("subset selection failed to terminate");
        }

        // Grow by the largest-weight candidate that keeps the subset
        // non-degenerate; if none does, take the largest-weight one anyway.
        size_t pick = 0;
        for (size_t i = 0; i < rest.size(); ++i) {
            std::vector<int> trial = selected;
            trial.push_back(rest[i]);
            if (try_gdop(subset_matrix(a, trial, aid_row))) {
                pick = i;
                break;
            }
        }
        selected.push_back(rest[pick]);
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
    }
}

}  // namespace seltrack
