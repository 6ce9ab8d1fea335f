#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <doctest.h>

#include "seltrack/errors.hpp"
#include "seltrack/gdop.hpp"
#include "oracles.hpp"

using namespace seltrack;

namespace {

// Zenith satellite plus three on the horizon at azimuths 0/120/240 degrees,
// written directly as direction rows. A^T A is block diagonal:
// diag(1.5, 1.5) and [[1,1],[1,4]], so trace((A^T A)^-1) = 2/3 + 2/3 + 5/3 = 3.
GeometryMatrix zenith_and_horizon() {
    const double s = std::sqrt(3.0) / 2.0;
    GeometryMatrix a;
    a.rows = {{0.0, 0.0, 1.0, 1.0},
              {0.0, 1.0, 0.0, 1.0},
              {s, -0.5, 0.0, 1.0},
              {-s, -0.5, 0.0, 1.0}};
    return a;
}

GeometryMatrix random_matrix(std::uint64_t seed, int r) {
    const auto g = oracles::random_geometry(seed, r);
    return geometry_matrix(g.receiver, g.satellites);
}

std::vector<double> random_weights(std::uint64_t seed, int r) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    std::vector<double> w(static_cast<size_t>(r));
    for (double& v : w) {
        v = u(rng);
    }
    return w;
}

GeometryMatrix rotate_directions(const GeometryMatrix& a, double angle_z, double angle_x) {
    const double cz = std::cos(angle_z), sz = std::sin(angle_z);
    const double cx = std::cos(angle_x), sx = std::sin(angle_x);
    GeometryMatrix out = a;
    for (auto& row : out.rows) {
        const double x1 = cz * row[0] - sz * row[1];
        const double y1 = sz * row[0] + cz * row[1];
        const double z1 = row[2];
        row[0] = x1;
        row[1] = cx * y1 - sx * z1;
        row[2] = sx * y1 + cx * z1;
    }
    return out;
}

}  // namespace

TEST_SUITE("gdop") {

TEST_CASE("gdop of the zenith-plus-horizon constellation is sqrt(3)") {
    const GeometryMatrix a = zenith_and_horizon();
    CHECK(gdop(a) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    // against the independent Gauss-Jordan oracle as well
    CHECK(gdop(a) == doctest::Approx(oracles::gdop_oracle(a)).epsilon(1e-12));
}

TEST_CASE("gdop rejects rank-deficient and undersized geometries") {
    GeometryMatrix same;
    same.rows.assign(4, {0.6, 0.0, 0.8, 1.0});
    CHECK_THROWS_AS(gdop(same), DegenerateGeometryError);

    GeometryMatrix three = zenith_and_horizon();
    three.rows.pop_back();
    CHECK_THROWS_AS(gdop(three), DegenerateGeometryError);
}

TEST_CASE("gdop is invariant under rotation of the direction part") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const GeometryMatrix a = random_matrix(seed, 6);
        const double reference = gdop(a);
        const GeometryMatrix rotated = rotate_directions(a, 0.8, -1.3);
        CHECK(gdop(rotated) == doctest::Approx(reference).epsilon(1e-9));
    }
}

TEST_CASE("weighted_dilution reduces to gdop^2 at identity weights and is 1/c homogeneous") {
    const GeometryMatrix a = random_matrix(21, 7);
    const WeightVector ones = uniform_weights(a.r());
    const double g = gdop(a);
    CHECK(weighted_dilution(a, ones) == doctest::Approx(g * g).epsilon(1e-9));

    WeightVector scaled = ones;
    for (double& w : scaled.weights) {
        w *= 3.5;
    }
    CHECK(weighted_dilution(a, scaled) ==
          doctest::Approx(weighted_dilution(a, ones) / 3.5).epsilon(1e-9));
}

TEST_CASE("trace identity: trace((A^T W A)^-1) equals sum w_ii m_ij^2") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int r = 4 + static_cast<int>(seed % 7);
        const GeometryMatrix a = random_matrix(1000 + seed, r);
        const WeightVector w{random_weights(2000 + seed, r)};
        const double via_trace = weighted_dilution(a, w);
        const double via_m = oracles::weighted_trace_via_m(a, w.weights);
        CHECK(std::fabs(via_trace - via_m) / via_m < 1e-9);
    }
}

TEST_CASE("weight_gradient components are non-positive and equal under symmetry") {
    // Regular tetrahedron of directions: all rows equivalent, so all
    // gradient components must match.
    const double s = 1.0 / std::sqrt(3.0);
    GeometryMatrix tetra;
    tetra.rows = {{s, s, s, 1.0}, {s, -s, -s, 1.0}, {-s, s, -s, 1.0}, {-s, -s, s, 1.0}};
    const auto grad = weight_gradient(tetra, uniform_weights(4));
    for (double g : grad) {
        CHECK(g <= 0.0);
        CHECK(g == doctest::Approx(grad[0]).epsilon(1e-9));
    }

    const GeometryMatrix a = random_matrix(31, 6);
    for (double g : weight_gradient(a, uniform_weights(6))) {
        CHECK(g <= 0.0);
    }
}

TEST_CASE("weight_gradient matches central finite differences of the objective") {
    const double step = 1e-6;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int r = 4 + static_cast<int>(seed % 7);
        // Near-degenerate draws are resampled: the finite difference itself
        // loses validity when the normal matrix is close to singular.
        GeometryMatrix a = random_matrix(3000 + seed, r);
        WeightVector w{random_weights(4000 + seed, r)};
        for (std::uint64_t attempt = 1; weighted_dilution(a, w) > 100.0; ++attempt) {
            a = random_matrix(3000 + seed + 100000 * attempt, r);
            w = WeightVector{random_weights(4000 + seed + 100000 * attempt, r)};
        }
        const auto grad = weight_gradient(a, w);
        for (int k = 0; k < r; ++k) {
            WeightVector hi = w, lo = w;
            hi.weights[k] += step;
            lo.weights[k] -= step;
            const double fd =
                (weighted_dilution(a, hi) - weighted_dilution(a, lo)) / (2.0 * step);
            CHECK(std::fabs(grad[k] - fd) / std::max(std::fabs(fd), 1e-12) < 1e-5);
        }
    }
}

TEST_CASE("optimize_weights keeps uniform weights on a symmetric constellation") {
    const double s = 1.0 / std::sqrt(3.0);
    GeometryMatrix tetra;
    tetra.rows = {{s, s, s, 1.0}, {s, -s, -s, 1.0}, {-s, s, -s, 1.0}, {-s, -s, s, 1.0}};
    const WeightVector w = optimize_weights(tetra, {});
    for (double v : w.weights) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("optimize_weights normalizes to sum r and never worsens the objective") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int r = 4 + static_cast<int>(seed % 6);
        const GeometryMatrix a = random_matrix(5000 + seed, r);
        const WeightVector w = optimize_weights(a, {});
        const double sum = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
        CHECK(sum == doctest::Approx(static_cast<double>(r)).epsilon(1e-9));
        for (double v : w.weights) {
            CHECK(v >= 0.0);
        }
        CHECK(weighted_dilution(a, w) <=
              weighted_dilution(a, uniform_weights(r)) + 1e-12);
    }
}

TEST_CASE("top weight matches the leave-one-out GDOP ranking on most geometries") {
    int top1_matches = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const GeometryMatrix a = random_matrix(7000 + seed, 7);
        const WeightVector w = optimize_weights(a, {});

        // Oracle: how much GDOP degrades when a satellite is removed.
        std::vector<double> degradation(7, 0.0);
        const double full = oracles::gdop_oracle(a);
        for (int k = 0; k < 7; ++k) {
            std::vector<int> keep;
            for (int i = 0; i < 7; ++i) {
                if (i != k) {
                    keep.push_back(i);
                }
            }
            degradation[static_cast<size_t>(k)] =
                oracles::gdop_oracle(oracles::subset_rows(a, keep)) - full;
        }

        const auto argmax = [](const std::vector<double>& v) {
            return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
        };
        if (argmax(w.weights) == argmax(degradation)) {
            ++top1_matches;
        }
    }
    // Record the agreement rate, require at least 90%.
    MESSAGE("leave-one-out top-1 agreement: ", top1_matches, "/100");
    CHECK(top1_matches >= 90);
}

TEST_CASE("select_subset returns the whole set when it already has minimum size") {
    const GeometryMatrix a = random_matrix(91, 4);
    const SelectionResult res = select_subset(a, {});
    CHECK(res.selected_indices == std::vector<int>{0, 1, 2, 3});
    CHECK(res.relative_gap == 0.0);
    CHECK(res.full_gdop == doctest::Approx(res.subset_gdop));
}

TEST_CASE("select_subset output always satisfies the gap threshold") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int r = 5 + static_cast<int>(seed % 5);
        const GeometryMatrix a = random_matrix(8000 + seed, r);
        const SelectionResult res = select_subset(a, {});
        CHECK(res.relative_gap < 0.05);
        CHECK(static_cast<int>(res.selected_indices.size()) >= 4);
        CHECK(std::is_sorted(res.selected_indices.begin(), res.selected_indices.end()));
        // subset GDOP recomputed from the reported indices agrees
        const GeometryMatrix sub = oracles::subset_rows(a, res.selected_indices);
        CHECK(gdop(sub) == doctest::Approx(res.subset_gdop).epsilon(1e-12));
    }
}

TEST_CASE("duplicated directions: greedy matches the enumeration oracle") {
    // Eight satellites whose directions duplicate a four-satellite set
    // pairwise. Duplicates average measurement noise, which lowers the
    // full-set GDOP by sqrt(2); the enumeration oracle reports what subset
    // sizes can actually qualify under the 5% gap.
    const GeometryMatrix base = random_matrix(4711, 4);
    GeometryMatrix dup;
    dup.rows = base.rows;
    dup.rows.insert(dup.rows.end(), base.rows.begin(), base.rows.end());

    const double full = oracles::gdop_oracle(dup);
    CHECK(full == doctest::Approx(oracles::gdop_oracle(base) / std::sqrt(2.0)).epsilon(1e-12));

    const int oracle_min = oracles::min_qualified_subset_size(dup, 0.05);
    const SelectionResult res = select_subset(dup, {});
    CHECK(res.relative_gap < 0.05);
    CHECK(static_cast<int>(res.selected_indices.size()) <= oracle_min + 1);
}

TEST_CASE("gdop monotonicity: removing rows never improves GDOP") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const GeometryMatrix a = random_matrix(9000 + seed, 8);
        const double full = gdop(a);
        for (const auto& subset : oracles::all_subsets(8, 4)) {
            try {
                CHECK(gdop(oracles::subset_rows(a, subset)) >= full - 1e-12);
            } catch (const DegenerateGeometryError&) {
            }
        }
    }
}

TEST_CASE("weights and selection are permutation equivariant") {
    const GeometryMatrix a = random_matrix(555, 7);
    const std::vector<int> perm{3, 0, 6, 1, 5, 2, 4};
    GeometryMatrix permuted;
    for (int i : perm) {
        permuted.rows.push_back(a.rows[static_cast<size_t>(i)]);
    }

    const WeightVector w = optimize_weights(a, {});
    const WeightVector wp = optimize_weights(permuted, {});
    for (size_t new_row = 0; new_row < perm.size(); ++new_row) {
        CHECK(wp.weights[new_row] ==
              doctest::Approx(w.weights[static_cast<size_t>(perm[new_row])]).epsilon(1e-12));
    }

    const SelectionResult res = select_subset(a, {});
    const SelectionResult resp = select_subset(permuted, {});
    std::vector<int> mapped;
    for (int new_row : resp.selected_indices) {
        mapped.push_back(perm[static_cast<size_t>(new_row)]);
    }
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == res.selected_indices);
    CHECK(resp.relative_gap == doctest::Approx(res.relative_gap).epsilon(1e-12));
}

TEST_CASE("altitude-aided selection starts at three satellites") {
    const auto g = oracles::random_geometry(606, 7);
    const GeometryMatrix a = geometry_matrix(g.receiver, g.satellites);
    SelectionConfig config;
    config.altitude_aided = true;

    CHECK_THROWS_AS(select_subset(a, config), ConfigError);  // row required

    const auto row = altitude_constraint_row(g.receiver);
    const SelectionResult res = select_subset(a, config, row);
    CHECK(static_cast<int>(res.selected_indices.size()) >= 3);
    CHECK(res.relative_gap < 0.05);

    // The reported GDOPs include the altitude row on both sides.
    GeometryMatrix full = a;
    full.rows.push_back(row);
    CHECK(res.full_gdop == doctest::Approx(gdop(full)).epsilon(1e-12));
}

}  // TEST_SUITE
