#pragma once

#include <array>
#include <optional>

namespace seltrack {

// Fixed-size helpers for the 4x4 normal matrices of the navigation problem.
using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
/// Returns nullopt when the matrix is not (numerically) positive definite.
std::optional<Mat4> cholesky4(const Mat4& m);

/// Inverse of a symmetric positive definite matrix via its Cholesky factor.
std::optional<Mat4> spd_inverse4(const Mat4& m);

/// Solves m * x = b for symmetric positive definite m.
std::optional<Vec4> spd_solve4(const Mat4& m, const Vec4& b);

double trace4(const Mat4& m);
double frobenius4(const Mat4& m);

}  // namespace seltrack
