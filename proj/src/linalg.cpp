#include "seltrack/linalg.hpp"

#include <cmath>

namespace seltrack {

std::optional<Mat4> cholesky4(const Mat4& m) {
    Mat4 l{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = m[i][j];
            for (int k = 0; k < j; ++k) {
                sum -= l[i][k] * l[j][k];
            }
            if (i == j) {
                if (!(sum > 0.0) || !std::isfinite(sum)) {
                    return std::nullopt;
                }
                l[i][i] = std::sqrt(sum);
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    return l;
}

namespace {

// Forward/back substitution against a lower-triangular factor.
Vec4 cholesky_solve(const Mat4& l, const Vec4& b) {
    Vec4 y{};
    for (int i = 0; i < 4; ++i) {
        double sum = b[i];
        for (int k = 0; k < i; ++k) {
            sum -= l[i][k] * y[k];
        }
        y[i] = sum / l[i][i];
    }
    Vec4 x{};
    for (int i = 3; i >= 0; --i) {
        double sum = y[i];
        for (int k = i + 1; k < 4; ++k) {
            sum -= l[k][i] * x[k];
        }
        x[i] = sum / l[i][i];
    }
    return x;
}

}  // namespace

std::optional<Mat4> spd_inverse4(const Mat4& m) {
    const auto l = cholesky4(m);
    if (!l) {
        return std::nullopt;
    }
    Mat4 inv{};
    for (int col = 0; col < 4; ++col) {
        Vec4 e{};
        e[col] = 1.0;
        const Vec4 x = cholesky_solve(*l, e);
        for (int row = 0; row < 4; ++row) {
            inv[row][col] = x[row];
        }
    }
    // Symmetrize to remove substitution round-off.
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            const double v = 0.5 * (inv[i][j] + inv[j][i]);
            inv[i][j] = v;
            inv[j][i] = v;
        }
    }
    return inv;
}

std::optional<Vec4> spd_solve4(const Mat4& m, const Vec4& b) {
    const auto l = cholesky4(m);
    if (!l) {
        return std::nullopt;
    }
    return cholesky_solve(*l, b);
}

double trace4(const Mat4& m) { return m[0][0] + m[1][1] + m[2][2] + m[3][3]; }

double frobenius4(const Mat4& m) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            sum += m[i][j] * m[i][j];
        }
    }
    return std::sqrt(sum);
}

}  // namespace seltrack
