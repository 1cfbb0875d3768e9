#pragma once

// Reference computations used only by the tests. Nothing here goes through
// contour integration.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "idemlift/algebra.hpp"

namespace oracle {

using idemlift::cd;
using idemlift::Matrix;
using idemlift::Vector;

inline double hausdorff(const std::vector<cd>& a, const std::vector<cd>& b) {
    auto directed = [](const std::vector<cd>& x, const std::vector<cd>& y) {
        double worst = 0.0;
        for (const auto& p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y) best = std::min(best, std::abs(p - q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

inline cd normal(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

inline Matrix random_matrix(int n, std::mt19937_64& rng, double s = 1.0) {
    Matrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = s * normal(rng);
    return m;
}

/// Uniform point in the disc |z - c| < r.
inline cd point_in_disc(cd c, double r, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double rad = r * std::sqrt(u(rng));
    const double ang = 2.0 * M_PI * u(rng);
    return c + std::polar(rad, ang);
}

/// A = V diag(d) V^{-1} with a moderately conditioned V; keeps V for the projector oracle.
struct Diagonalizable {
    Matrix a;
    Matrix v;
    Vector d;
};

inline Diagonalizable diagonalizable(const Vector& d, std::mt19937_64& rng, double spread = 0.3) {
    const int n = static_cast<int>(d.size());
    Matrix v = Matrix::Identity(n, n) + random_matrix(n, rng, spread / std::sqrt(static_cast<double>(n)));
    Matrix a = v * d.asDiagonal() * v.inverse();
    return {a, v, d};
}

/// V diag(mask) V^{-1}.
template <class Select>
Matrix eigenprojector(const Diagonalizable& m, Select select) {
    Vector mask(m.d.size());
    for (Eigen::Index i = 0; i < m.d.size(); ++i) mask(i) = select(m.d(i)) ? 1.0 : 0.0;
    return m.v * mask.asDiagonal() * m.v.inverse();
}

/// V g(D) V^{-1}.
template <class F>
Matrix apply_diagonal(const Diagonalizable& m, F g) {
    Vector gd(m.d.size());
    for (Eigen::Index i = 0; i < m.d.size(); ++i) gd(i) = g(m.d(i));
    return m.v * gd.asDiagonal() * m.v.inverse();
}

/// For a with (a^2 - a)^2 = 0 the idempotent in the algebra generated by a lifting the
/// spectral split is 3a^2 - 2a^3.
inline Matrix square_zero_projector(const Matrix& a) {
    const Matrix a2 = a * a;
    return 3.0 * a2 - 2.0 * a2 * a;
}

inline double opnorm(const Matrix& m) { return idemlift::operator_norm(m); }

}  // namespace oracle
