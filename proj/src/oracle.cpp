#include "idemlift/oracle.hpp"

#include <Eigen/Eigenvalues>

namespace idemlift {

namespace {

// Swaps the adjacent diagonal entries k, k+1 of the upper triangular T, updating U.
void swap_adjacent(Matrix& T, Matrix& U, Eigen::Index k) {
    const cd t11 = T(k, k), t22 = T(k + 1, k + 1), t12 = T(k, k + 1);
    Eigen::JacobiRotation<cd> rot;
    rot.makeGivens(t12, t22 - t11);
    T.applyOnTheLeft(k, k + 1, rot.adjoint());
    T.applyOnTheRight(k, k + 1, rot);
    U.applyOnTheRight(k, k + 1, rot);
    T(k + 1, k) = 0.0;
}

}  // namespace

Matrix schur_spectral_projector(const Matrix& a, const std::function<bool(cd)>& select) {
    const Eigen::Index n = a.rows();
    Eigen::ComplexSchur<Matrix> schur(a);
    Matrix T = schur.matrixT();
    Matrix U = schur.matrixU();
    // Bubble selected eigenvalues to the leading block.
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!select(T(i, i))) continue;
        for (Eigen::Index j = i; j > k; --j) swap_adjacent(T, U, j - 1);
        ++k;
    }
    const Eigen::Index m = n - k;
    Matrix PT = Matrix::Zero(n, n);
    PT.topLeftCorner(k, k) = Matrix::Identity(k, k);
    if (k > 0 && m > 0) {
        // T11 Y - Y T22 = T12, column by column.
        const Matrix T11 = T.topLeftCorner(k, k);
        const Matrix T12 = T.topRightCorner(k, m);
        const Matrix T22 = T.bottomRightCorner(m, m);
        Matrix Y = Matrix::Zero(k, m);
        for (Eigen::Index j = 0; j < m; ++j) {
            Vector rhs = T12.col(j);
            for (Eigen::Index l = 0; l < j; ++l) rhs += Y.col(l) * T22(l, j);
            Matrix shifted = T11 - T22(j, j) * Matrix::Identity(k, k);
            Y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
        }
        PT.topRightCorner(k, m) = Y;
    }
    return U * PT * U.adjoint();
}

Matrix projector_near_one(const Matrix& a) {
    return schur_spectral_projector(a, [](cd z) { return z.real() > 0.5; });
}

}  // namespace idemlift
