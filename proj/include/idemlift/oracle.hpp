#pragma once

#include <functional>

#include "idemlift/algebra.hpp"

namespace idemlift {

/// Spectral projection of `a` onto the eigenvalues accepted by `select`, from a
/// reordered complex Schur form and a triangular Sylvester solve. Independent of
/// any contour integral; works for defective matrices.
Matrix schur_spectral_projector(const Matrix& a, const std::function<bool(cd)>& select);

/// Projection onto eigenvalues with real part above 1/2.
Matrix projector_near_one(const Matrix& a);

}  // namespace idemlift
