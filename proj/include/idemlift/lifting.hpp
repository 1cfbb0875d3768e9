#pragma once

// Lifting of analytic idempotent families through analytic families of
// surjective homomorphisms. Contour data is frozen at lambda = 0 and reused at
// every grid point; validity of the frozen enclosures is re-checked per point.

#include <optional>
#include <string>
#include <vector>

#include "idemlift/families.hpp"
#include "idemlift/funcalc.hpp"

namespace idemlift {

struct Tolerances {
    double idem = 1e-9;
    double comm = 1e-9;
    double lift = 1e-8;
    double orth = 1e-8;
    double residual = 1e-9;  // defining equations
    double sa = 1e-9;
};

struct LiftOptions {
    Tolerances tol;
    /// Global branch of z^{1/2} on C \ P; the +- sign is re-chosen to compensate.
    int branch_sheet = +1;
    bool parallel = true;
    QuadratureSettings quadrature;
};

/// One grid point of a lift. Elements are kept for valid points only.
struct LiftPoint {
    cd lambda;
    bool valid = false;
    std::string reason;
    std::optional<Element> a, r, r0, x, z, p;
    std::optional<Element> aux0, aux1;  // self-adjoint path
    double idem = 0.0;
    double lift = 0.0;
    double comm = 0.0;
    double eq2 = 0.0;
    double eq5 = 0.0;
    double kernel = 0.0;    // ||pi(lambda) x(lambda)||
    double sa = 0.0;        // ||p - p*|| on real lambda
    double identity = 0.0;  // ||a - p - (a^2 - a)(a1 - a0)||
    double tail = 0.0;      // tail bound carried by p
    int nodes = 0;
};

struct LiftTrace {
    int theorem = 1;
    int sheet = +1;  // chosen +- sign times the branch sheet
    ContourData contour;
    std::vector<ContourData> pair;  // Gamma_0, Gamma_1 of the self-adjoint path
    double eps = 0.0;
    double rho = 0.0;
    std::vector<LiftPoint> points;
    double validity_radius = 0.0;
    /// Lifted family p(lambda); throws enclosure-failed outside the validated region.
    ElementFamily family;
};

struct OrthoPoint {
    cd lambda;
    bool valid = false;
    std::string reason;
    std::optional<Element> e, u, v, b, a, z, w, x, r, f;
    double idem = 0.0;
    double orth = 0.0;  // max(||ef||, ||fe||)
    double lift = 0.0;
    double eq2 = 0.0;   // ||r^2 + (2a - 1) r + z||
    double eq5 = 0.0;   // ||x^2 + x + (1 - e) z (2a - 1)^{-2}||
    double eq17 = 0.0;
    double comm = 0.0;  // max pairwise commutator among a, z, w, x, r, f
    double sa = 0.0;
    double tail = 0.0;
};

struct OrthoStepTrace {
    int step = 1;
    double eps0 = 0.0;
    std::vector<OrthoPoint> points;
    double validity_radius = 0.0;
    ElementFamily family;
};

struct FamilyLift {
    std::vector<ElementFamily> families;
    std::vector<OrthoStepTrace> steps;
    double validity_radius = 0.0;
};

/// Constant 0 or 1 when sigma(q(0)) lies in {0} or {1}.
std::optional<ElementFamily> lift_trivial(const ElementFamily& q);

/// Index of the candidate with ||pi(0) x|| <= tol; the other must be >= 1 - tol.
int choose_sign(double residual_plus, double residual_minus, double tol);
int choose_sign(const Element& plus, const Element& minus, const HomFamily& pi, double tol);

LiftTrace lift_local(const HomFamily& pi, const ElementFamily& q, const Section& sec, const Grid& grid,
                     const LiftOptions& options = {});
LiftTrace lift_local_sa(const HomFamily& pi, const ElementFamily& q, const Section& sec, const Grid& grid,
                        const LiftOptions& options = {});

/// Largest 2^{-k} keeping the frozen enclosures for z(0) = a(0)^2 - a(0).
double choose_eps0(const std::vector<cd>& spectrum_z0);
/// f orthogonal to e with pi f = v, from a = (1 - e) b (1 - e).
OrthoStepTrace lift_ortho_step(const HomFamily& pi, const ElementFamily& e, const ElementFamily& u,
                               const ElementFamily& v, const Section& sec_v, const Grid& grid, bool self_adjoint,
                               const LiftOptions& options = {}, int step = 1);
/// Orthogonal lifts p_1..p_m of pairwise orthogonal q_1..q_m.
FamilyLift lift_family(const HomFamily& pi, const std::vector<ElementFamily>& qs, const std::vector<Section>& secs,
                       const Grid& grid, bool self_adjoint, const LiftOptions& options = {});

/// Largest symmetric radius around `center` on which every grid point is valid.
double validity_radius(const std::vector<cd>& lambdas, const std::vector<bool>& valid, cd center);

double commutator_norm(const Element& x, const Element& y);

}  // namespace idemlift
