#pragma once

// Holomorphic functional calculus: (1/2 pi i) \oint g(z) (z - a)^{-1} dz over
// polygons and circles, plus the escape-arc geometry used by the lifting code.

#include <functional>
#include <vector>

#include "idemlift/algebra.hpp"
#include "idemlift/contour.hpp"

namespace idemlift {

using ScalarFunction = std::function<cd(cd)>;

struct QuadratureNode {
    cd z;
    cd weight;  // includes dz
};

struct QuadratureSettings {
    double tolerance = 1e-11;  // on ||I_{l+1} - I_l|| relative to max(1, ||I||)
    int max_nodes = 1 << 14;
    int initial_circle_nodes = 64;
    double grading = 1.5;  // split panels longer than grading * distance to singular set
    bool parallel = true;
};

struct QuadratureResult {
    Element value;
    int nodes = 0;
    int levels = 0;
    double last_change = 0.0;
};

/// Gauss-Legendre nodes on every edge of the curves at refinement `level`.
std::vector<QuadratureNode> contour_nodes(const ContourData& contour, int level, const QuadratureSettings& settings);

/// (1/2 pi i) sum_k w_k g(z_k) (z_k - a)^{-1}, computed in parallel and summed pairwise in node order.
Element resolvent_sum(const ScalarFunction& g, const Element& a, const std::vector<QuadratureNode>& nodes);
/// Serial reference for resolvent_sum, plain left-to-right accumulation.
Element resolvent_sum_serial(const ScalarFunction& g, const Element& a, const std::vector<QuadratureNode>& nodes);

/// Node doubling until convergence; fails with quadrature-not-converged at the node cap.
QuadratureResult integrate_resolvent(const ScalarFunction& g, const Element& a, const ContourData& contour,
                                     const QuadratureSettings& settings = {});

// Escape-arc geometry.
PolygonalArc build_escape_arc(const SpectrumReport& spec);
double arc_spectrum_distance(const PolygonalArc& arc, const std::vector<cd>& points);
/// Gamma from the tube around the ray P and an outer square at half-width max(1/eps, rho + 2 eps).
JordanPolygon build_gamma_pair(const PolygonalArc& P, double eps, double rho);
/// Contour data for sqrt_cut frozen from the spectrum at the base point.
ContourData make_cut_contour(const SpectrumReport& spec, int sheet = +1);

/// z^{1/2} on C \ P with arg z in (phi - 2 pi, phi), times `sheet`.
ScalarFunction cut_sqrt_function(const PolygonalArc& P, int sheet);
/// Angles of z along `points`, unwrapped step by step from the closed form on the first point.
std::vector<double> track_branch_angles(const std::vector<cd>& points, const PolygonalArc& P);

// Functional calculus.
Element contour_apply(const ScalarFunction& g, const Element& a, const ContourData& contour,
                      const QuadratureSettings& settings = {}, QuadratureResult* info = nullptr);
Element riesz_projection(const Element& a, const ContourData& gamma1, const QuadratureSettings& settings = {},
                         QuadratureResult* info = nullptr);
Element sqrt_cut(const Element& x, const PolygonalArc& P, const ContourData& gamma, int sheet,
                 const QuadratureSettings& settings = {}, QuadratureResult* info = nullptr);
/// w = -1/2 + 1/2 (1/2 pi i) \oint_{|zeta| = 1/2} (1 - zeta)^{1/2} (zeta - y)^{-1} dzeta, i.e. w = (-1 + sqrt(1 - y)) / 2.
Element sqrt_near_one(const Element& y, const QuadratureSettings& settings = {}, QuadratureResult* info = nullptr);
ContourData near_one_contour();

/// Checks every point's distance to the contour against eps/2 and winding +1.
void require_enclosed(const std::vector<cd>& points, const ContourData& contour);

}  // namespace idemlift
