#pragma once

#include <optional>
#include <vector>

#include "idemlift/algebra.hpp"

namespace idemlift {

/// Simple polygonal arc from vertices.front() through the remaining vertices,
/// continued by a half-line from vertices.back() in `direction`.
struct PolygonalArc {
    std::vector<cd> vertices;
    cd direction{1.0, 0.0};
    bool simple = true;

    bool is_ray() const noexcept { return vertices.size() == 1; }
};

/// Closed polygon; the closing edge back()->front() is implicit.
struct JordanPolygon {
    std::vector<cd> vertices;
    int orientation = +1;
};

struct Circle {
    cd center{0.0, 0.0};
    double radius = 1.0;
};

/// One closed curve of a contour: either a polygon (Gauss-Legendre panels)
/// or a circle (trapezoid rule).
struct Curve {
    enum class Shape { polygon, circle };
    Shape shape = Shape::polygon;
    JordanPolygon polygon;
    Circle circle;

    static Curve from_polygon(JordanPolygon p) { return Curve{Shape::polygon, std::move(p), {}}; }
    static Curve from_circle(Circle c) { return Curve{Shape::circle, {}, c}; }
};

enum class BranchKind {
    none,
    cut,                      // z^{1/2} on C \ P, angle in (phi - 2pi, phi)
    principal_near_positive,  // (1 - zeta)^{1/2}, principal value
};

struct BranchDescriptor {
    BranchKind kind = BranchKind::none;
    PolygonalArc cut;
    int sheet = +1;
};

struct ContourData {
    std::vector<Curve> curves;
    double eps = 0.0;
    BranchDescriptor branch;
    int nodes_per_edge = 16;
    /// Frozen points the integrand is singular at (spectrum at the base point,
    /// branch points); used for panel grading.
    std::vector<cd> singular_points;
};

// Geometry.
double distance_to_segment(cd z, cd a, cd b) noexcept;
double segment_distance(cd a, cd b, cd c, cd d) noexcept;
double distance_to_arc(cd z, const PolygonalArc& arc) noexcept;
double distance_to_polygon(cd z, const JordanPolygon& polygon) noexcept;
double distance_to_curve(cd z, const Curve& curve) noexcept;
/// Winding number of the closed curve around z (z must not lie on it).
int winding_number(const Curve& curve, cd z);
int winding_number(const JordanPolygon& polygon, cd z);
/// Total winding of all curves of a contour around z.
int winding_number(const ContourData& contour, cd z);
double distance_to_contour(cd z, const ContourData& contour) noexcept;
bool polygon_is_simple(const JordanPolygon& polygon);
bool arc_is_simple(const PolygonalArc& arc);
double signed_area(const JordanPolygon& polygon) noexcept;
/// Dense vertex list for audit: polygons as-is, circles as 64-gons.
std::vector<cd> audit_vertices(const Curve& curve);

/// Distance from the half-line {t * dir, t >= 0} to z.
double ray_distance(cd z, cd dir) noexcept;

}  // namespace idemlift
