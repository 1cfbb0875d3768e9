#include "idemlift/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace idemlift {

namespace {

double cross(cd a, cd b) noexcept { return a.real() * b.imag() - a.imag() * b.real(); }

int orient(cd a, cd b, cd c) noexcept {
    const double v = cross(b - a, c - a);
    const double scale = std::max({std::abs(b - a), std::abs(c - a), 1e-300});
    if (std::abs(v) <= 1e-15 * scale * scale) return 0;
    return v > 0 ? 1 : -1;
}

bool on_segment(cd a, cd b, cd p) noexcept {
    return std::min(a.real(), b.real()) - 1e-15 <= p.real() && p.real() <= std::max(a.real(), b.real()) + 1e-15 &&
           std::min(a.imag(), b.imag()) - 1e-15 <= p.imag() && p.imag() <= std::max(a.imag(), b.imag()) + 1e-15;
}

bool segments_intersect(cd a, cd b, cd c, cd d) noexcept {
    const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

// Far point standing in for the terminal ray in pairwise segment tests.
cd ray_far_point(const PolygonalArc& arc) {
    double scale = 1.0;
    for (const auto& v : arc.vertices) scale = std::max(scale, std::abs(v));
    return arc.vertices.back() + 1e6 * scale * arc.direction / std::abs(arc.direction);
}

}  // namespace

double distance_to_segment(cd z, cd a, cd b) noexcept {
    const cd d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - a);
    const double t = std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

double segment_distance(cd a, cd b, cd c, cd d) noexcept {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min({distance_to_segment(a, c, d), distance_to_segment(b, c, d), distance_to_segment(c, a, b),
                     distance_to_segment(d, a, b)});
}

double ray_distance(cd z, cd dir) noexcept {
    const cd u = dir / std::abs(dir);
    const double t = (z * std::conj(u)).real();
    return t <= 0.0 ? std::abs(z) : std::abs(z - t * u);
}

double distance_to_arc(cd z, const PolygonalArc& arc) noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < arc.vertices.size(); ++i)
        best = std::min(best, distance_to_segment(z, arc.vertices[i], arc.vertices[i + 1]));
    if (!arc.vertices.empty()) best = std::min(best, ray_distance(z - arc.vertices.back(), arc.direction));
    return best;
}

double distance_to_polygon(cd z, const JordanPolygon& polygon) noexcept {
    double best = std::numeric_limits<double>::infinity();
    const auto& v = polygon.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) best = std::min(best, distance_to_segment(z, v[i], v[(i + 1) % v.size()]));
    return best;
}

double distance_to_curve(cd z, const Curve& curve) noexcept {
    if (curve.shape == Curve::Shape::circle) return std::abs(std::abs(z - curve.circle.center) - curve.circle.radius);
    return distance_to_polygon(z, curve.polygon);
}

int winding_number(const JordanPolygon& polygon, cd z) {
    const auto& v = polygon.vertices;
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const cd a = v[i] - z, b = v[(i + 1) % v.size()] - z;
        if (a == cd(0.0) || b == cd(0.0)) fail(ErrorCode::spectrum_on_contour, "point lies on a polygon vertex");
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

int winding_number(const Curve& curve, cd z) {
    if (curve.shape == Curve::Shape::circle) return std::abs(z - curve.circle.center) < curve.circle.radius ? 1 : 0;
    return winding_number(curve.polygon, z);
}

int winding_number(const ContourData& contour, cd z) {
    int w = 0;
    for (const auto& c : contour.curves) w += winding_number(c, z);
    return w;
}

double distance_to_contour(cd z, const ContourData& contour) noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : contour.curves) best = std::min(best, distance_to_curve(z, c));
    return best;
}

bool polygon_is_simple(const JordanPolygon& polygon) {
    const auto& v = polygon.vertices;
    const std::size_t n = v.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (v[i] == v[(i + 1) % n]) return false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            const cd a = v[i], b = v[(i + 1) % n], c = v[j], d = v[(j + 1) % n];
            if (adjacent) {
                // adjacent edges may only share their common vertex
                const cd shared = (j == i + 1) ? b : a;
                const cd p = (j == i + 1) ? a : b;
                const cd q = (j == i + 1) ? d : c;
                if (orient(shared, p, q) == 0 && ((p - shared) * std::conj(q - shared)).real() > 0) return false;
                continue;
            }
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

bool arc_is_simple(const PolygonalArc& arc) {
    if (arc.vertices.empty() || arc.direction == cd(0.0)) return false;
    std::vector<cd> pts = arc.vertices;
    pts.push_back(ray_far_point(arc));
    const std::size_t segs = pts.size() - 1;
    for (std::size_t i = 0; i < segs; ++i) {
        if (pts[i] == pts[i + 1]) return false;
        for (std::size_t j = i + 2; j < segs; ++j)
            if (segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1])) return false;
    }
    return true;
}

double signed_area(const JordanPolygon& polygon) noexcept {
    const auto& v = polygon.vertices;
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * s;
}

std::vector<cd> audit_vertices(const Curve& curve) {
    if (curve.shape == Curve::Shape::polygon) return curve.polygon.vertices;
    std::vector<cd> out;
    for (int k = 0; k < 64; ++k) out.push_back(curve.circle.center + std::polar(curve.circle.radius, 2.0 * M_PI * k / 64));
    return out;
}

}  // namespace idemlift
