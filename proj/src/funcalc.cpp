#include "idemlift/funcalc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>

#include <Eigen/Eigenvalues>

namespace idemlift {

namespace {

constexpr cd kTwoPiI{0.0, 2.0 * M_PI};

struct GaussRule {
    std::vector<double> x;  // on [-1, 1]
    std::vector<double> w;
};

// Golub-Welsch: eigenvalues of the Jacobi matrix of the Legendre recurrence.
GaussRule compute_gauss_rule(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussRule rule;
    for (int k = 0; k < n; ++k) {
        rule.x.push_back(es.eigenvalues()(k));
        const double v = es.eigenvectors()(0, k);
        rule.w.push_back(2.0 * v * v);
    }
    // symmetrize so the rule is exact under z -> -z
    for (int k = 0; k < n / 2; ++k) {
        const double x = 0.5 * (rule.x[n - 1 - k] - rule.x[k]);
        const double w = 0.5 * (rule.w[n - 1 - k] + rule.w[k]);
        rule.x[k] = -x;
        rule.x[n - 1 - k] = x;
        rule.w[k] = rule.w[n - 1 - k] = w;
    }
    if (n % 2 == 1) rule.x[n / 2] = 0.0;
    return rule;
}

const GaussRule& gauss_rule(int n) {
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_rule(n)).first;
    return it->second;
}

double distance_to_points(cd a, cd b, const std::vector<cd>& points) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : points) d = std::min(d, distance_to_segment(p, a, b));
    return d;
}

void graded_panels(cd a, cd b, const std::vector<cd>& singular, double grading, int depth, std::vector<std::pair<cd, cd>>& out) {
    const double len = std::abs(b - a);
    if (depth < 40 && !singular.empty() && len > grading * distance_to_points(a, b, singular)) {
        const cd mid = 0.5 * (a + b);
        graded_panels(a, mid, singular, grading, depth + 1, out);
        graded_panels(mid, b, singular, grading, depth + 1, out);
        return;
    }
    out.emplace_back(a, b);
}

Element pairwise_sum(std::vector<std::optional<Element>>& terms, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return *terms[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return add(pairwise_sum(terms, lo, mid), pairwise_sum(terms, mid, hi));
}

Element resolvent_term(const ScalarFunction& g, const Element& a, const QuadratureNode& node) {
    const cd c = node.weight * g(node.z) / kTwoPiI;
    return scale(c, inverse(shift(-a, node.z)));
}

double wrap_positive(double alpha) {
    // (-pi, pi] -> (0, 2 pi]
    return alpha <= 0.0 ? alpha + 2.0 * M_PI : alpha;
}

double cut_angle(cd z, double phi, cd u) { return phi + wrap_positive(std::arg(z * std::conj(u))) - 2.0 * M_PI; }

cd clean_direction(double phi) {
    double c = std::cos(phi), s = std::sin(phi);
    if (std::abs(c) < 1e-15) c = 0.0;
    if (std::abs(s) < 1e-15) s = 0.0;
    return {c, s};
}

double angular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * M_PI);
    return d > M_PI ? 2.0 * M_PI - d : d;
}

struct DirectionScore {
    double angular;
    double euclid;
};

DirectionScore score_direction(double phi, const std::vector<cd>& points) {
    DirectionScore s{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    const cd u = clean_direction(phi);
    for (const auto& p : points) {
        s.angular = std::min(s.angular, angular_distance(std::arg(p), phi));
        s.euclid = std::min(s.euclid, ray_distance(p, u));
    }
    return s;
}

bool better(const DirectionScore& a, const DirectionScore& b) {
    if (a.angular > b.angular + 1e-12) return true;
    if (a.angular < b.angular - 1e-12) return false;
    return a.euclid > b.euclid + 1e-12;
}

}  // namespace

std::vector<QuadratureNode> contour_nodes(const ContourData& contour, int level, const QuadratureSettings& settings) {
    std::vector<QuadratureNode> nodes;
    const GaussRule& rule = gauss_rule(contour.nodes_per_edge);
    for (const auto& curve : contour.curves) {
        if (curve.shape == Curve::Shape::circle) {
            const long count = static_cast<long>(settings.initial_circle_nodes) << level;
            for (long k = 0; k < count; ++k) {
                const cd e = std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(count));
                nodes.push_back({curve.circle.center + curve.circle.radius * e,
                                 cd(0.0, 1.0) * curve.circle.radius * e * (2.0 * M_PI / static_cast<double>(count))});
            }
            continue;
        }
        const auto& v = curve.polygon.vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
            std::vector<std::pair<cd, cd>> panels;
            graded_panels(v[i], v[(i + 1) % v.size()], contour.singular_points, settings.grading, 0, panels);
            const int pieces = 1 << level;
            for (const auto& [a, b] : panels) {
                for (int p = 0; p < pieces; ++p) {
                    const cd lo = a + (b - a) * (static_cast<double>(p) / pieces);
                    const cd hi = a + (b - a) * (static_cast<double>(p + 1) / pieces);
                    const cd half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
                    for (std::size_t k = 0; k < rule.x.size(); ++k) nodes.push_back({mid + rule.x[k] * half, rule.w[k] * half});
                }
            }
        }
    }
    return nodes;
}

Element resolvent_sum(const ScalarFunction& g, const Element& a, const std::vector<QuadratureNode>& nodes) {
    if (nodes.empty()) return zero(a.algebra());
    std::vector<std::optional<Element>> terms(nodes.size());
    std::exception_ptr error;
    const long n = static_cast<long>(nodes.size());
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n; ++k) {
        try {
            terms[k] = resolvent_term(g, a, nodes[k]);
        } catch (...) {
#pragma omp critical(idemlift_quadrature_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return pairwise_sum(terms, 0, terms.size());
}

Element resolvent_sum_serial(const ScalarFunction& g, const Element& a, const std::vector<QuadratureNode>& nodes) {
    Element acc = zero(a.algebra());
    for (const auto& node : nodes) acc = add(acc, resolvent_term(g, a, node));
    return acc;
}

QuadratureResult integrate_resolvent(const ScalarFunction& g, const Element& a, const ContourData& contour,
                                     const QuadratureSettings& settings) {
    auto sum = [&](const std::vector<QuadratureNode>& nodes) {
        return settings.parallel ? resolvent_sum(g, a, nodes) : resolvent_sum_serial(g, a, nodes);
    };
    auto nodes = contour_nodes(contour, 0, settings);
    if (static_cast<int>(nodes.size()) > settings.max_nodes)
        fail(ErrorCode::quadrature_not_converged, "initial discretization exceeds the node cap");
    Element current = sum(nodes);
    for (int level = 1;; ++level) {
        auto finer = contour_nodes(contour, level, settings);
        if (static_cast<int>(finer.size()) > settings.max_nodes)
            fail(ErrorCode::quadrature_not_converged,
                 "no convergence within " + std::to_string(settings.max_nodes) + " nodes");
        Element next = sum(finer);
        const double change = head_distance(next, current);
        if (change < settings.tolerance * std::max(1.0, head_norm(next)))
            return QuadratureResult{std::move(next), static_cast<int>(finer.size()), level, change};
        current = std::move(next);
    }
}

// ---------------------------------------------------------------------------

double arc_spectrum_distance(const PolygonalArc& arc, const std::vector<cd>& points) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : points) d = std::min(d, distance_to_arc(p, arc));
    return d;
}

PolygonalArc build_escape_arc(const SpectrumReport& spec) {
    if (spec.points.empty()) fail(ErrorCode::invalid_parameter, "empty spectrum");
    for (const auto& p : spec.points)
        if (std::abs(p) <= 1e-14 * std::max(1.0, spec.radius)) fail(ErrorCode::spectrum_contains_zero, "0 lies in the spectrum");

    constexpr int directions = 360;
    double best_phi = 0.0;
    DirectionScore best = score_direction(0.0, spec.points);
    for (int k = 1; k < directions; ++k) {
        const double phi = 2.0 * M_PI * k / directions;
        const DirectionScore s = score_direction(phi, spec.points);
        if (better(s, best)) {
            best = s;
            best_phi = phi;
        }
    }
    // Golden-section refinement of the angular margin inside the neighbouring grid cells.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = best_phi - 2.0 * M_PI / directions, hi = best_phi + 2.0 * M_PI / directions;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = score_direction(x1, spec.points).angular, f2 = score_direction(x2, spec.points).angular;
    for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = score_direction(x2, spec.points).angular;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = score_direction(x1, spec.points).angular;
        }
    }
    const double refined = 0.5 * (lo + hi);
    const DirectionScore rs = score_direction(refined, spec.points);
    if (rs.angular > best.angular + 1e-12 && rs.euclid > 0.0) best_phi = refined;

    best_phi = std::fmod(best_phi + 2.0 * M_PI, 2.0 * M_PI);
    PolygonalArc arc{{cd(0.0, 0.0)}, clean_direction(best_phi), true};
    if (!(arc_spectrum_distance(arc, spec.points) > 0.0))
        fail(ErrorCode::degenerate_geometry, "no escape direction avoids the spectrum");
    return arc;
}

JordanPolygon build_gamma_pair(const PolygonalArc& P, double eps, double rho) {
    if (!(eps > 0.0)) fail(ErrorCode::invalid_parameter, "eps must be positive");
    if (!(rho >= 0.0)) fail(ErrorCode::invalid_parameter, "rho must be nonnegative");
    if (eps >= rho) fail(ErrorCode::degenerate_geometry, "eps must be smaller than rho");
    if (!P.is_ray() || P.vertices.front() != cd(0.0))
        fail(ErrorCode::unsupported_strategy, "only straight escape rays from 0 are supported");
    const double R = std::max(1.0 / eps, rho + 2.0 * eps);
    const cd u = P.direction / std::abs(P.direction);
    // Counterclockwise: tube around the positive real axis, then the outer square.
    const std::vector<cd> base = {{R, -eps}, {0.0, -eps}, {-eps, 0.0}, {0.0, eps}, {R, eps},
                                  {R, R},    {-R, R},     {-R, -R},    {R, -R}};
    JordanPolygon gamma;
    for (const auto& v : base) gamma.vertices.push_back(u * v);
    gamma.orientation = +1;
    return gamma;
}

ContourData make_cut_contour(const SpectrumReport& spec, int sheet) {
    ContourData c;
    const PolygonalArc P = build_escape_arc(spec);
    c.eps = arc_spectrum_distance(P, spec.points) / 3.0;
    c.curves.push_back(Curve::from_polygon(build_gamma_pair(P, c.eps, spec.radius)));
    c.branch = BranchDescriptor{BranchKind::cut, P, sheet};
    c.singular_points = spec.points;
    c.singular_points.push_back(0.0);
    return c;
}

ScalarFunction cut_sqrt_function(const PolygonalArc& P, int sheet) {
    const cd u = P.direction / std::abs(P.direction);
    const double phi = std::arg(u);
    const double s = sheet >= 0 ? 1.0 : -1.0;
    return [u, phi, s](cd z) {
        const double theta = cut_angle(z, phi, u);
        return s * std::polar(std::sqrt(std::abs(z)), 0.5 * theta);
    };
}

std::vector<double> track_branch_angles(const std::vector<cd>& points, const PolygonalArc& P) {
    std::vector<double> out;
    if (points.empty()) return out;
    const cd u = P.direction / std::abs(P.direction);
    out.push_back(cut_angle(points.front(), std::arg(u), u));
    for (std::size_t k = 1; k < points.size(); ++k) out.push_back(out.back() + std::arg(points[k] / points[k - 1]));
    return out;
}

void require_enclosed(const std::vector<cd>& points, const ContourData& contour) {
    for (const auto& s : points) {
        if (distance_to_contour(s, contour) < 0.5 * contour.eps || distance_to_contour(s, contour) == 0.0)
            fail(ErrorCode::spectrum_not_enclosed, "spectrum point within eps/2 of the contour");
        if (winding_number(contour, s) != 1) fail(ErrorCode::spectrum_not_enclosed, "spectrum point not enclosed once");
    }
}

Element contour_apply(const ScalarFunction& g, const Element& a, const ContourData& contour,
                      const QuadratureSettings& settings, QuadratureResult* info) {
    require_enclosed(spectrum(a).points, contour);
    QuadratureResult r = integrate_resolvent(g, a, contour, settings);
    if (info) *info = r;
    return r.value;
}

Element riesz_projection(const Element& a, const ContourData& gamma1, const QuadratureSettings& settings,
                         QuadratureResult* info) {
    for (const auto& s : spectrum(a).points) {
        const double d = distance_to_contour(s, gamma1);
        if (d == 0.0 || d < 0.5 * gamma1.eps) fail(ErrorCode::spectrum_on_contour, "spectrum point on or near the contour");
    }
    QuadratureResult r = integrate_resolvent([](cd) { return cd(1.0); }, a, gamma1, settings);
    if (info) *info = r;
    return r.value;
}

Element sqrt_cut(const Element& x, const PolygonalArc& P, const ContourData& gamma, int sheet,
                 const QuadratureSettings& settings, QuadratureResult* info) {
    const auto spec = spectrum(x);
    for (const auto& s : spec.points)
        if (distance_to_arc(s, P) <= gamma.eps) fail(ErrorCode::spectrum_meets_cut, "spectrum meets the eps-tube of the cut");
    require_enclosed(spec.points, gamma);
    QuadratureResult r = integrate_resolvent(cut_sqrt_function(P, sheet), x, gamma, settings);
    if (info) *info = r;
    return r.value;
}

ContourData near_one_contour() {
    ContourData c;
    c.curves.push_back(Curve::from_circle(Circle{0.0, 0.5}));
    c.eps = 1.0 / 6.0;
    c.branch.kind = BranchKind::principal_near_positive;
    c.singular_points = {1.0};
    return c;
}

Element sqrt_near_one(const Element& y, const QuadratureSettings& settings, QuadratureResult* info) {
    for (const auto& s : spectrum(y).points)
        if (!(std::abs(s) < 1.0 / 3.0)) fail(ErrorCode::spectrum_too_large, "spectrum leaves the disc |z| < 1/3");
    if (is_exact_zero(y)) {
        if (info) *info = QuadratureResult{zero(y.algebra()), 0, 0, 0.0};
        return zero(y.algebra());
    }
    QuadratureResult r = integrate_resolvent([](cd z) { return std::sqrt(1.0 - z); }, y, near_one_contour(), settings);
    if (info) *info = r;
    return shift(scale(0.5, r.value), -0.5);
}

}  // namespace idemlift
