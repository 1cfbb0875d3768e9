#include "idemlift/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>

namespace idemlift {

namespace {

template <class Point>
Point make_point(cd lambda) {
    Point p;
    p.lambda = lambda;
    return p;
}

bool is_real(cd lambda) { return lambda.imag() == 0.0; }

Element one_minus(const Element& x) { return sub(identity(x.algebra()), x); }

// 2a - 1
Element two_a_minus_one(const Element& a) { return shift(scale(2.0, a), -1.0); }

template <class Point, class Fn>
void sweep(std::vector<Point>& points, bool parallel, Fn&& fn) {
    std::exception_ptr error;
    const long n = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < n; ++i) {
        try {
            fn(points[i]);
        } catch (...) {
#pragma omp critical(idemlift_sweep_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

std::vector<bool> valid_flags(const auto& points) {
    std::vector<bool> out;
    for (const auto& p : points) out.push_back(p.valid);
    return out;
}

std::vector<cd> lambdas_of(const auto& points) {
    std::vector<cd> out;
    for (const auto& p : points) out.push_back(p.lambda);
    return out;
}

void require_section(const HomFamily& pi, const Section& sec, const Tolerances& tol) {
    const double defect = section_defect(pi, sec, 0.0);
    if (!(defect <= tol.lift))
        fail(ErrorCode::section_invalid, "section misses its target at lambda = 0 by " + std::to_string(defect));
}

void require_no_half(const std::vector<cd>& spec) {
    for (const auto& s : spec)
        if (std::abs(s - 0.5) < 1e-8) fail(ErrorCode::half_in_spectrum, "1/2 lies in sigma(a(0))");
}

void require_star(const HomFamily& pi) {
    if (!pi.domain->has_involution() || !pi.codomain->has_involution() || !pi.star_on_real)
        fail(ErrorCode::not_star_compatible, "self-adjoint lifting needs *-algebras and a *-homomorphism on real lambda");
}

// ---------------------------------------------------------------------------
// Theorem 1: p = a + (2a - 1) x, x = -1/2 +- 1/2 (1 - 4 r0)^{1/2}.

struct CutFrozen {
    HomFamily pi;
    ElementFamily q;
    Section sec;
    ContourData gamma;
    double rho = 0.0;
    int sign = +1;  // the +- of x
    LiftOptions options;
};

void evaluate_cut(const CutFrozen& fz, LiftPoint& pt) {
    const cd lambda = pt.lambda;
    try {
        const Element a = fz.sec.lift(lambda);
        const Element r = sub(a, mul(a, a));
        const Element w4 = sub(identity(a.algebra()), scale(4.0, r));
        const Element r0 = -mul(r, inverse(w4));
        const Element y = sub(identity(a.algebra()), scale(4.0, r0));
        const PolygonalArc& P = fz.gamma.branch.cut;
        for (const auto& s : spectrum(y).points) {
            if (!(distance_to_arc(s, P) > fz.gamma.eps)) {
                pt.reason = "sigma(1 - 4 r0) enters the eps-tube of the cut";
                return;
            }
            if (!(std::abs(s) <= fz.rho + fz.gamma.eps)) {
                pt.reason = "sigma(1 - 4 r0) leaves the disc of radius rho + eps";
                return;
            }
            if (winding_number(fz.gamma, s) != 1 || distance_to_contour(s, fz.gamma) < 0.5 * fz.gamma.eps) {
                pt.reason = "sigma(1 - 4 r0) not enclosed by Gamma";
                return;
            }
        }
        QuadratureResult info{zero(a.algebra())};
        const Element root = sqrt_cut(y, P, fz.gamma, fz.options.branch_sheet, fz.options.quadrature, &info);
        const Element x = shift(scale(0.5 * fz.sign, root), -0.5);
        const Element t = two_a_minus_one(a);
        const Element z = mul(t, x);
        const Element p = add(a, z);

        pt.idem = head_distance(mul(p, p), p);
        pt.lift = head_distance(fz.pi.apply(lambda, p), fz.q(lambda));
        pt.comm = commutator_norm(z, a);
        pt.eq2 = head_norm(sub(add(mul(z, z), mul(t, z)), r));
        pt.eq5 = head_norm(add(add(mul(x, x), x), r0));
        pt.kernel = head_norm(fz.pi.apply(lambda, x));
        pt.tail = tail_bound(p);
        pt.nodes = info.nodes;
        pt.a = a;
        pt.r = r;
        pt.r0 = r0;
        pt.x = x;
        pt.z = z;
        pt.p = p;
        pt.valid = true;
    } catch (const Error& e) {
        pt.valid = false;
        pt.reason = e.what();
    }
}

// ---------------------------------------------------------------------------
// Theorem 2: Riesz idempotent over a conjugation-symmetric Gamma_1.

struct RieszFrozen {
    HomFamily pi;
    ElementFamily q;
    Section sec;
    ContourData gamma0, gamma1, both;
    LiftOptions options;
};

ContourData rectangle(double left, double right, double half_height, double eps, std::vector<cd> singular) {
    ContourData c;
    c.curves.push_back(Curve::from_polygon(
        JordanPolygon{{{right, -half_height}, {right, half_height}, {left, half_height}, {left, -half_height}}, +1}));
    c.eps = eps;
    c.singular_points = std::move(singular);
    return c;
}

void evaluate_riesz(const RieszFrozen& fz, LiftPoint& pt) {
    const cd lambda = pt.lambda;
    try {
        const Element a = fz.sec.lift(lambda);
        for (const auto& s : spectrum(a).points) {
            if (distance_to_contour(s, fz.both) < 0.5 * fz.both.eps || winding_number(fz.both, s) != 1) {
                pt.reason = "sigma(a) not separated by Gamma_0 and Gamma_1";
                return;
            }
        }
        QuadratureResult info{zero(a.algebra())};
        const Element p = riesz_projection(a, fz.gamma1, fz.options.quadrature, &info);
        const Element aux0 =
            integrate_resolvent([](cd z) { return 1.0 / (1.0 - z); }, a, fz.gamma0, fz.options.quadrature).value;
        const Element aux1 = integrate_resolvent([](cd z) { return 1.0 / z; }, a, fz.gamma1, fz.options.quadrature).value;
        const Element a2a = sub(mul(a, a), a);

        pt.idem = head_distance(mul(p, p), p);
        pt.lift = head_distance(fz.pi.apply(lambda, p), fz.q(lambda));
        pt.comm = commutator_norm(p, a);
        pt.identity = head_norm(sub(sub(a, p), mul(a2a, sub(aux1, aux0))));
        pt.sa = is_real(lambda) ? head_distance(p, adjoint(p)) : 0.0;
        pt.tail = tail_bound(p);
        pt.nodes = info.nodes;
        pt.a = a;
        pt.p = p;
        pt.aux0 = aux0;
        pt.aux1 = aux1;
        pt.valid = true;
    } catch (const Error& e) {
        pt.valid = false;
        pt.reason = e.what();
    }
}

template <class Frozen, class Eval>
ElementFamily lifted_family(std::shared_ptr<const Frozen> fz, Eval eval, double radius) {
    return ElementFamily{fz->pi.domain,
                         [fz, eval](cd lambda) {
                             LiftPoint pt;
                             pt.lambda = lambda;
                             eval(*fz, pt);
                             if (!pt.valid)
                                 fail(ErrorCode::enclosure_failed, "lambda outside the validity region: " + pt.reason);
                             return *pt.p;
                         },
                         radius, FamilyTag::none};
}

// ---------------------------------------------------------------------------
// Theorems 3-6: one Kaplansky step.

struct OrthoFrozen {
    HomFamily pi;
    ElementFamily v;
    Section sec;
    double eps0 = 0.0;
    bool self_adjoint = false;
    LiftOptions options;
};

bool in_root_discs(cd t) { return std::abs(t) < 1.0 / 3.0 || std::abs(1.0 - t) < 1.0 / 3.0; }

void evaluate_ortho(const OrthoFrozen& fz, OrthoPoint& pt, const Element& e) {
    const cd lambda = pt.lambda;
    try {
        const Element b = fz.sec.lift(lambda);
        const Element ce = one_minus(e);
        const Element a = mul(mul(ce, b), ce);
        const Element z = sub(mul(a, a), a);
        for (const auto& s : spectrum(z).points)
            if (!(std::abs(s) < fz.eps0)) {
                pt.reason = "sigma(a^2 - a) leaves the disc |z| < eps0";
                return;
            }
        for (const auto& s : spectrum(a).points)
            if (!in_root_discs(s)) {
                pt.reason = "sigma(a) leaves the discs around 0 and 1";
                return;
            }
        const Element t = two_a_minus_one(a);
        const Element tinv = inverse(t);
        const Element zt = mul(z, mul(tinv, tinv));
        const Element y = scale(4.0, zt);
        for (const auto& s : spectrum(y).points)
            if (!(std::abs(s) < 1.0 / 3.0)) {
                pt.reason = "sigma(4 z (2a - 1)^{-2}) leaves the disc |z| < 1/3";
                return;
            }
        const Element w = sqrt_near_one(y, fz.options.quadrature);
        const Element x = mul(ce, w);
        const Element r = mul(x, t);
        const Element f = add(a, r);

        pt.idem = head_distance(mul(f, f), f);
        pt.orth = std::max(head_norm(mul(e, f)), head_norm(mul(f, e)));
        pt.lift = head_distance(fz.pi.apply(lambda, f), fz.v(lambda));
        pt.eq2 = head_norm(add(add(mul(r, r), mul(t, r)), z));
        pt.eq5 = head_norm(add(add(mul(x, x), x), mul(ce, zt)));
        pt.eq17 = head_norm(add(add(mul(w, w), w), zt));
        const Element chain[] = {a, z, w, x, r, f};
        pt.comm = 0.0;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = i + 1; j < 6; ++j) pt.comm = std::max(pt.comm, commutator_norm(chain[i], chain[j]));
        pt.sa = (fz.self_adjoint && is_real(lambda)) ? head_distance(f, adjoint(f)) : 0.0;
        pt.tail = std::max(tail_bound(f), tail_bound(e));
        pt.e = e;
        pt.b = b;
        pt.a = a;
        pt.z = z;
        pt.w = w;
        pt.x = x;
        pt.r = r;
        pt.f = f;
        pt.valid = true;
    } catch (const Error& err) {
        pt.valid = false;
        pt.reason = err.what();
    }
}

std::shared_ptr<OrthoFrozen> freeze_ortho(const HomFamily& pi, const Element& e0, const Element& u0,
                                          const ElementFamily& v, const Section& sec_v, bool self_adjoint,
                                          const LiftOptions& options) {
    const Tolerances& tol = options.tol;
    if (self_adjoint) require_star(pi);
    const Element v0 = v(0.0);
    if (head_distance(mul(e0, e0), e0) > tol.idem) fail(ErrorCode::not_idempotent_input, "e(0) is not idempotent");
    if (head_distance(pi.apply(0.0, e0), u0) > tol.lift) fail(ErrorCode::hypothesis_failed, "pi(0) e(0) != u(0)");
    if (head_distance(mul(v0, v0), v0) > tol.idem) fail(ErrorCode::not_idempotent_input, "v(0) is not idempotent");
    if (std::max(head_norm(mul(u0, v0)), head_norm(mul(v0, u0))) > tol.orth)
        fail(ErrorCode::hypothesis_failed, "u(0) and v(0) are not orthogonal");
    auto fz = std::make_shared<OrthoFrozen>();
    fz->pi = pi;
    fz->v = v;
    fz->sec = self_adjoint ? symmetrize(sec_v) : sec_v;
    fz->self_adjoint = self_adjoint;
    fz->options = options;
    require_section(pi, fz->sec, tol);
    const Element ce = one_minus(e0);
    const Element a0 = mul(mul(ce, fz->sec.lift(0.0)), ce);
    fz->eps0 = choose_eps0(spectrum(sub(mul(a0, a0), a0)).points);
    return fz;
}

}  // namespace

// ---------------------------------------------------------------------------

double commutator_norm(const Element& x, const Element& y) { return head_distance(mul(x, y), mul(y, x)); }

double validity_radius(const std::vector<cd>& lambdas, const std::vector<bool>& valid, cd center) {
    std::vector<std::size_t> order(lambdas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(lambdas[i] - center) < std::abs(lambdas[j] - center);
    });
    double radius = 0.0;  // largest distance whose whole shell, and everything inside it, is valid
    double shell = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double d = std::abs(lambdas[order[k]] - center);
        if (d > shell) radius = shell;
        if (!valid[order[k]]) return d > shell ? shell : radius;
        shell = d;
    }
    return shell;
}

std::optional<ElementFamily> lift_trivial(const ElementFamily& q) {
    const auto spec = spectrum(q(0.0)).points;
    const bool all_zero = std::all_of(spec.begin(), spec.end(), [](cd s) { return std::abs(s) < 1e-6; });
    const bool all_one = std::all_of(spec.begin(), spec.end(), [](cd s) { return std::abs(s - 1.0) < 1e-6; });
    if (all_zero) return constant_family(zero(q.algebra));
    if (all_one) return constant_family(identity(q.algebra));
    return std::nullopt;
}

int choose_sign(double residual_plus, double residual_minus, double tol) {
    const bool plus = residual_plus <= tol && residual_minus >= 1.0 - tol;
    const bool minus = residual_minus <= tol && residual_plus >= 1.0 - tol;
    if (plus == minus)
        fail(ErrorCode::ambiguous_sign, "candidate residuals " + std::to_string(residual_plus) + " and " +
                                            std::to_string(residual_minus) + " do not single out a sign");
    return plus ? +1 : -1;
}

int choose_sign(const Element& plus, const Element& minus, const HomFamily& pi, double tol) {
    return choose_sign(head_norm(pi.apply(0.0, plus)), head_norm(pi.apply(0.0, minus)), tol);
}

LiftTrace lift_local(const HomFamily& pi, const ElementFamily& q, const Section& sec, const Grid& grid,
                     const LiftOptions& options) {
    const Tolerances& tol = options.tol;
    require_section(pi, sec, tol);
    const Element a0 = sec.lift(0.0);
    require_no_half(spectrum(a0).points);

    const Element r = sub(a0, mul(a0, a0));
    const Element r0 = -mul(r, inverse(sub(identity(a0.algebra()), scale(4.0, r))));
    const Element y0 = sub(identity(a0.algebra()), scale(4.0, r0));
    const SpectrumReport sy = spectrum(y0);

    auto fz = std::make_shared<CutFrozen>();
    fz->pi = pi;
    fz->q = q;
    fz->sec = sec;
    fz->options = options;
    fz->gamma = make_cut_contour(sy, options.branch_sheet);
    fz->rho = sy.radius;

    const Element root = sqrt_cut(y0, fz->gamma.branch.cut, fz->gamma, options.branch_sheet, options.quadrature);
    const Element plus = shift(scale(0.5, root), -0.5);
    const Element minus = shift(scale(-0.5, root), -0.5);
    fz->sign = choose_sign(plus, minus, pi, tol.lift);

    LiftTrace trace;
    trace.theorem = 1;
    trace.sheet = fz->sign * options.branch_sheet;
    trace.contour = fz->gamma;
    trace.eps = fz->gamma.eps;
    trace.rho = fz->rho;
    for (const auto& l : grid.points()) trace.points.push_back(make_point<LiftPoint>(l));
    sweep(trace.points, options.parallel, [&](LiftPoint& pt) { evaluate_cut(*fz, pt); });
    trace.validity_radius = validity_radius(lambdas_of(trace.points), valid_flags(trace.points), grid.center);
    trace.family = lifted_family<CutFrozen>(fz, evaluate_cut, sec.lift.radius);
    return trace;
}

LiftTrace lift_local_sa(const HomFamily& pi, const ElementFamily& q, const Section& sec, const Grid& grid,
                        const LiftOptions& options) {
    const Tolerances& tol = options.tol;
    require_star(pi);
    auto fz = std::make_shared<RieszFrozen>();
    fz->pi = pi;
    fz->q = q;
    fz->sec = symmetrize(sec);
    fz->options = options;
    require_section(pi, fz->sec, tol);

    const auto spec = spectrum(fz->sec.lift(0.0)).points;
    require_no_half(spec);
    std::vector<cd> s0, s1;
    for (const auto& s : spec) (s.real() > 0.5 ? s1 : s0).push_back(s);
    if (s0.empty() || s1.empty())
        fail(ErrorCode::hypothesis_failed, "sigma(a(0)) lies on one side of Re z = 1/2; use lift_trivial");

    double max0 = -1e300, min0 = 1e300, min1 = 1e300, max1 = -1e300, im0 = 0.0, im1 = 0.0;
    for (const auto& s : s0) {
        max0 = std::max(max0, s.real());
        min0 = std::min(min0, s.real());
        im0 = std::max(im0, std::abs(s.imag()));
    }
    for (const auto& s : s1) {
        min1 = std::min(min1, s.real());
        max1 = std::max(max1, s.real());
        im1 = std::max(im1, std::abs(s.imag()));
    }
    const double m = 0.25 * (min1 - max0);
    const double c = 0.5 * (min1 + max0);
    if (!(c - m < 1.0 && c + m > 0.0))
        fail(ErrorCode::degenerate_geometry, "the spectral gap does not separate 0 from 1");
    std::vector<cd> sing0 = spec, sing1 = spec;
    sing0.push_back(1.0);
    sing1.push_back(0.0);
    fz->gamma0 = rectangle(std::min(min0, 0.0) - 2.0 * m, c - m, std::max(im0, 0.0) + 2.0 * m, m, sing0);
    fz->gamma1 = rectangle(c + m, std::max(max1, 1.0) + 2.0 * m, std::max(im1, 0.0) + 2.0 * m, m, sing1);
    fz->both.curves = {fz->gamma0.curves[0], fz->gamma1.curves[0]};
    fz->both.eps = m;

    LiftTrace trace;
    trace.theorem = 2;
    trace.pair = {fz->gamma0, fz->gamma1};
    trace.contour = fz->both;
    trace.eps = m;
    for (const auto& l : grid.points()) trace.points.push_back(make_point<LiftPoint>(l));
    sweep(trace.points, options.parallel, [&](LiftPoint& pt) { evaluate_riesz(*fz, pt); });
    trace.validity_radius = validity_radius(lambdas_of(trace.points), valid_flags(trace.points), grid.center);
    trace.family = lifted_family<RieszFrozen>(fz, evaluate_riesz, sec.lift.radius);
    return trace;
}

double choose_eps0(const std::vector<cd>& spectrum_z0) {
    double radius = 0.0;
    for (const auto& s : spectrum_z0) radius = std::max(radius, std::abs(s));
    constexpr int samples = 256;
    for (int k = 0; k <= 52; ++k) {
        const double e0 = std::ldexp(1.0, -k);
        if (!(radius < e0)) break;
        bool ok = true;
        for (int j = 0; j <= samples && ok; ++j) {
            const cd s = j == samples ? cd(0.0) : std::polar(e0, 2.0 * M_PI * j / samples);
            const cd root = std::sqrt(1.0 + 4.0 * s);
            ok = in_root_discs(0.5 * (1.0 - root)) && in_root_discs(0.5 * (1.0 + root)) &&
                 std::abs(4.0 * s / (1.0 + 4.0 * s)) < 1.0 / 3.0;
        }
        if (ok) return e0;
    }
    fail(ErrorCode::enclosure_failed, "no dyadic eps0 satisfies the enclosures");
}

OrthoStepTrace lift_ortho_step(const HomFamily& pi, const ElementFamily& e, const ElementFamily& u,
                               const ElementFamily& v, const Section& sec_v, const Grid& grid, bool self_adjoint,
                               const LiftOptions& options, int step) {
    auto fz = freeze_ortho(pi, e(0.0), u(0.0), v, sec_v, self_adjoint, options);
    OrthoStepTrace trace;
    trace.step = step;
    trace.eps0 = fz->eps0;
    for (const auto& l : grid.points()) trace.points.push_back(make_point<OrthoPoint>(l));
    sweep(trace.points, options.parallel, [&](OrthoPoint& pt) { evaluate_ortho(*fz, pt, e(pt.lambda)); });
    trace.validity_radius = validity_radius(lambdas_of(trace.points), valid_flags(trace.points), grid.center);
    trace.family = ElementFamily{pi.domain,
                                 [fz, e](cd lambda) {
                                     OrthoPoint pt = make_point<OrthoPoint>(lambda);
                                     evaluate_ortho(*fz, pt, e(lambda));
                                     if (!pt.valid)
                                         fail(ErrorCode::enclosure_failed, "lambda outside the validity region: " + pt.reason);
                                     return *pt.f;
                                 },
                                 sec_v.lift.radius, FamilyTag::none};
    return trace;
}

FamilyLift lift_family(const HomFamily& pi, const std::vector<ElementFamily>& qs, const std::vector<Section>& secs,
                       const Grid& grid, bool self_adjoint, const LiftOptions& options) {
    const Tolerances& tol = options.tol;
    if (qs.empty()) fail(ErrorCode::invalid_parameter, "lift_family needs at least one family");
    if (qs.size() != secs.size()) fail(ErrorCode::invalid_parameter, "one section per family is required");
    std::vector<Element> q0;
    for (const auto& q : qs) q0.push_back(q(0.0));
    for (std::size_t i = 0; i < q0.size(); ++i) {
        if (head_distance(mul(q0[i], q0[i]), q0[i]) > tol.idem)
            fail(ErrorCode::not_idempotent_input, "q_" + std::to_string(i + 1) + "(0) is not idempotent");
        for (std::size_t j = i + 1; j < q0.size(); ++j)
            if (std::max(head_norm(mul(q0[i], q0[j])), head_norm(mul(q0[j], q0[i]))) > tol.orth)
                fail(ErrorCode::hypothesis_failed,
                     "q_" + std::to_string(i + 1) + " and q_" + std::to_string(j + 1) + " are not orthogonal");
    }

    // Freeze each step at lambda = 0 using the base values of the earlier lifts.
    std::vector<std::shared_ptr<OrthoFrozen>> frozen;
    Element e0 = zero(pi.domain);
    Element u0 = zero(pi.codomain);
    for (std::size_t k = 0; k < qs.size(); ++k) {
        try {
            frozen.push_back(freeze_ortho(pi, e0, u0, qs[k], secs[k], self_adjoint, options));
        } catch (const Error& err) {
            fail(err.code(), "step " + std::to_string(k + 1) + ": " + err.what());
        }
        OrthoPoint base = make_point<OrthoPoint>(0.0);
        evaluate_ortho(*frozen.back(), base, e0);
        if (!base.valid) fail(ErrorCode::enclosure_failed, "step " + std::to_string(k + 1) + " at lambda = 0: " + base.reason);
        e0 = add(e0, *base.f);
        u0 = add(u0, q0[k]);
    }

    const auto lambdas = grid.points();
    const std::size_t m = qs.size();
    FamilyLift out;
    out.steps.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        out.steps[k].step = static_cast<int>(k + 1);
        out.steps[k].eps0 = frozen[k]->eps0;
        for (const auto& l : lambdas) out.steps[k].points.push_back(make_point<OrthoPoint>(l));
    }

    // Steps are sequential in k; every lambda runs its own chain with the stored earlier lifts.
    std::vector<std::size_t> index(lambdas.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
    sweep(index, options.parallel, [&](std::size_t& i) {
        Element e = zero(pi.domain);
        for (std::size_t k = 0; k < m; ++k) {
            OrthoPoint& pt = out.steps[k].points[i];
            if (k > 0 && !out.steps[k - 1].points[i].valid) {
                pt.reason = "earlier step invalid";
                continue;
            }
            evaluate_ortho(*frozen[k], pt, e);
            if (pt.valid) e = add(e, *pt.f);
        }
    });

    out.validity_radius = std::numeric_limits<double>::infinity();
    for (auto& s : out.steps) {
        s.validity_radius = validity_radius(lambdas_of(s.points), valid_flags(s.points), grid.center);
        out.validity_radius = std::min(out.validity_radius, s.validity_radius);
    }

    auto chain = [frozen, domain = pi.domain](cd lambda, std::size_t upto) {
        Element e = zero(domain);
        Element f = e;
        for (std::size_t k = 0; k <= upto; ++k) {
            OrthoPoint pt = make_point<OrthoPoint>(lambda);
            evaluate_ortho(*frozen[k], pt, e);
            if (!pt.valid)
                fail(ErrorCode::enclosure_failed,
                     "step " + std::to_string(k + 1) + ": lambda outside the validity region: " + pt.reason);
            f = *pt.f;
            e = add(e, f);
        }
        return f;
    };
    for (std::size_t k = 0; k < m; ++k) {
        out.families.push_back(ElementFamily{pi.domain, [chain, k](cd lambda) { return chain(lambda, k); },
                                             secs[k].lift.radius, FamilyTag::none});
        out.steps[k].family = out.families.back();
    }
    return out;
}

}  // namespace idemlift
