#include "idemlift/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace idemlift {

std::string_view to_string(ExpectedOutcome outcome) noexcept {
    switch (outcome) {
        case ExpectedOutcome::lift_succeeds: return "lift-succeeds";
        case ExpectedOutcome::hypothesis_violated_probe: return "hypothesis-violated-probe";
    }
    return "lift-succeeds";
}

std::string_view to_string(LiftMode mode) noexcept {
    switch (mode) {
        case LiftMode::local: return "local";
        case LiftMode::local_sa: return "local-sa";
        case LiftMode::family: return "family";
        case LiftMode::family_sa: return "family-sa";
        case LiftMode::trivial: return "trivial";
        case LiftMode::probe: return "probe";
    }
    return "local";
}

namespace {

Matrix random_matrix(int n, std::mt19937_64& rng, double scale) {
    return random_element(make_matrix_algebra(n), rng, scale).as<MatrixData>().value;
}

Matrix random_skew(int n, std::mt19937_64& rng, double scale) {
    const Matrix k = random_matrix(n, rng, scale);
    return 0.5 * (k - k.adjoint());
}

Matrix unit_matrix(int n, int i, int j) {
    Matrix e = Matrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

/// V diag(1..1, 0..0) V^{-1}, rank r, with V = I + small random part.
Matrix oblique_projection(int n, int r, std::mt19937_64& rng) {
    const Matrix v = Matrix::Identity(n, n) + random_matrix(n, rng, 0.3 / std::sqrt(static_cast<double>(n)));
    Vector d = Vector::Zero(n);
    for (int i = 0; i < r; ++i) d(i) = 1.0;
    return v * d.asDiagonal() * invert_matrix(v);
}

std::string format_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void finish(Scenario& s, const ScenarioParams& params) {
    s.grid = params.grid;
    s.seed = params.seed;
    if (params.tol) s.tol = *params.tol;
    s.parameters["seed"] = std::to_string(params.seed);
    if (params.section_offset != 0.0) {
        // pi(1) = 1, so the offset moves the section off its target by |offset| ||1||
        for (auto& sec : s.sections) {
            const double off = params.section_offset;
            ElementFamily lift = sec.lift;
            lift.eval = [inner = sec.lift, off](cd lambda) { return shift(inner(lambda), off); };
            sec.lift = lift;
        }
        s.parameters["section_offset"] = format_double(params.section_offset);
    }
}

void check_idempotent(const Matrix& p, const std::string& what) {
    if ((p * p - p).norm() > 1e-12 * std::max(1.0, p.norm()))
        fail(ErrorCode::invalid_generator, what + " is not idempotent");
}

/// lambda -> e^{lambda K} P e^{-lambda K}.
ElementFamily conjugation(const AlgebraPtr& alg, const Matrix& P, const Matrix& K) {
    return exp_conjugation_family(matrix_element(alg, P), matrix_element(alg, -K));
}

/// Linear kernel family lambda -> k0 + lambda k1 for a homomorphism with constant kernel.
ElementFamily linear_family(const Element& k0, const Element& k1) { return polynomial_family({k0, k1}); }

}  // namespace

Scenario build_dual_testbed(int n, const Matrix& K, const Matrix& P0, bool self_adjoint, const ScenarioParams& params) {
    const double pert = params.perturbation.value_or(0.2);
    if (n < 1 || K.rows() != n || K.cols() != n || P0.rows() != n || P0.cols() != n)
        fail(ErrorCode::invalid_generator, "generator and projection must be " + std::to_string(n) + "x" + std::to_string(n));
    check_idempotent(P0, "P0");
    if (self_adjoint) {
        if ((K + K.adjoint()).norm() > 1e-12) fail(ErrorCode::invalid_generator, "K is not skew-adjoint");
        if ((P0 - P0.adjoint()).norm() > 1e-12) fail(ErrorCode::invalid_generator, "P0 is not self-adjoint");
    }
    std::mt19937_64 rng(params.seed);
    Scenario s;
    s.id = self_adjoint ? "dual-testbed-sa" : "dual-testbed";
    s.summary = "M_n[eps] -> M_n with q(lambda) = exp(lambda K) P0 exp(-lambda K)";
    s.A = make_dual_algebra(n);
    s.B = make_matrix_algebra(n);
    s.pi = dual_hom(s.A, s.B);
    s.qs.push_back(conjugation(s.B, P0, K));
    const double sc = pert / std::sqrt(static_cast<double>(n));
    const Matrix zero_n = Matrix::Zero(n, n);
    const Matrix n0 = random_matrix(n, rng, sc);
    const Matrix n1 = random_matrix(n, rng, sc);
    auto kernel = linear_family(dual_element(s.A, zero_n, n0), dual_element(s.A, zero_n, n1));
    s.sections.push_back(make_section(s.pi, s.qs[0], SectionStrategy::component_embed, kernel));
    s.mode = self_adjoint ? LiftMode::local_sa : LiftMode::local;
    s.parameters["n"] = std::to_string(n);
    s.parameters["perturbation"] = format_double(pert);
    finish(s, params);
    return s;
}

Scenario build_block_testbed(int k, int m, const ScenarioParams& params) {
    const double pert = params.perturbation.value_or(0.2);
    if (k < 1 || m < 1) fail(ErrorCode::invalid_parameter, "block sizes must be positive");
    std::mt19937_64 rng(params.seed);
    Scenario s;
    s.id = "block-testbed";
    s.summary = "block upper-triangular -> M_k x M_m, twisted by exp(lambda N)";
    s.A = make_block_algebra(k, m);
    s.B = make_product({make_matrix_algebra(k), make_matrix_algebra(m)});
    const Matrix nk = random_matrix(k, rng, params.twist / std::sqrt(static_cast<double>(k)));
    const Matrix nm = random_matrix(m, rng, params.twist / std::sqrt(static_cast<double>(m)));
    s.pi = block_hom(s.A, s.B, nk, nm);
    const Matrix pk = oblique_projection(k, (k + 1) / 2, rng);
    const Matrix pm = oblique_projection(m, m / 2, rng);
    const Element E = block_element(s.A, pk, Matrix::Zero(k, m), pm);
    s.qs.push_back(ElementFamily{s.B, [pi = s.pi, E](cd lambda) { return pi.apply(lambda, E); },
                                 std::numeric_limits<double>::infinity(), FamilyTag::exponential_conjugation});
    const double sc = pert / std::sqrt(static_cast<double>(std::max(k, m)));
    const Matrix y0 = random_element(make_block_algebra(k, m), rng, sc).as<MatrixData>().value.topRightCorner(k, m);
    const Matrix y1 = random_element(make_block_algebra(k, m), rng, sc).as<MatrixData>().value.topRightCorner(k, m);
    auto kernel = linear_family(block_element(s.A, Matrix::Zero(k, k), y0, Matrix::Zero(m, m)),
                                block_element(s.A, Matrix::Zero(k, k), y1, Matrix::Zero(m, m)));
    s.sections.push_back(make_section(s.pi, s.qs[0], SectionStrategy::component_embed, kernel));
    s.mode = LiftMode::local;
    s.parameters["k"] = std::to_string(k);
    s.parameters["m"] = std::to_string(m);
    s.parameters["twist"] = format_double(params.twist);
    s.parameters["perturbation"] = format_double(pert);
    finish(s, params);
    return s;
}

Scenario build_dual_family(int n, const Matrix& K, const std::vector<Matrix>& projections, bool self_adjoint,
                           const ScenarioParams& params) {
    const double pert = params.perturbation.value_or(0.2);
    if (projections.empty()) fail(ErrorCode::invalid_parameter, "at least one projection is required");
    if (K.rows() != n || K.cols() != n) fail(ErrorCode::invalid_generator, "K has the wrong size");
    for (std::size_t i = 0; i < projections.size(); ++i) {
        const Matrix& p = projections[i];
        if (p.rows() != n || p.cols() != n) fail(ErrorCode::invalid_generator, "projection has the wrong size");
        check_idempotent(p, "P_" + std::to_string(i + 1));
        if (self_adjoint && (p - p.adjoint()).norm() > 1e-12)
            fail(ErrorCode::invalid_generator, "P_" + std::to_string(i + 1) + " is not self-adjoint");
        for (std::size_t j = 0; j < i; ++j)
            if ((p * projections[j]).norm() > 1e-12 || (projections[j] * p).norm() > 1e-12)
                fail(ErrorCode::invalid_generator, "projections are not pairwise orthogonal");
    }
    if (self_adjoint && (K + K.adjoint()).norm() > 1e-12) fail(ErrorCode::invalid_generator, "K is not skew-adjoint");
    std::mt19937_64 rng(params.seed);
    Scenario s;
    s.id = self_adjoint ? "dual-family-sa" : "dual-family";
    s.summary = "orthogonal families exp(lambda K) P_i exp(-lambda K) lifted to M_n[eps]";
    s.A = make_dual_algebra(n);
    s.B = make_matrix_algebra(n);
    s.pi = dual_hom(s.A, s.B);
    const double sc = pert / std::sqrt(static_cast<double>(n));
    const Matrix zero_n = Matrix::Zero(n, n);
    for (const auto& p : projections) {
        s.qs.push_back(conjugation(s.B, p, K));
        const Matrix n0 = random_matrix(n, rng, sc);
        const Matrix n1 = random_matrix(n, rng, sc);
        auto kernel = linear_family(dual_element(s.A, zero_n, n0), dual_element(s.A, zero_n, n1));
        s.sections.push_back(make_section(s.pi, s.qs.back(), SectionStrategy::component_embed, kernel));
    }
    s.mode = self_adjoint ? LiftMode::family_sa : LiftMode::family;
    s.parameters["n"] = std::to_string(n);
    s.parameters["families"] = std::to_string(projections.size());
    s.parameters["perturbation"] = format_double(pert);
    finish(s, params);
    return s;
}

namespace {

/// lambda -> (z - lambda) g for a fixed series g of degree < D.
ElementFamily vanishing_at_lambda(const AlgebraPtr& wiener, const Element& g) {
    return ElementFamily{wiener,
                         [wiener, g](cd lambda) {
                             const Element zl =
                                 series_element(wiener, {scalar(wiener->base(), -lambda), identity(wiener->base())});
                             return mul(zl, g);
                         },
                         1.0, FamilyTag::none};
}

ElementFamily vanishing_at_lambda_nonunital(const AlgebraPtr& wiener, const std::vector<Element>& g) {
    // (z - lambda) g with the base possibly non-unital: coefficients built by hand
    return ElementFamily{wiener,
                         [wiener, g](cd lambda) {
                             const int deg = wiener->degree();
                             std::vector<Element> c(static_cast<std::size_t>(deg + 1), zero(wiener->base()));
                             for (std::size_t k = 0; k < g.size(); ++k) {
                                 c[k] = sub(c[k], scale(lambda, g[k]));
                                 if (static_cast<int>(k) + 1 <= deg) c[k + 1] = add(c[k + 1], g[k]);
                             }
                             return series_element(wiener, std::move(c));
                         },
                         1.0, FamilyTag::none};
}

std::vector<cd> disc_samples() {
    // 12 points of the unit disc: three radii, four angles each
    std::vector<cd> out;
    for (double r : {0.0, 0.45, 0.9})
        for (int j = 0; j < 4; ++j) out.push_back(std::polar(r, 2.0 * M_PI * (j + 0.25 * r) / 4.0));
    return out;
}

nlohmann::json cd_json(cd z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

Scenario build_example1(const AlgebraPtr& base, int degree, const ScenarioParams& params) {
    const double pert = params.perturbation.value_or(0.02);
    if (degree < 1) fail(ErrorCode::invalid_parameter, "wiener truncation degree must be >= 1");
    std::mt19937_64 rng(params.seed);
    Scenario s;
    s.id = "example1";
    s.summary = "power series over B with pi(lambda) f = f(lambda)";
    s.A = make_wiener_algebra(base, degree);
    s.B = base;
    s.pi = evaluation_hom(s.A);
    s.tail_aware = true;
    s.parameters["base"] = base->describe();
    s.parameters["degree"] = std::to_string(degree);

    if (base->kind() == AlgebraKind::matrix && base->size() >= 2) {
        const int n = base->size();
        s.qs.push_back(conjugation(base, unit_matrix(n, 0, 0), random_skew(n, rng, 0.5)));
        const Element g = random_element(base, rng, pert / std::sqrt(static_cast<double>(n)));
        s.sections.push_back(make_section(s.pi, s.qs[0], SectionStrategy::constant_embed,
                                          vanishing_at_lambda(s.A, series_element(s.A, {g}))));
        s.mode = LiftMode::local;
        s.parameters["perturbation"] = format_double(pert);
    } else {
        s.mode = LiftMode::probe;
    }

    const AlgebraPtr A = s.A;
    const HomFamily pi = s.pi;
    if (base->unital()) {
        s.probes.push_back({"direct-evaluation", [A, pi] {
                                const Element one = identity(A->base());
                                const Element f = series_element(A, {one, one});
                                const double err = head_distance(pi.apply(0.5, f), scale(1.5, one));
                                return ProbeResult{err <= 1e-15, {{"lambda", 0.5}, {"f", "1 + z"}, {"error", err}}};
                            }});
    }
    const std::uint64_t seed = params.seed;
    s.probes.push_back({"norm-constancy", [A, pi, seed] {
                            // ||pi(lambda)|| over the extreme points b z^k of the l1 unit ball
                            std::mt19937_64 r(seed + 1);
                            std::vector<Element> basis;
                            const AlgebraPtr& b = A->base();
                            if (b->kind() == AlgebraKind::matrix) {
                                const int n = b->size();
                                for (int i = 0; i < n; ++i)
                                    for (int j = 0; j < n; ++j) basis.push_back(matrix_element(b, unit_matrix(n, i, j)));
                            }
                            for (int t = 0; t < 8; ++t) basis.push_back(random_element(b, r));
                            nlohmann::json rows = nlohmann::json::array();
                            bool pass = true;
                            for (cd lambda : disc_samples()) {
                                double best = 0.0;
                                for (const auto& e : basis) {
                                    for (int k = 0; k <= A->degree(); ++k) {
                                        std::vector<Element> c(static_cast<std::size_t>(k + 1), zero(b));
                                        c[static_cast<std::size_t>(k)] = scale(1.0 / norm(e), e);
                                        const Element f = series_element(A, std::move(c));
                                        best = std::max(best, norm(pi.apply(lambda, f)) / norm(f));
                                    }
                                }
                                pass = pass && std::abs(best - 1.0) <= 1e-10;
                                rows.push_back({{"lambda", cd_json(lambda)}, {"norm", best}});
                            }
                            return ProbeResult{pass, {{"samples", rows}, {"tolerance", 1e-10}}};
                        }});
    if (A->has_involution()) {
        s.probes.push_back({"involution-bound", [A, seed] {
                                std::mt19937_64 r(seed + 2);
                                const double C = A->involution_bound();
                                double worst = 0.0, constant_gap = 0.0;
                                for (int t = 0; t < 200; ++t) {
                                    const Element f = random_element(A, r);
                                    worst = std::max(worst, norm(adjoint(f)) / norm(f));
                                }
                                for (int t = 0; t < 20; ++t) {
                                    const Element c = series_element(A, {random_element(A->base(), r)});
                                    constant_gap = std::max(constant_gap, std::abs(norm(adjoint(c)) / norm(c) - C));
                                }
                                return ProbeResult{worst <= C + 1e-12 && constant_gap <= 1e-12,
                                                   {{"C", C}, {"max_ratio", worst}, {"constant_gap", constant_gap}}};
                            }});
    }
    finish(s, params);
    return s;
}

Scenario build_example2(int conv_grid, int degree, const ScenarioParams& params) {
    if (conv_grid < 2) fail(ErrorCode::invalid_parameter, "convolution grid must be >= 2");
    if (degree < 1) fail(ErrorCode::invalid_parameter, "wiener truncation degree must be >= 1");
    Scenario s;
    s.id = "example2";
    s.summary = "unitized convolution algebra, pi(lambda)(f + c) = f(lambda) + c";
    const AlgebraPtr conv = make_convolution_algebra(conv_grid);
    const AlgebraPtr W = make_wiener_algebra(conv, degree);
    s.A = make_unitization(W);
    s.B = make_unitization(conv);
    s.pi = unitize_hom(evaluation_hom(W), s.A, s.B);
    s.qs.push_back(constant_family(identity(s.B)));
    s.sections.push_back(make_section(s.pi, s.qs[0], SectionStrategy::constant_embed));
    s.mode = LiftMode::trivial;
    s.tail_aware = true;
    s.parameters["N"] = std::to_string(conv_grid);
    s.parameters["degree"] = std::to_string(degree);

    const AlgebraPtr B = s.B;
    const std::uint64_t seed = params.seed;
    s.probes.push_back({"one-point-spectrum", [B, seed] {
                            std::mt19937_64 r(seed + 3);
                            bool pass = true;
                            for (int t = 0; t < 20; ++t) {
                                const Element x = random_element(B, r);
                                const auto sp = spectrum(x).points;
                                pass = pass && sp.size() == 1 && sp[0] == x.as<UnitData>().scalar;
                            }
                            return ProbeResult{pass, {{"samples", 20}}};
                        }});
    s.probes.push_back({"nilpotency", [conv, seed] {
                            std::mt19937_64 r(seed + 4);
                            bool pass = true;
                            for (int t = 0; t < 20; ++t)
                                pass = pass && is_exact_zero(power(random_element(conv, r), conv->grid()));
                            return ProbeResult{pass, {{"exponent", conv->grid()}, {"samples", 20}}};
                        }});
    s.probes.push_back({"factorial-decay", [conv] {
                            const int N = conv->grid();
                            const Element f = convolution_element(conv, Vector::Ones(N - 1));
                            Element fn = f;
                            double fact = 1.0;
                            bool pass = true;
                            nlohmann::json rows = nlohmann::json::array();
                            for (int n = 1; n <= 6; ++n) {
                                if (n > 1) fn = mul(fn, f);
                                fact *= n;
                                const double bound = std::pow(norm(f), n) / fact * (1.0 + 10.0 / N);
                                pass = pass && norm(fn) <= bound;
                                rows.push_back({{"n", n}, {"norm", norm(fn)}, {"bound", bound}});
                            }
                            return ProbeResult{pass, {{"powers", rows}}};
                        }});
    finish(s, params);
    return s;
}

Scenario build_example3(int conv_grid, int degree, int n1, const ScenarioParams& params) {
    const double pert = params.perturbation.value_or(0.2);
    if (n1 < 2) fail(ErrorCode::invalid_parameter, "matrix block size must be >= 2");
    if (conv_grid < 2) fail(ErrorCode::invalid_parameter, "convolution grid must be >= 2");
    if (degree < 1) fail(ErrorCode::invalid_parameter, "wiener truncation degree must be >= 1");
    std::mt19937_64 rng(params.seed);
    Scenario s;
    s.id = "example3";
    s.summary = "(unitized series over convolution) x M_n1, identity on M_n1";
    const AlgebraPtr conv = make_convolution_algebra(conv_grid);
    const AlgebraPtr W = make_wiener_algebra(conv, degree);
    const AlgebraPtr UA = make_unitization(W);
    const AlgebraPtr UB = make_unitization(conv);
    const AlgebraPtr M = make_matrix_algebra(n1);
    s.A = make_product({UA, M});
    s.B = make_product({UB, M});
    s.pi = product_hom({unitize_hom(evaluation_hom(W), UA, UB), identity_hom(M)}, s.A, s.B);
    s.tail_aware = true;

    const Matrix x1 = random_matrix(n1, rng, 0.5 / std::sqrt(static_cast<double>(n1)));
    const Element e1 = matrix_element(M, unit_matrix(n1, 0, 0));
    const ElementFamily conj = exp_conjugation_family(e1, matrix_element(M, x1));
    const AlgebraPtr B = s.B;
    s.qs.push_back(ElementFamily{B,
                                 [B, UB, conj](cd lambda) {
                                     return tuple_element(B, {identity(UB), conj(lambda)});
                                 },
                                 std::numeric_limits<double>::infinity(), FamilyTag::exponential_conjugation});
    s.qs.push_back(ElementFamily{B,
                                 [B, UB, M, conj](cd lambda) {
                                     return tuple_element(B, {zero(UB), sub(identity(M), conj(lambda))});
                                 },
                                 std::numeric_limits<double>::infinity(), FamilyTag::exponential_conjugation});
    for (std::size_t i = 0; i < s.qs.size(); ++i) {
        std::vector<Element> g;
        for (int k = 0; k < std::min(2, degree); ++k)
            g.push_back(random_element(conv, rng, pert * std::ldexp(1.0, -k)));
        const ElementFamily inner = vanishing_at_lambda_nonunital(W, g);
        const AlgebraPtr A = s.A;
        ElementFamily kernel{A,
                             [A, UA, M, inner](cd lambda) {
                                 return tuple_element(A, {unit_element(UA, inner(lambda), 0.0), zero(M)});
                             },
                             1.0, FamilyTag::none};
        s.sections.push_back(make_section(s.pi, s.qs[i], SectionStrategy::constant_embed, kernel));
    }
    s.mode = LiftMode::family;
    s.parameters["N"] = std::to_string(conv_grid);
    s.parameters["degree"] = std::to_string(degree);
    s.parameters["n1"] = std::to_string(n1);
    s.parameters["perturbation"] = format_double(pert);

    const HomFamily pi = s.pi;
    const std::vector<ElementFamily> qs = s.qs;
    s.probes.push_back({"base-value", [qs, B, UB, M, n1] {
                            const Element expected = tuple_element(B, {identity(UB), matrix_element(M, unit_matrix(n1, 0, 0))});
                            const double err = head_distance(qs[0](0.0), expected);
                            return ProbeResult{err == 0.0, {{"q1(0)", "(1, e1)"}, {"error", err}}};
                        }});
    finish(s, params);
    return s;
}

Scenario remark3_probe(const ScenarioParams& params) {
    Scenario s;
    s.id = "remark3-probe";
    s.summary = "B = C, n = 1: sigma(pi(lambda) z) = {lambda} escapes {0} away from 0";
    const AlgebraPtr C = make_matrix_algebra(1);
    s.A = make_wiener_algebra(C, 4);
    s.B = C;
    s.pi = evaluation_hom(s.A);
    s.mode = LiftMode::probe;
    s.expected = ExpectedOutcome::hypothesis_violated_probe;
    const AlgebraPtr A = s.A;
    const HomFamily pi = s.pi;
    s.probes.push_back({"spectral-escape", [A, C, pi] {
                            const Element z = series_element(A, {zero(C), identity(C)});
                            bool pass = true;
                            nlohmann::json rows = nlohmann::json::array();
                            for (cd lambda : {cd(0.0), cd(0.3), cd(-0.5)}) {
                                const auto sp = spectrum(pi.apply(lambda, z)).points;
                                nlohmann::json pts = nlohmann::json::array();
                                for (const auto& p : sp) pts.push_back(cd_json(p));
                                pass = pass && sp.size() == 1 && sp[0] == lambda;
                                rows.push_back({{"lambda", cd_json(lambda)}, {"spectrum", pts}});
                            }
                            return ProbeResult{pass, {{"samples", rows}}};
                        }});
    finish(s, params);
    return s;
}

std::vector<std::string> scenario_ids() {
    return {"example1",     "example2",   "example3",       "dual-testbed", "dual-testbed-sa",
            "block-testbed", "dual-family", "dual-family-sa", "remark3-probe"};
}

Scenario build_scenario(const std::string& id, const ScenarioParams& params) {
    std::mt19937_64 rng(params.seed ^ 0x9e3779b97f4a7c15ULL);
    const int n = params.n;
    if (id == "example1") return build_example1(build_algebra(parse_algebra_descriptor(params.base)), params.degree, params);
    if (id == "example2") return build_example2(params.conv_grid, params.degree, params);
    if (id == "example3") return build_example3(params.conv_grid, params.degree, params.n1, params);
    if (id == "dual-testbed" || id == "dual-testbed-sa") {
        const bool sa = id == "dual-testbed-sa";
        if (n < 2) fail(ErrorCode::invalid_parameter, "dual testbed needs n >= 2");
        const Matrix K = sa ? random_skew(n, rng, 0.5) : random_matrix(n, rng, 0.5 / std::sqrt(static_cast<double>(n)));
        Matrix P0 = Matrix::Zero(n, n);
        for (int i = 0; i < (n + 1) / 2; ++i) P0(i, i) = 1.0;
        if (!sa) P0 = oblique_projection(n, (n + 1) / 2, rng);
        return build_dual_testbed(n, K, P0, sa, params);
    }
    if (id == "block-testbed") return build_block_testbed(params.k, params.m, params);
    if (id == "dual-family" || id == "dual-family-sa") {
        const bool sa = id == "dual-family-sa";
        if (n < 3) fail(ErrorCode::invalid_parameter, "dual family needs n >= 3");
        const Matrix K = sa ? random_skew(n, rng, 0.5) : random_matrix(n, rng, 0.5 / std::sqrt(static_cast<double>(n)));
        Matrix V = Matrix::Identity(n, n);
        if (!sa) V += random_matrix(n, rng, 0.3 / std::sqrt(static_cast<double>(n)));
        const Matrix Vi = invert_matrix(V);
        std::vector<Matrix> ps;
        for (int i = 0; i < 3; ++i) ps.push_back(V * unit_matrix(n, i, i) * Vi);
        return build_dual_family(n, K, ps, sa, params);
    }
    if (id == "remark3-probe") return remark3_probe(params);
    std::string valid;
    for (const auto& s : scenario_ids()) valid += (valid.empty() ? "" : ", ") + s;
    fail(ErrorCode::config_error, "unknown scenario '" + id + "'; valid ids: " + valid);
}

}  // namespace idemlift
