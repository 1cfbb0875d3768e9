#include "idemlift/families.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace idemlift {

std::string_view to_string(FamilyTag tag) noexcept {
    switch (tag) {
        case FamilyTag::none: return "none";
        case FamilyTag::constant: return "constant";
        case FamilyTag::polynomial: return "polynomial";
        case FamilyTag::exponential_conjugation: return "exponential-conjugation";
        case FamilyTag::evaluation_hom: return "evaluation-hom";
    }
    return "none";
}

namespace {

void check_radius(cd lambda, double radius) {
    if (std::abs(lambda) > radius * (1.0 + 1e-15))
        fail(ErrorCode::out_of_radius, "|lambda| = " + std::to_string(std::abs(lambda)) + " exceeds radius " +
                                           std::to_string(radius));
}

Element horner(const std::vector<Element>& coeffs, cd lambda) {
    Element acc = coeffs.back();
    for (int k = static_cast<int>(coeffs.size()) - 2; k >= 0; --k) acc = add(scale(lambda, acc), coeffs[k]);
    return acc;
}

cd normal_cd(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng, double scale) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = scale * normal_cd(rng);
    return m;
}

}  // namespace

Element ElementFamily::operator()(cd lambda) const {
    check_radius(lambda, radius);
    return eval(lambda);
}

Element HomFamily::apply(cd lambda, const Element& x) const {
    check_radius(lambda, radius);
    if (!x.algebra()->same_as(*domain))
        fail(ErrorCode::algebra_mismatch, "homomorphism applied outside its domain " + domain->describe());
    return map(lambda, x);
}

ElementFamily constant_family(const Element& x) {
    return ElementFamily{x.algebra(), [x](cd) { return x; }, std::numeric_limits<double>::infinity(),
                         FamilyTag::constant};
}

ElementFamily polynomial_family(std::vector<Element> coeffs) {
    if (coeffs.empty()) fail(ErrorCode::invalid_parameter, "polynomial family needs coefficients");
    AlgebraPtr alg = coeffs.front().algebra();
    return ElementFamily{alg, [coeffs = std::move(coeffs)](cd lambda) { return horner(coeffs, lambda); },
                         std::numeric_limits<double>::infinity(), FamilyTag::polynomial};
}

Element hom_apply(const HomFamily& pi, const ElementFamily& x, cd lambda) { return pi.apply(lambda, x(lambda)); }

Element hom_apply(const HomFamily& pi, const Element& x, cd lambda) { return pi.apply(lambda, x); }

std::optional<Element> constant_embed(const AlgebraPtr& domain, const Element& b) {
    const AlgebraPtr& src = b.algebra();
    if (domain->same_as(*src)) return b;
    if (domain->kind() == AlgebraKind::wiener && domain->base()->same_as(*src))
        return series_element(domain, {b}, 0.0);
    if (domain->kind() == AlgebraKind::unitization && src->kind() == AlgebraKind::unitization) {
        const auto& u = b.as<UnitData>();
        auto inner = constant_embed(domain->base(), *u.inner);
        if (!inner) return std::nullopt;
        return unit_element(domain, std::move(*inner), u.scalar);
    }
    if (domain->kind() == AlgebraKind::product && src->kind() == AlgebraKind::product &&
        domain->children().size() == src->children().size()) {
        std::vector<Element> parts;
        const auto& bp = b.as<TupleData>().parts;
        for (std::size_t i = 0; i < bp.size(); ++i) {
            auto p = constant_embed(domain->children()[i], bp[i]);
            if (!p) return std::nullopt;
            parts.push_back(std::move(*p));
        }
        return tuple_element(domain, std::move(parts));
    }
    return std::nullopt;
}

Section make_section(const HomFamily& pi, const ElementFamily& target, SectionStrategy strategy,
                     std::optional<ElementFamily> kernel_perturbation) {
    if (!target.algebra->same_as(*pi.codomain))
        fail(ErrorCode::algebra_mismatch, "target family lives outside the codomain");
    std::function<Element(cd)> embed;
    if (strategy == SectionStrategy::constant_embed) {
        if (!constant_embed(pi.domain, target(0.0)))
            fail(ErrorCode::unsupported_strategy, "constant-embed needs an evaluation homomorphism, got " +
                                                      pi.domain->describe() + " -> " + pi.codomain->describe());
        embed = [dom = pi.domain, target](cd lambda) { return *constant_embed(dom, target(lambda)); };
    } else {
        if (!pi.right_inverse) fail(ErrorCode::unsupported_strategy, "component-embed needs a right inverse of pi");
        embed = [pi, target](cd lambda) { return pi.right_inverse(lambda, target(lambda)); };
    }
    ElementFamily lift{pi.domain, embed, std::min(pi.radius, target.radius), FamilyTag::none};
    if (kernel_perturbation) {
        if (!kernel_perturbation->algebra->same_as(*pi.domain))
            fail(ErrorCode::algebra_mismatch, "kernel perturbation outside the domain");
        lift.eval = [embed, k = *kernel_perturbation](cd lambda) { return add(embed(lambda), k(lambda)); };
        lift.radius = std::min(lift.radius, kernel_perturbation->radius);
    }
    return Section{std::move(lift), target};
}

double section_defect(const HomFamily& pi, const Section& section, cd lambda) {
    return head_distance(pi.apply(lambda, section.lift(lambda)), section.target(lambda));
}

Section symmetrize(const Section& section) {
    if (!section.lift.algebra->has_involution())
        fail(ErrorCode::no_involution, section.lift.algebra->describe() + " has no involution");
    ElementFamily lift = section.lift;
    lift.eval = [a = section.lift](cd lambda) {
        return scale(0.5, add(a(lambda), adjoint(a(std::conj(lambda)))));
    };
    lift.tag = FamilyTag::none;
    return Section{std::move(lift), section.target};
}

ElementFamily exp_conjugation_family(const Element& e, const Element& x) {
    if (!e.algebra()->same_as(*x.algebra())) fail(ErrorCode::algebra_mismatch, "generator outside the algebra");
    if (head_distance(mul(e, e), e) > 1e-12) fail(ErrorCode::not_idempotent_input, "e^2 != e");
    return ElementFamily{e.algebra(),
                         [e, x](cd lambda) {
                             return mul(mul(exponential(scale(-lambda, x)), e), exponential(scale(lambda, x)));
                         },
                         std::numeric_limits<double>::infinity(), FamilyTag::exponential_conjugation};
}

double kernel_residual(const HomFamily& pi, const Element& x, cd lambda) { return norm(pi.apply(lambda, x)); }

HomFamily evaluation_hom(const AlgebraPtr& wiener) {
    if (wiener->kind() != AlgebraKind::wiener) fail(ErrorCode::invalid_parameter, "evaluation hom needs a wiener algebra");
    HomFamily pi;
    pi.domain = wiener;
    pi.codomain = wiener->base();
    pi.radius = 1.0;
    pi.tag = FamilyTag::evaluation_hom;
    pi.star_on_real = wiener->has_involution();
    pi.map = [](cd lambda, const Element& f) { return horner(f.as<SeriesData>().coeffs, lambda); };
    pi.right_inverse = [wiener](cd, const Element& b) { return series_element(wiener, {b}, 0.0); };
    pi.kernel_sample = [wiener](cd lambda, std::mt19937_64& rng) {
        // (z - lambda) g with deg g < D stays exact under truncation
        const int deg = wiener->degree();
        std::vector<Element> g;
        for (int k = 0; k < deg; ++k) g.push_back(random_element(wiener->base(), rng, std::ldexp(1.0, -k)));
        std::vector<Element> c(static_cast<std::size_t>(deg + 1), zero(wiener->base()));
        for (int k = 0; k <= deg; ++k) {
            Element v = zero(wiener->base());
            if (k >= 1) v = add(v, g[k - 1]);
            if (k < deg) v = sub(v, scale(lambda, g[k]));
            c[k] = v;
        }
        return series_element(wiener, std::move(c), 0.0);
    };
    return pi;
}

HomFamily identity_hom(const AlgebraPtr& algebra) {
    HomFamily pi;
    pi.domain = pi.codomain = algebra;
    pi.star_on_real = algebra->has_involution();
    pi.tag = FamilyTag::constant;
    pi.map = [](cd, const Element& x) { return x; };
    pi.right_inverse = [](cd, const Element& x) { return x; };
    pi.kernel_sample = [algebra](cd, std::mt19937_64&) { return zero(algebra); };
    return pi;
}

HomFamily dual_hom(const AlgebraPtr& dual, const AlgebraPtr& matrix) {
    if (dual->kind() != AlgebraKind::dual || matrix->kind() != AlgebraKind::matrix || dual->size() != matrix->size())
        fail(ErrorCode::algebra_mismatch, "dual_hom needs M_n[eps] and M_n");
    HomFamily pi;
    pi.domain = dual;
    pi.codomain = matrix;
    pi.star_on_real = true;
    pi.tag = FamilyTag::constant;
    pi.map = [matrix](cd, const Element& x) { return matrix_element(matrix, x.as<DualData>().head); };
    pi.right_inverse = [dual](cd, const Element& b) {
        const Matrix& h = b.as<MatrixData>().value;
        return dual_element(dual, h, Matrix::Zero(h.rows(), h.cols()));
    };
    pi.kernel_sample = [dual](cd, std::mt19937_64& rng) {
        const int n = dual->size();
        return dual_element(dual, Matrix::Zero(n, n), random_matrix(n, n, rng, 1.0));
    };
    return pi;
}

HomFamily block_hom(const AlgebraPtr& block, const AlgebraPtr& product, const Matrix& n_upper, const Matrix& n_lower) {
    const int k = block->size(), m = block->block_lower_size();
    if (block->kind() != AlgebraKind::block_triangular || product->kind() != AlgebraKind::product ||
        product->children().size() != 2 || product->children()[0]->kind() != AlgebraKind::matrix ||
        product->children()[1]->kind() != AlgebraKind::matrix || product->children()[0]->size() != k ||
        product->children()[1]->size() != m)
        fail(ErrorCode::algebra_mismatch, "block_hom needs block(k, m) and M_k x M_m");
    if (n_upper.rows() != k || n_upper.cols() != k || n_lower.rows() != m || n_lower.cols() != m)
        fail(ErrorCode::invalid_parameter, "twist generators have the wrong size");
    const bool twisted = n_upper.norm() > 0.0 || n_lower.norm() > 0.0;
    HomFamily pi;
    pi.domain = block;
    pi.codomain = product;
    pi.tag = twisted ? FamilyTag::exponential_conjugation : FamilyTag::constant;
    // Conjugation by exp(lambda N) is a *-map on real lambda only for skew N; blocks have no involution anyway.
    pi.star_on_real = false;
    auto conj = [](const Matrix& gen, cd lambda, const Matrix& x, bool inverse_side) {
        if (gen.norm() == 0.0) return x;
        const Matrix s = (lambda * gen).exp();
        const Matrix si = (-lambda * gen).exp();
        return inverse_side ? Matrix(si * x * s) : Matrix(s * x * si);
    };
    pi.map = [=](cd lambda, const Element& x) {
        const Matrix& v = x.as<MatrixData>().value;
        return tuple_element(product, {matrix_element(product->children()[0], conj(n_upper, lambda, v.topLeftCorner(k, k), false)),
                                       matrix_element(product->children()[1], conj(n_lower, lambda, v.bottomRightCorner(m, m), false))});
    };
    pi.right_inverse = [=](cd lambda, const Element& b) {
        const auto& parts = b.as<TupleData>().parts;
        return block_element(block, conj(n_upper, lambda, parts[0].as<MatrixData>().value, true), Matrix::Zero(k, m),
                             conj(n_lower, lambda, parts[1].as<MatrixData>().value, true));
    };
    pi.kernel_sample = [=](cd, std::mt19937_64& rng) {
        return block_element(block, Matrix::Zero(k, k), random_matrix(k, m, rng, 1.0), Matrix::Zero(m, m));
    };
    return pi;
}

HomFamily unitize_hom(const HomFamily& inner, const AlgebraPtr& domain, const AlgebraPtr& codomain) {
    if (domain->kind() != AlgebraKind::unitization || codomain->kind() != AlgebraKind::unitization ||
        !domain->base()->same_as(*inner.domain) || !codomain->base()->same_as(*inner.codomain))
        fail(ErrorCode::algebra_mismatch, "unitize_hom needs the unitizations of the inner hom's algebras");
    HomFamily pi;
    pi.domain = domain;
    pi.codomain = codomain;
    pi.radius = inner.radius;
    pi.tag = inner.tag;
    pi.star_on_real = inner.star_on_real;
    pi.map = [inner, codomain](cd lambda, const Element& x) {
        const auto& u = x.as<UnitData>();
        return unit_element(codomain, inner.map(lambda, *u.inner), u.scalar);
    };
    if (inner.right_inverse)
        pi.right_inverse = [inner, domain](cd lambda, const Element& b) {
            const auto& u = b.as<UnitData>();
            return unit_element(domain, inner.right_inverse(lambda, *u.inner), u.scalar);
        };
    if (inner.kernel_sample)
        pi.kernel_sample = [inner, domain](cd lambda, std::mt19937_64& rng) {
            return unit_element(domain, inner.kernel_sample(lambda, rng), 0.0);
        };
    return pi;
}

HomFamily product_hom(const std::vector<HomFamily>& factors, const AlgebraPtr& domain, const AlgebraPtr& codomain) {
    if (domain->kind() != AlgebraKind::product || codomain->kind() != AlgebraKind::product ||
        domain->children().size() != factors.size() || codomain->children().size() != factors.size())
        fail(ErrorCode::algebra_mismatch, "product_hom needs product algebras with one factor per hom");
    HomFamily pi;
    pi.domain = domain;
    pi.codomain = codomain;
    pi.star_on_real = true;
    bool all_right = true, all_kernel = true;
    for (const auto& f : factors) {
        pi.radius = std::min(pi.radius, f.radius);
        pi.star_on_real = pi.star_on_real && f.star_on_real;
        if (f.tag == FamilyTag::evaluation_hom) pi.tag = FamilyTag::evaluation_hom;
        all_right = all_right && static_cast<bool>(f.right_inverse);
        all_kernel = all_kernel && static_cast<bool>(f.kernel_sample);
    }
    pi.map = [factors, codomain](cd lambda, const Element& x) {
        const auto& parts = x.as<TupleData>().parts;
        std::vector<Element> out;
        for (std::size_t i = 0; i < parts.size(); ++i) out.push_back(factors[i].map(lambda, parts[i]));
        return tuple_element(codomain, std::move(out));
    };
    if (all_right)
        pi.right_inverse = [factors, domain](cd lambda, const Element& b) {
            const auto& parts = b.as<TupleData>().parts;
            std::vector<Element> out;
            for (std::size_t i = 0; i < parts.size(); ++i) out.push_back(factors[i].right_inverse(lambda, parts[i]));
            return tuple_element(domain, std::move(out));
        };
    if (all_kernel)
        pi.kernel_sample = [factors, domain](cd lambda, std::mt19937_64& rng) {
            std::vector<Element> out;
            for (const auto& f : factors) out.push_back(f.kernel_sample(lambda, rng));
            return tuple_element(domain, std::move(out));
        };
    return pi;
}

HarteResult harte_inclusion_check(const HomFamily& pi, const Element& x, cd lambda, int samples, std::mt19937_64& rng) {
    if (!pi.kernel_sample) fail(ErrorCode::invalid_parameter, "homomorphism has no kernel sampler");
    const auto image = spectrum(pi.apply(lambda, x)).points;
    HarteResult result;
    for (int t = 0; t < samples; ++t) {
        const auto full = spectrum(add(x, pi.kernel_sample(lambda, rng))).points;
        for (const auto& s : image) {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& f : full) d = std::min(d, std::abs(s - f));
            result.max_excess = std::max(result.max_excess, d);
        }
        ++result.samples;
    }
    return result;
}

Element random_element(const AlgebraPtr& a, std::mt19937_64& rng, double s) {
    switch (a->kind()) {
        case AlgebraKind::matrix: return matrix_element(a, random_matrix(a->size(), a->size(), rng, s));
        case AlgebraKind::dual: {
            Matrix head = random_matrix(a->size(), a->size(), rng, s);
            Matrix nil = random_matrix(a->size(), a->size(), rng, s);
            return dual_element(a, std::move(head), std::move(nil));
        }
        case AlgebraKind::block_triangular: {
            const int k = a->size(), m = a->block_lower_size();
            const Matrix x = random_matrix(k, k, rng, s);
            const Matrix y = random_matrix(k, m, rng, s);
            const Matrix z = random_matrix(m, m, rng, s);
            return block_element(a, x, y, z);
        }
        case AlgebraKind::convolution: {
            Vector v(a->grid() - 1);
            for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = s * normal_cd(rng);
            return convolution_element(a, std::move(v));
        }
        case AlgebraKind::wiener: {
            std::vector<Element> coeffs;
            for (int k = 0; k <= a->degree(); ++k) coeffs.push_back(random_element(a->base(), rng, s * std::ldexp(1.0, -k)));
            return series_element(a, std::move(coeffs), 0.0);
        }
        case AlgebraKind::unitization: {
            Element inner = random_element(a->base(), rng, s);
            return unit_element(a, std::move(inner), s * normal_cd(rng));
        }
        case AlgebraKind::product: {
            std::vector<Element> parts;
            for (const auto& f : a->children()) parts.push_back(random_element(f, rng, s));
            return tuple_element(a, std::move(parts));
        }
    }
    fail(ErrorCode::invalid_parameter, "unknown kind");
}

std::vector<cd> Grid::points() const {
    if (count < 1) fail(ErrorCode::invalid_parameter, "grid needs at least one point");
    if (count == 1) return {center};
    std::vector<cd> out;
    for (int j = 0; j < count; ++j) out.push_back(center + half_width * (-1.0 + 2.0 * j / (count - 1)));
    return out;
}

}  // namespace idemlift
