#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "idemlift/algebra.hpp"

namespace idemlift {

enum class FamilyTag { none, constant, polynomial, exponential_conjugation, evaluation_hom };

std::string_view to_string(FamilyTag tag) noexcept;

/// lambda -> element of a fixed algebra, defined on |lambda| < radius.
struct ElementFamily {
    AlgebraPtr algebra;
    std::function<Element(cd)> eval;
    double radius = std::numeric_limits<double>::infinity();
    FamilyTag tag = FamilyTag::none;

    Element operator()(cd lambda) const;
};

/// lambda -> homomorphism domain -> codomain.
struct HomFamily {
    AlgebraPtr domain;
    AlgebraPtr codomain;
    std::function<Element(cd, const Element&)> map;
    double radius = std::numeric_limits<double>::infinity();
    FamilyTag tag = FamilyTag::none;
    /// pi(lambda) is a *-homomorphism for real lambda.
    bool star_on_real = false;
    /// Optional linear right inverse of pi(lambda), used by component-embed sections.
    std::function<Element(cd, const Element&)> right_inverse;
    /// Optional sampler of random elements of Ker pi(lambda).
    std::function<Element(cd, std::mt19937_64&)> kernel_sample;

    Element apply(cd lambda, const Element& x) const;
};

/// Analytic right inverse a(lambda) of pi(lambda) along `target`.
struct Section {
    ElementFamily lift;
    ElementFamily target;
};

enum class SectionStrategy { constant_embed, component_embed };

ElementFamily constant_family(const Element& x);
/// lambda -> sum_k c_k lambda^k.
ElementFamily polynomial_family(std::vector<Element> coeffs);

Element hom_apply(const HomFamily& pi, const ElementFamily& x, cd lambda);
Element hom_apply(const HomFamily& pi, const Element& x, cd lambda);

/// Section through constant power series (evaluation homs) or through the hom's right inverse.
/// `kernel_perturbation`, when given, must take values in Ker pi(lambda) and is added to the section.
Section make_section(const HomFamily& pi, const ElementFamily& target, SectionStrategy strategy,
                     std::optional<ElementFamily> kernel_perturbation = std::nullopt);
/// ||pi(lambda) a(lambda) - target(lambda)||.
double section_defect(const HomFamily& pi, const Section& section, cd lambda);

/// a_0(lambda) = (a(lambda) + a(conj lambda)^*) / 2; self-adjoint for real lambda.
Section symmetrize(const Section& section);

/// lambda -> exp(-lambda x) e exp(lambda x).
ElementFamily exp_conjugation_family(const Element& e, const Element& x);

double kernel_residual(const HomFamily& pi, const Element& x, cd lambda);

/// Embeds b from the codomain of an evaluation hom as a constant power series, recursing through
/// unitizations and products; nullopt when the algebra pair has no such embedding.
std::optional<Element> constant_embed(const AlgebraPtr& domain, const Element& b);

// Homomorphism families used by the scenarios.
HomFamily evaluation_hom(const AlgebraPtr& wiener);
HomFamily identity_hom(const AlgebraPtr& algebra);
/// M_n[eps] -> M_n, b0 + b1 eps -> b0 for every lambda.
HomFamily dual_hom(const AlgebraPtr& dual, const AlgebraPtr& matrix);
/// [[X, Y], [0, Z]] -> (S X S^{-1}, T Z T^{-1}) with S = exp(lambda n_upper), T = exp(lambda n_lower).
/// Zero twists give the plain diagonal projection.
HomFamily block_hom(const AlgebraPtr& block, const AlgebraPtr& product, const Matrix& n_upper, const Matrix& n_lower);
/// (f (+) c) -> (pi f (+) c).
HomFamily unitize_hom(const HomFamily& inner, const AlgebraPtr& domain, const AlgebraPtr& codomain);
/// (x_1, ..., x_r) -> (pi_1 x_1, ..., pi_r x_r).
HomFamily product_hom(const std::vector<HomFamily>& factors, const AlgebraPtr& domain, const AlgebraPtr& codomain);

struct HarteResult {
    double max_excess = 0.0;  // max over samples of sup_{s in sigma(pi x)} dist(s, sigma(x + y))
    int samples = 0;
};
/// sigma(pi(lambda) x) against sigma(x + y) for sampled kernel elements y.
HarteResult harte_inclusion_check(const HomFamily& pi, const Element& x, cd lambda, int samples, std::mt19937_64& rng);

/// Random element with standard complex normal entries scaled by `scale`
/// (power-series coefficients additionally decay like 2^{-k}).
Element random_element(const AlgebraPtr& algebra, std::mt19937_64& rng, double scale = 1.0);

/// Symmetric real-or-complex grid lambda_j = center + h (-1 + 2 j / (n - 1)).
struct Grid {
    cd center{0.0, 0.0};
    double half_width = 0.5;
    int count = 21;

    std::vector<cd> points() const;
    bool real() const noexcept { return center.imag() == 0.0; }
};

}  // namespace idemlift
