#include <cmath>
#include <random>

#include "doctest.h"
#include "idemlift/families.hpp"
#include "oracles.hpp"

using namespace idemlift;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::config_error;
}

Matrix skew(int n, std::mt19937_64& rng) {
    Matrix k = oracle::random_matrix(n, rng, 0.5);
    return 0.5 * (k - k.adjoint());
}

Matrix unit_matrix(int n, int i, int j) {
    Matrix e = Matrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

struct HomCase {
    std::string name;
    HomFamily pi;
};

std::vector<HomCase> hom_cases(std::mt19937_64& rng) {
    std::vector<HomCase> out;
    out.push_back({"dual", dual_hom(make_dual_algebra(3), make_matrix_algebra(3))});
    auto blk = make_block_algebra(2, 3);
    auto prod = make_product({make_matrix_algebra(2), make_matrix_algebra(3)});
    out.push_back({"block", block_hom(blk, prod, Matrix::Zero(2, 2), Matrix::Zero(3, 3))});
    out.push_back({"block-twisted", block_hom(blk, prod, oracle::random_matrix(2, rng, 0.4),
                                              oracle::random_matrix(3, rng, 0.4))});
    out.push_back({"evaluation", evaluation_hom(make_wiener_algebra(make_matrix_algebra(2), 6))});
    auto w = make_wiener_algebra(make_convolution_algebra(6), 4);
    out.push_back({"unitized-evaluation",
                   unitize_hom(evaluation_hom(w), make_unitization(w), make_unitization(w->base()))});
    return out;
}

}  // namespace

TEST_CASE("homomorphism law, linearity and unitality on the sampled grid") {
    std::mt19937_64 rng(40);
    for (auto& [name, pi] : hom_cases(rng)) {
        CAPTURE(name);
        for (cd lambda : Grid{0.0, 0.5, 7}.points()) {
            for (int t = 0; t < 5; ++t) {
                auto x = random_element(pi.domain, rng, 0.5);
                auto y = random_element(pi.domain, rng, 0.5);
                const cd c(0.3, -1.1);
                // truncated series: the dropped part of xy is bounded by its tail
                const auto xy = mul(x, y);
                CHECK(head_distance(pi.apply(lambda, xy), mul(pi.apply(lambda, x), pi.apply(lambda, y))) <=
                      1e-12 + tail_bound(xy));
                CHECK(head_distance(pi.apply(lambda, add(x, scale(c, y))),
                                    add(pi.apply(lambda, x), scale(c, pi.apply(lambda, y)))) <= 1e-12);
            }
            if (pi.domain->unital())
                CHECK(head_distance(pi.apply(lambda, identity(pi.domain)), identity(pi.codomain)) <= 1e-12);
        }
    }
}

TEST_CASE("right inverses and kernel samplers") {
    std::mt19937_64 rng(41);
    for (auto& [name, pi] : hom_cases(rng)) {
        CAPTURE(name);
        for (cd lambda : {cd(0.0), cd(0.4), cd(-0.3, 0.2)}) {
            auto b = random_element(pi.codomain, rng);
            CHECK(head_distance(pi.apply(lambda, pi.right_inverse(lambda, b)), b) <= 1e-12);
            auto k = pi.kernel_sample(lambda, rng);
            CHECK(kernel_residual(pi, k, lambda) <= 1e-12);
        }
    }
}

TEST_CASE("kernel elements of the testbeds square to exactly zero") {
    std::mt19937_64 rng(42);
    auto cases = hom_cases(rng);
    for (int i = 0; i < 3; ++i) {
        auto k = cases[static_cast<std::size_t>(i)].pi.kernel_sample(0.2, rng);
        CHECK(is_exact_zero(mul(k, k)));
    }
}

TEST_CASE("star compatibility on real lambda") {
    std::mt19937_64 rng(43);
    for (auto& [name, pi] : hom_cases(rng)) {
        if (!pi.star_on_real) continue;
        CAPTURE(name);
        for (double lambda : {-0.5, 0.0, 0.3}) {
            auto x = random_element(pi.domain, rng);
            CHECK(head_distance(pi.apply(lambda, adjoint(x)), adjoint(pi.apply(lambda, x))) <= 1e-12);
        }
    }
}

TEST_CASE("evaluation hom: constant term, direct evaluation and norm bound") {
    auto c = make_matrix_algebra(1);
    auto w = make_wiener_algebra(c, 3);
    auto pi = evaluation_hom(w);
    auto f = series_element(w, {scalar(c, 1.0), scalar(c, 1.0)});
    CHECK(std::abs(pi.apply(0.5, f).as<MatrixData>().value(0, 0) - 1.5) <= 1e-15);
    CHECK(std::abs(pi.apply(0.0, f).as<MatrixData>().value(0, 0) - 1.0) == 0.0);

    // pi(lambda) of the kernel generator z
    auto z = series_element(w, {zero(c), scalar(c, 1.0)});
    auto img = pi.apply(0.3, z);
    CHECK(img.as<MatrixData>().value(0, 0) == cd(0.3));

    std::mt19937_64 rng(44);
    auto wm = make_wiener_algebra(make_matrix_algebra(2), 5);
    auto pim = evaluation_hom(wm);
    for (int t = 0; t < 50; ++t) {
        auto g = random_element(wm, rng);
        const cd lambda = oracle::point_in_disc(0.0, 0.99, rng);
        CHECK(norm(pim.apply(lambda, g)) < norm(g));
        auto constant = series_element(wm, {g.as<SeriesData>().coeffs[0]});
        CHECK(std::abs(norm(pim.apply(lambda, constant)) - norm(constant)) <= 1e-14);
    }
    CHECK(code_of([&] { pim.apply(1.5, random_element(wm, rng)); }) == ErrorCode::out_of_radius);
}

TEST_CASE("constant-embed section lifts the target at every evaluation point") {
    std::mt19937_64 rng(45);
    auto base = make_matrix_algebra(3);
    auto w = make_wiener_algebra(base, 4);
    auto pi = evaluation_hom(w);
    Matrix p0 = Matrix::Zero(3, 3);
    p0(0, 0) = 1.0;
    auto q = exp_conjugation_family(matrix_element(base, p0), matrix_element(base, skew(3, rng)));
    auto sec = make_section(pi, q, SectionStrategy::constant_embed);
    for (cd lambda : Grid{0.0, 0.5, 11}.points()) {
        CHECK(section_defect(pi, sec, lambda) <= 1e-12);
        for (cd mu : {cd(0.0), cd(0.7), cd(-0.2, 0.5)})
            CHECK(head_distance(pi.apply(mu, sec.lift(lambda)), q(lambda)) <= 1e-12);
    }
    CHECK(code_of([&] { make_section(dual_hom(make_dual_algebra(3), base), q, SectionStrategy::constant_embed); }) ==
          ErrorCode::unsupported_strategy);
}

TEST_CASE("component-embed sections on the testbeds") {
    std::mt19937_64 rng(46);
    auto d = make_dual_algebra(3);
    auto pi = dual_hom(d, make_matrix_algebra(3));
    Matrix p0 = Matrix::Zero(3, 3);
    p0(1, 1) = 1.0;
    auto q = exp_conjugation_family(matrix_element(pi.codomain, p0), matrix_element(pi.codomain, skew(3, rng)));
    auto sec = make_section(pi, q, SectionStrategy::component_embed);
    CHECK(sec.lift(0.1).as<DualData>().nil.norm() == 0.0);
    auto sp = spectrum(sec.lift(0.0)).points;
    for (const auto& s : sp) CHECK(std::abs(s - 0.5) > 0.4);

    auto blk = make_block_algebra(2, 2);
    auto prod = make_product({make_matrix_algebra(2), make_matrix_algebra(2)});
    auto pb = block_hom(blk, prod, oracle::random_matrix(2, rng, 0.3), oracle::random_matrix(2, rng, 0.3));
    auto e = tuple_element(prod, {matrix_element(prod->children()[0], unit_matrix(2, 0, 0)),
                                  matrix_element(prod->children()[1], unit_matrix(2, 1, 1))});
    auto secb = make_section(pb, constant_family(e), SectionStrategy::component_embed);
    for (cd lambda : Grid{0.0, 0.5, 11}.points()) CHECK(section_defect(pb, secb, lambda) <= 1e-12);
}

TEST_CASE("kernel perturbation keeps the section property") {
    auto w = make_wiener_algebra(make_matrix_algebra(2), 5);
    auto pi = evaluation_hom(w);
    std::mt19937_64 rng(47);
    auto q = constant_family(matrix_element(pi.codomain, unit_matrix(2, 0, 0)));
    // (z - lambda) g(lambda)
    auto g = random_element(w, rng, 0.2);
    ElementFamily pert{w,
                       [w, g](cd lambda) {
                           auto c = g.as<SeriesData>().coeffs;
                           c.pop_back();
                           auto gl = series_element(w, c);
                           auto zl = series_element(w, {scalar(w->base(), -lambda), identity(w->base())});
                           return mul(zl, gl);
                       },
                       1.0, FamilyTag::none};
    auto sec = make_section(pi, q, SectionStrategy::constant_embed, pert);
    for (cd lambda : Grid{0.0, 0.5, 9}.points()) CHECK(section_defect(pi, sec, lambda) <= 1e-12);
}

TEST_CASE("symmetrize") {
    std::mt19937_64 rng(48);
    auto d = make_dual_algebra(3);
    auto pi = dual_hom(d, make_matrix_algebra(3));
    Matrix p0 = Matrix::Zero(3, 3);
    p0(0, 0) = 1.0;
    auto q = exp_conjugation_family(matrix_element(pi.codomain, p0), matrix_element(pi.codomain, skew(3, rng)));
    // add i * (self-adjoint kernel part)
    Matrix h = oracle::random_matrix(3, rng);
    h = h + h.adjoint().eval();
    auto ik = constant_family(dual_element(d, Matrix::Zero(3, 3), cd(0.0, 1.0) * h));
    auto sec = make_section(pi, q, SectionStrategy::component_embed, ik);
    auto sym = symmetrize(sec);
    auto plain = make_section(pi, q, SectionStrategy::component_embed);
    for (double lambda : {-0.5, -0.1, 0.0, 0.25, 0.5}) {
        auto a0 = sym.lift(lambda);
        CHECK(head_distance(adjoint(a0), a0) <= 1e-12);
        CHECK(section_defect(pi, sym, lambda) <= 1e-10);
        CHECK(head_distance(a0, plain.lift(lambda)) <= 1e-12);
    }
    // fixed point
    auto again = symmetrize(plain);
    CHECK(head_distance(again.lift(0.3), plain.lift(0.3)) <= 1e-12);

    auto blk = make_block_algebra(1, 1);
    auto prod = make_product({make_matrix_algebra(1), make_matrix_algebra(1)});
    auto pb = block_hom(blk, prod, Matrix::Zero(1, 1), Matrix::Zero(1, 1));
    auto sb = make_section(pb, constant_family(identity(prod)), SectionStrategy::component_embed);
    CHECK(code_of([&] { symmetrize(sb); }) == ErrorCode::no_involution);
}

TEST_CASE("exponential conjugation families of non-commuting generators") {
    auto m = make_matrix_algebra(2);
    auto e11 = matrix_element(m, unit_matrix(2, 0, 0));
    auto e12 = matrix_element(m, unit_matrix(2, 0, 1));
    auto q = exp_conjugation_family(e11, e12);
    CHECK(q.tag == FamilyTag::exponential_conjugation);
    for (cd lambda : Grid{0.0, 0.5, 9}.points()) {
        auto ql = q(lambda);
        CHECK(head_distance(mul(ql, ql), ql) <= 1e-13);
        // exp(-l E12) E11 exp(l E12) = E11 + l E12 exactly
        Matrix ref = unit_matrix(2, 0, 0) + lambda * unit_matrix(2, 0, 1);
        CHECK((ql.as<MatrixData>().value - ref).norm() <= 1e-14);
    }
    CHECK(head_distance(q(0.0), e11) == 0.0);
    CHECK(code_of([&] { exp_conjugation_family(e12, e11); }) == ErrorCode::not_idempotent_input);
}

TEST_CASE("skew generators give self-adjoint idempotent families on real lambda") {
    std::mt19937_64 rng(49);
    auto m = make_matrix_algebra(4);
    Matrix p0 = Matrix::Zero(4, 4);
    p0(0, 0) = p0(2, 2) = 1.0;
    auto q = exp_conjugation_family(matrix_element(m, p0), matrix_element(m, skew(4, rng)));
    for (double lambda : {-0.5, 0.1, 0.5}) {
        auto ql = q(lambda);
        CHECK(head_distance(adjoint(ql), ql) <= 1e-13);
        CHECK(head_distance(mul(ql, ql), ql) <= 1e-13);
    }
}

TEST_CASE("Harte inclusion on the block testbed") {
    std::mt19937_64 rng(50);
    auto blk = make_block_algebra(3, 2);
    auto prod = make_product({make_matrix_algebra(3), make_matrix_algebra(2)});
    auto pi = block_hom(blk, prod, oracle::random_matrix(3, rng, 0.3), oracle::random_matrix(2, rng, 0.3));
    for (int t = 0; t < 5; ++t) {
        auto x = random_element(blk, rng);
        auto res = harte_inclusion_check(pi, x, 0.0, 100, rng);
        CHECK(res.samples == 100);
        CHECK(res.max_excess <= 1e-8);
    }
}

TEST_CASE("polynomial families and Grid") {
    auto m = make_matrix_algebra(1);
    auto f = polynomial_family({scalar(m, 1.0), scalar(m, 2.0), scalar(m, 3.0)});
    CHECK(std::abs(f(0.5).as<MatrixData>().value(0, 0) - 2.75) <= 1e-15);
    auto pts = Grid{0.0, 0.5, 21}.points();
    CHECK(pts.size() == 21);
    CHECK(pts.front() == cd(-0.5));
    CHECK(pts.back() == cd(0.5));
    CHECK(pts[10] == cd(0.0));
    CHECK(Grid{0.2, 0.5, 1}.points() == std::vector<cd>{0.2});
    CHECK(code_of([] { Grid{0.0, 0.5, 0}.points(); }) == ErrorCode::invalid_parameter);
}
