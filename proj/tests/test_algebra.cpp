#include <cmath>
#include <random>

#include "doctest.h"
#include "idemlift/algebra.hpp"
#include "idemlift/families.hpp"
#include "oracles.hpp"

using namespace idemlift;

namespace {

std::vector<AlgebraPtr> sample_algebras() {
    return {
        make_matrix_algebra(3),
        make_dual_algebra(3),
        make_block_algebra(2, 2),
        make_convolution_algebra(8),
        make_wiener_algebra(make_matrix_algebra(2), 4),
        make_unitization(make_convolution_algebra(8)),
        make_unitization(make_wiener_algebra(make_convolution_algebra(6), 3)),
        make_product({make_matrix_algebra(2), make_dual_algebra(2)}),
    };
}

Matrix m2(cd a, cd b, cd c, cd d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

TEST_CASE("descriptor parsing builds the documented kinds") {
    auto d = parse_algebra_descriptor("product(unitization(wiener(4, convolution(8))), matrix(3))");
    CHECK(d.kind == AlgebraKind::product);
    REQUIRE(d.children.size() == 2);
    CHECK(d.children[0].kind == AlgebraKind::unitization);
    CHECK(d.children[0].children[0].degree == 4);
    auto alg = build_algebra(d);
    CHECK(alg->describe() == "product(unitization(wiener(4,convolution(8))),matrix(3))");
    CHECK(alg->norm_kind() == "linf-sum");
    CHECK(build_algebra(parse_algebra_descriptor("block(2, 3)"))->block_lower_size() == 3);
    CHECK_THROWS_AS(parse_algebra_descriptor("matrix(2"), Error);
    CHECK_THROWS_AS(parse_algebra_descriptor("torus(2)"), Error);
}

TEST_CASE("invalid sizes are rejected") {
    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::config_error;
    };
    CHECK(code([] { make_matrix_algebra(0); }) == ErrorCode::invalid_parameter);
    CHECK(code([] { make_convolution_algebra(0); }) == ErrorCode::invalid_parameter);
    CHECK(code([] { make_wiener_algebra(make_matrix_algebra(1), -1); }) == ErrorCode::invalid_parameter);
    CHECK(code([] { make_unitization(make_matrix_algebra(2)); }) == ErrorCode::invalid_parameter);
}

TEST_CASE("matrix(1) is the scalar field") {
    auto c = make_matrix_algebra(1);
    Matrix v(1, 1);
    v(0, 0) = cd(2.0, -1.0);
    auto x = matrix_element(c, v);
    CHECK(std::abs(norm(x) - std::abs(cd(2.0, -1.0))) < 1e-15);
    CHECK(std::abs(spectrum(x).points.at(0) - cd(2.0, -1.0)) < 1e-15);
    CHECK(std::abs(inverse(x).as<MatrixData>().value(0, 0) - 1.0 / cd(2.0, -1.0)) < 1e-15);
}

TEST_CASE("unit law and ||1|| >= 1 in every unital kind") {
    std::mt19937_64 rng(1);
    for (const auto& alg : sample_algebras()) {
        CAPTURE(alg->describe());
        auto x = random_element(alg, rng);
        if (!alg->unital()) continue;
        auto one = identity(alg);
        CHECK(norm(one) >= 1.0);
        CHECK(head_distance(mul(one, x), x) == 0.0);
        CHECK(head_distance(mul(x, one), x) == 0.0);
    }
}

TEST_CASE("norm is submultiplicative on random pairs") {
    std::mt19937_64 rng(2);
    for (const auto& alg : sample_algebras()) {
        CAPTURE(alg->describe());
        const int pairs = alg->kind() == AlgebraKind::unitization ? 2000 : 10000;
        double worst = 0.0;
        for (int t = 0; t < pairs; ++t) {
            auto x = random_element(alg, rng);
            auto y = random_element(alg, rng);
            worst = std::max(worst, norm(mul(x, y)) / (norm(x) * norm(y)));
        }
        CHECK(worst <= 1.0 + 1e-12);
    }
}

TEST_CASE("dual-number multiplication and inversion") {
    auto a = make_dual_algebra(2);
    std::mt19937_64 rng(3);
    Matrix b0 = oracle::random_matrix(2, rng), b1 = oracle::random_matrix(2, rng);
    Matrix c0 = oracle::random_matrix(2, rng), c1 = oracle::random_matrix(2, rng);
    auto p = mul(dual_element(a, b0, b1), dual_element(a, c0, c1));
    CHECK((p.as<DualData>().head - b0 * c0).norm() < 1e-14);
    CHECK((p.as<DualData>().nil - (b0 * c1 + b1 * c0)).norm() < 1e-14);

    Matrix N = oracle::random_matrix(2, rng);
    auto inv = inverse(dual_element(a, Matrix::Identity(2, 2), N));
    CHECK((inv.as<DualData>().head - Matrix::Identity(2, 2)).norm() < 1e-14);
    CHECK((inv.as<DualData>().nil + N).norm() < 1e-14);
}

TEST_CASE("matrix inverse of [[2,1],[0,3]]") {
    auto a = make_matrix_algebra(2);
    auto inv = inverse(matrix_element(a, m2(2, 1, 0, 3)));
    CHECK((inv.as<MatrixData>().value - m2(0.5, -1.0 / 6.0, 0, 1.0 / 3.0)).norm() < 1e-15);
    CHECK_THROWS_AS(inverse(matrix_element(a, m2(1, 1, 1, 1))), Error);
    CHECK(head_distance(inverse(identity(a)), identity(a)) == 0.0);
}

TEST_CASE("block-triangular inverse and spectrum") {
    auto a = make_block_algebra(2, 1);
    std::mt19937_64 rng(4);
    Matrix x = oracle::random_matrix(2, rng) + 3.0 * Matrix::Identity(2, 2);
    Matrix y = Matrix::Random(2, 1);
    Matrix z = Matrix::Constant(1, 1, cd(2.0, 1.0));
    auto e = block_element(a, x, y, z);
    auto prod = mul(e, inverse(e));
    CHECK(head_distance(prod, identity(a)) < 1e-13);
    auto spec = spectrum(e).points;
    std::vector<cd> expected = eigenvalues(x);
    expected.push_back(cd(2.0, 1.0));
    CHECK(oracle::hausdorff(spec, expected) < 1e-12);
    CHECK_THROWS_AS(adjoint(e), Error);
}

TEST_CASE("convolution of constants integrates to t") {
    auto a = make_convolution_algebra(4);
    Vector ones = Vector::Ones(4);
    auto f = convolution_element(a, ones);
    auto g = mul(f, f);
    const Vector& s = g.as<SampleData>().samples;
    REQUIRE(s.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(s(i) - i / 4.0) < 1e-15);
    // faithful representation multiplies like the algebra
    auto L = [](const Element& e) { return *faithful_matrix(e); };
    CHECK((L(f) * L(f) - L(g)).norm() < 1e-15);
}

TEST_CASE("convolution elements are nilpotent of order N") {
    std::mt19937_64 rng(5);
    for (int N : {2, 5, 8, 16}) {
        auto a = make_convolution_algebra(N);
        for (int t = 0; t < 20; ++t) {
            auto x = random_element(a, rng);
            CHECK(is_exact_zero(power(x, N)));
            if (N > 2) CHECK_FALSE(is_exact_zero(power(x, N - 2)));
        }
    }
}

TEST_CASE("factorial decay of convolution powers of the constant 1") {
    for (int N : {16, 64, 256}) {
        auto a = make_convolution_algebra(N);
        auto f = convolution_element(a, Vector::Ones(N));
        Element fn = f;
        double fact = 1.0;
        for (int n = 1; n <= 6; ++n) {
            if (n > 1) fn = mul(fn, f);
            fact *= n;
            CAPTURE(N);
            CAPTURE(n);
            const double lhs = norm(fn);
            CHECK(lhs <= std::pow(norm(f), n) / fact * (1.0 + 10.0 / N));
            // the continuous value ||t^{n-1}/(n-1)!||_{L1[0,1]} = 1/n!
            CHECK(std::abs(lhs - 1.0 / fact) <= (1.0 / fact) * 10.0 * n / N);
        }
    }
}

TEST_CASE("adjoint laws and involution bounds") {
    std::mt19937_64 rng(6);
    for (const auto& alg : sample_algebras()) {
        if (!alg->has_involution()) continue;
        CAPTURE(alg->describe());
        for (int t = 0; t < 50; ++t) {
            auto x = random_element(alg, rng);
            auto y = random_element(alg, rng);
            CHECK(head_distance(adjoint(adjoint(x)), x) == 0.0);
            CHECK(head_distance(adjoint(mul(x, y)), mul(adjoint(y), adjoint(x))) <= 1e-13 * norm(x) * norm(y));
            CHECK(norm(adjoint(x)) <= alg->involution_bound() * norm(x) * (1.0 + 1e-12));
        }
    }
    auto a = make_matrix_algebra(2);
    auto n = matrix_element(a, m2(0, 1, 0, 0));
    CHECK((adjoint(n).as<MatrixData>().value - m2(0, 0, 1, 0)).norm() == 0.0);
}

TEST_CASE("wiener constants keep their norm and the adjoint bound is attained") {
    auto base = make_matrix_algebra(2);
    auto w = make_wiener_algebra(base, 5);
    std::mt19937_64 rng(7);
    auto c = random_element(base, rng);
    auto f = series_element(w, {c});
    CHECK(std::abs(norm(f) - norm(c)) < 1e-14);
    CHECK(std::abs(norm(adjoint(f)) - w->involution_bound() * norm(f)) < 1e-13);
}

TEST_CASE("wiener product tail follows the bound") {
    auto base = make_matrix_algebra(2);
    auto w = make_wiener_algebra(base, 3);
    std::mt19937_64 rng(8);
    auto x = series_element(w, random_element(w, rng).as<SeriesData>().coeffs, 0.01);
    auto y = series_element(w, random_element(w, rng).as<SeriesData>().coeffs, 0.02);
    auto p = mul(x, y);
    const double bound = head_norm(x) * 0.02 + 0.01 * head_norm(y) + 0.01 * 0.02;
    CHECK(tail_bound(p) >= bound);
    // discarded degree > D part is the remainder
    double discarded = 0.0;
    const auto& a = x.as<SeriesData>().coeffs;
    const auto& b = y.as<SeriesData>().coeffs;
    for (int m = 4; m <= 6; ++m) {
        Matrix acc = Matrix::Zero(2, 2);
        for (int j = m - 3; j <= 3; ++j) acc += a[j].as<MatrixData>().value * b[m - j].as<MatrixData>().value;
        discarded += oracle::opnorm(acc);
    }
    CHECK(std::abs(tail_bound(p) - bound - discarded) < 1e-12);
}

TEST_CASE("wiener inverse tail dominates the discarded coefficients") {
    auto base = make_matrix_algebra(2);
    auto small = make_wiener_algebra(base, 8);
    auto big = make_wiener_algebra(base, 40);
    std::mt19937_64 rng(9);
    std::vector<Element> coeffs{identity(base)};
    for (int k = 1; k <= 3; ++k) coeffs.push_back(random_element(base, rng, 0.15));
    auto fs = series_element(small, coeffs);
    auto fb = series_element(big, coeffs);
    auto gs = inverse(fs);
    auto gb = inverse(fb);
    double true_tail = 0.0;
    const auto& bc = gb.as<SeriesData>().coeffs;
    for (int k = 9; k <= 40; ++k) true_tail += norm(bc[k]);
    CHECK(tail_bound(gs) >= true_tail);
    for (int k = 0; k <= 8; ++k) CHECK(head_distance(gs.as<SeriesData>().coeffs[k], bc[k]) < 1e-13);
    CHECK(head_distance(mul(fs, gs), identity(small)) <= tail_bound(mul(fs, gs)) + 1e-13);
}

TEST_CASE("unitization inverse and one-point spectrum") {
    std::mt19937_64 rng(10);
    auto u = make_unitization(make_convolution_algebra(12));
    for (int t = 0; t < 10; ++t) {
        auto x = random_element(u, rng);
        auto spec = spectrum(x);
        REQUIRE(spec.points.size() == 1);
        CHECK(spec.points[0] == x.as<UnitData>().scalar);
        CHECK(spec.exact);
        CHECK(head_distance(mul(x, inverse(x)), identity(u)) < 1e-11 * norm(x) * norm(inverse(x)));
        // faithful matrix check of the inverse
        const Matrix m = *faithful_matrix(x);
        CHECK((*faithful_matrix(inverse(x)) - m.inverse()).norm() < 1e-10 * (1.0 + m.inverse().norm()));
    }
    auto f = random_element(u->base(), rng);
    auto elem = unit_element(u, f, 0.0);
    CHECK_THROWS_AS(inverse(elem), Error);
    CHECK(std::abs(norm(unit_element(u, f, 2.0)) - (norm(f) + 2.0)) < 1e-14);
}

TEST_CASE("unitization over wiener-over-convolution inverts with a tail") {
    std::mt19937_64 rng(11);
    auto u = make_unitization(make_wiener_algebra(make_convolution_algebra(6), 4));
    auto x = unit_element(u, random_element(u->base(), rng, 0.3), cd(1.5, 0.2));
    auto y = inverse(x);
    CHECK(head_distance(mul(x, y), identity(u)) <= 1e-12 + tail_bound(mul(x, y)));
}

TEST_CASE("product norm is the max and spectrum the union") {
    auto p = make_product({make_matrix_algebra(2), make_unitization(make_convolution_algebra(4))});
    std::mt19937_64 rng(12);
    auto x = random_element(p, rng);
    const auto& parts = x.as<TupleData>().parts;
    CHECK(norm(x) == std::max(norm(parts[0]), norm(parts[1])));
    auto spec = spectrum(x).points;
    auto expected = spectrum(parts[0]).points;
    expected.push_back(parts[1].as<UnitData>().scalar);
    CHECK(oracle::hausdorff(spec, expected) == 0.0);
}

TEST_CASE("spectrum examples") {
    auto a = make_matrix_algebra(2);
    auto n = matrix_element(a, m2(0, 1, 0, 0));
    for (const auto& s : spectrum(n).points) CHECK(std::abs(s) < 1e-15);
    for (const auto& s : spectrum(identity(a)).points) CHECK(s == cd(1.0));
    auto conv = make_convolution_algebra(5);
    std::mt19937_64 rng(13);
    CHECK(spectrum(random_element(conv, rng)).points == std::vector<cd>{0.0});
}

TEST_CASE("dual spectrum agrees with the faithful block representation") {
    std::mt19937_64 rng(14);
    auto a = make_dual_algebra(3);
    for (int t = 0; t < 50; ++t) {
        auto x = random_element(a, rng);
        CHECK(oracle::hausdorff(spectrum(x).points, eigenvalues(*faithful_matrix(x))) <= 1e-8);
    }
}

TEST_CASE("spectral mapping for polynomials of degree <= 4") {
    std::mt19937_64 rng(15);
    auto a = make_matrix_algebra(4);
    for (int t = 0; t < 50; ++t) {
        auto x = random_element(a, rng, 0.5);
        std::vector<cd> c;
        for (int k = 0; k <= 4; ++k) c.push_back(oracle::normal(rng));
        Element gx = scalar(a, c[4]);
        for (int k = 3; k >= 0; --k) gx = shift(mul(gx, x), c[k]);
        std::vector<cd> image;
        for (const auto& s : spectrum(x).points) {
            cd v = c[4];
            for (int k = 3; k >= 0; --k) v = v * s + c[k];
            image.push_back(v);
        }
        CHECK(oracle::hausdorff(spectrum(gx).points, image) <= 1e-8);
    }
}

TEST_CASE("wiener spectrum is sampled over circles") {
    auto base = make_matrix_algebra(1);
    auto w = make_wiener_algebra(base, 2);
    Matrix one = Matrix::Ones(1, 1);
    auto f = series_element(w, {matrix_element(base, 0.0 * one), matrix_element(base, one)});
    auto spec = spectrum(f);
    CHECK_FALSE(spec.exact);
    CHECK(std::abs(spec.radius - 1.0) < 1e-14);
}

TEST_CASE("exponential matches the eigen-decomposition oracle") {
    std::mt19937_64 rng(16);
    auto a = make_matrix_algebra(3);
    for (int t = 0; t < 20; ++t) {
        Vector d(3);
        for (int i = 0; i < 3; ++i) d(i) = 2.0 * oracle::normal(rng);
        auto m = oracle::diagonalizable(d, rng);
        auto e = exponential(matrix_element(a, m.a));
        Matrix ref = oracle::apply_diagonal(m, [](cd z) { return std::exp(z); });
        CHECK((e.as<MatrixData>().value - ref).norm() <= 1e-11 * ref.norm());
    }
}
