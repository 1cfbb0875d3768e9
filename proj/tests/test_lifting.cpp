#include <cmath>
#include <random>

#include "doctest.h"
#include "idemlift/lifting.hpp"
#include "idemlift/oracle.hpp"
#include "idemlift/scenarios.hpp"
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

Matrix skew(int n, std::mt19937_64& rng, double s = 0.5) {
    Matrix k = oracle::random_matrix(n, rng, s);
    return 0.5 * (k - k.adjoint());
}

Matrix diag_projection(int n, int r) {
    Matrix p = Matrix::Zero(n, n);
    for (int i = 0; i < r; ++i) p(i, i) = 1.0;
    return p;
}

struct DualSetup {
    AlgebraPtr A, B;
    HomFamily pi;
    ElementFamily q;
    Section sec;
};

/// q(lambda) = exp(lambda K) P exp(-lambda K) on M_n, lifted to M_n[eps] with kernel (N0 + lambda N1) eps.
DualSetup dual_setup(int n, std::mt19937_64& rng, bool self_adjoint, double pert = 0.2) {
    DualSetup d;
    d.A = make_dual_algebra(n);
    d.B = make_matrix_algebra(n);
    d.pi = dual_hom(d.A, d.B);
    Matrix P = diag_projection(n, n / 2);
    if (!self_adjoint) {
        const Matrix v = Matrix::Identity(n, n) + oracle::random_matrix(n, rng, 0.1);
        P = v * P * v.inverse();
    }
    const Matrix K = self_adjoint ? skew(n, rng) : oracle::random_matrix(n, rng, 0.3);
    d.q = exp_conjugation_family(matrix_element(d.B, P), matrix_element(d.B, -K));
    const Matrix z = Matrix::Zero(n, n);
    auto kernel = polynomial_family({dual_element(d.A, z, oracle::random_matrix(n, rng, pert)),
                                     dual_element(d.A, z, oracle::random_matrix(n, rng, pert))});
    d.sec = make_section(d.pi, d.q, SectionStrategy::component_embed, kernel);
    return d;
}

Matrix faithful(const Element& x) {
    auto m = faithful_matrix(x);
    REQUIRE(m.has_value());
    return *m;
}

}  // namespace

TEST_CASE("lift_trivial returns constants only for one-point spectra") {
    const auto M = make_matrix_algebra(3);
    auto zero_lift = lift_trivial(constant_family(zero(M)));
    REQUIRE(zero_lift.has_value());
    CHECK(head_norm((*zero_lift)(0.3)) == 0.0);
    auto one_lift = lift_trivial(constant_family(identity(M)));
    REQUIRE(one_lift.has_value());
    CHECK(head_distance((*one_lift)(-0.2), identity(M)) == 0.0);
    CHECK_FALSE(lift_trivial(constant_family(matrix_element(M, diag_projection(3, 1)))).has_value());
}

TEST_CASE("choose_sign singles out the candidate in the kernel") {
    CHECK(choose_sign(0.0, 1.0, 1e-8) == +1);
    CHECK(choose_sign(1.0, 1e-12, 1e-8) == -1);
    CHECK(code_of([] { choose_sign(0.0, 0.0, 1e-8); }) == ErrorCode::ambiguous_sign);
    CHECK(code_of([] { choose_sign(0.5, 0.5, 1e-8); }) == ErrorCode::ambiguous_sign);
}

TEST_CASE("validity_radius counts whole shells only") {
    const std::vector<cd> l = {-0.2, -0.1, 0.0, 0.1, 0.2};
    CHECK(validity_radius(l, {true, true, true, true, true}, 0.0) == doctest::Approx(0.2));
    CHECK(validity_radius(l, {true, true, true, true, false}, 0.0) == doctest::Approx(0.1));
    CHECK(validity_radius(l, {true, false, true, true, true}, 0.0) == 0.0);
    CHECK(validity_radius(l, {true, true, false, true, true}, 0.0) == 0.0);
    CHECK(validity_radius({0.0, 0.3}, {true, true}, 0.3) == doctest::Approx(0.3));
}

TEST_CASE("dual testbed lift matches eigenprojector and square-zero oracles") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 2 + trial % 3;
        const auto d = dual_setup(n, rng, false);
        const Grid grid{0.0, 0.5, 11};
        const LiftTrace tr = lift_local(d.pi, d.q, d.sec, grid);
        CHECK(tr.theorem == 1);
        CHECK(tr.validity_radius == doctest::Approx(0.5));
        for (const auto& pt : tr.points) {
            REQUIRE(pt.valid);
            const Matrix A = faithful(*pt.a);
            const Matrix P = faithful(*pt.p);
            CHECK(oracle::opnorm(P - oracle::square_zero_projector(A)) < 1e-9);
            CHECK(oracle::opnorm(P - schur_spectral_projector(A, [](cd s) { return s.real() > 0.5; })) < 1e-9);
            CHECK(pt.idem < 1e-9);
            CHECK(pt.lift < 1e-9);
            CHECK(pt.comm < 1e-9);
            CHECK(pt.eq2 < 1e-9);
            CHECK(pt.eq5 < 1e-9);
            CHECK(pt.kernel < 1e-9);
        }
    }
}

TEST_CASE("block testbed lift matches the square-zero and Schur oracles") {
    ScenarioParams params;
    params.grid = Grid{0.0, 0.5, 9};
    const Scenario s = build_block_testbed(2, 3, params);
    const LiftTrace tr = lift_local(s.pi, s.qs[0], s.sections[0], s.grid);
    for (const auto& pt : tr.points) {
        REQUIRE(pt.valid);
        const Matrix A = faithful(*pt.a);
        // a^2 - a is square-zero but nonzero, so A is defective
        CHECK(oracle::opnorm(faithful(*pt.p) - oracle::square_zero_projector(A)) < 1e-9);
        CHECK(oracle::opnorm(faithful(*pt.p) - schur_spectral_projector(A, [](cd z) { return z.real() > 0.5; })) < 1e-8);
        CHECK(pt.lift < 1e-9);
    }
}

TEST_CASE("the branch sheet does not change the lift") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 4; ++trial) {
        const auto d = dual_setup(4, rng, false);
        const Grid grid{0.0, 0.4, 5};
        LiftOptions plus, minus;
        minus.branch_sheet = -1;
        const auto tp = lift_local(d.pi, d.q, d.sec, grid, plus);
        const auto tm = lift_local(d.pi, d.q, d.sec, grid, minus);
        CHECK(tp.sheet == tm.sheet);
        for (std::size_t i = 0; i < tp.points.size(); ++i) {
            REQUIRE(tp.points[i].valid);
            REQUIRE(tm.points[i].valid);
            CHECK(head_distance(*tp.points[i].p, *tm.points[i].p) < 1e-10);
        }
    }
}

TEST_CASE("lifted family reproduces the grid values off the grid") {
    std::mt19937_64 rng(8);
    const auto d = dual_setup(4, rng, false);
    const auto tr = lift_local(d.pi, d.q, d.sec, Grid{0.0, 0.5, 3});
    const Element p = tr.family(cd(0.1, 0.2));
    CHECK(head_distance(mul(p, p), p) < 1e-9);
    CHECK(head_distance(d.pi.apply(cd(0.1, 0.2), p), d.q(cd(0.1, 0.2))) < 1e-9);
    CHECK(head_distance(tr.family(0.5), *tr.points.back().p) < 1e-12);
}

TEST_CASE("self-adjoint lift: Riesz projection, identity and self-adjointness") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 4; ++trial) {
        const auto d = dual_setup(4, rng, true);
        const LiftTrace tr = lift_local_sa(d.pi, d.q, d.sec, Grid{0.0, 0.5, 11});
        CHECK(tr.theorem == 2);
        REQUIRE(tr.pair.size() == 2);
        for (const auto& pt : tr.points) {
            REQUIRE(pt.valid);
            CHECK(pt.sa < 1e-9);
            CHECK(pt.identity < 1e-9);
            CHECK(pt.idem < 1e-9);
            CHECK(pt.lift < 1e-9);
            const Matrix A = faithful(*pt.a);
            CHECK(oracle::opnorm(faithful(*pt.p) - oracle::square_zero_projector(A)) < 1e-9);
        }
        // the symmetrized section is self-adjoint on the real axis
        CHECK(head_distance(*tr.points[3].a, adjoint(*tr.points[3].a)) < 1e-12);
    }
}

TEST_CASE("lift preconditions are reported with their codes") {
    std::mt19937_64 rng(2);
    auto d = dual_setup(2, rng, false);
    Section off = d.sec;
    off.lift.eval = [inner = d.sec.lift](cd l) { return shift(inner(l), 0.5); };
    CHECK(code_of([&] { lift_local(d.pi, d.q, off, Grid{}); }) == ErrorCode::section_invalid);

    const auto M = make_matrix_algebra(2);
    Matrix h = Matrix::Identity(2, 2);
    h(0, 0) = 0.5;
    const auto half = constant_family(matrix_element(M, h));
    CHECK(code_of([&] { lift_local(identity_hom(M), half, Section{half, half}, Grid{}); }) ==
          ErrorCode::half_in_spectrum);

    const Scenario block = build_block_testbed(2, 2);
    CHECK(code_of([&] { lift_local_sa(block.pi, block.qs[0], block.sections[0], Grid{}); }) ==
          ErrorCode::not_star_compatible);
}

TEST_CASE("frozen enclosures fail away from lambda = 0 for a large perturbation") {
    ScenarioParams params;
    params.perturbation = 0.2;
    const Scenario s = build_example1(make_matrix_algebra(2), 16, params);
    const LiftTrace tr = lift_local(s.pi, s.qs[0], s.sections[0], s.grid);
    CHECK(tr.validity_radius < 0.5);
    bool any_invalid = false;
    for (const auto& pt : tr.points)
        if (!pt.valid) {
            any_invalid = true;
            CHECK_FALSE(pt.reason.empty());
            CHECK(code_of([&] { tr.family(pt.lambda); }) == ErrorCode::enclosure_failed);
        }
    CHECK(any_invalid);
}

TEST_CASE("choose_eps0 returns the largest admissible dyadic radius") {
    // Closed-form worst cases on |s| = e: s = -e for |4s/(1+4s)| and both roots of u^2 - u = s.
    auto admissible = [](double e) {
        for (int j = 0; j < 4096; ++j) {
            const cd s = std::polar(e, 2.0 * M_PI * j / 4096);
            const cd root = std::sqrt(1.0 + 4.0 * s);
            const cd u0 = 0.5 * (1.0 - root), u1 = 0.5 * (1.0 + root);
            auto near = [](cd t) { return std::abs(t) < 1.0 / 3.0 || std::abs(1.0 - t) < 1.0 / 3.0; };
            if (!near(u0) || !near(u1) || !(std::abs(4.0 * s / (1.0 + 4.0 * s)) < 1.0 / 3.0)) return false;
        }
        return true;
    };
    const double e0 = choose_eps0({0.0});
    CHECK(admissible(e0 * (1 - 1e-9)));
    CHECK_FALSE(admissible(2.0 * e0));
    CHECK(choose_eps0({0.01}) == e0);
    CHECK(choose_eps0({0.9 * e0}) == e0);
    CHECK(choose_eps0({0.3 * e0, e0 * cd(0.0, 0.5)}) == e0);
    CHECK(code_of([&] { choose_eps0({1.5 * e0}); }) == ErrorCode::enclosure_failed);
}

TEST_CASE("one-family lift agrees with the local lift") {
    std::mt19937_64 rng(41);
    const auto d = dual_setup(4, rng, false, 0.05);
    const Grid grid{0.0, 0.4, 5};
    const auto local = lift_local(d.pi, d.q, d.sec, grid);
    const auto fam = lift_family(d.pi, {d.q}, {d.sec}, grid, false);
    REQUIRE(fam.steps.size() == 1);
    for (std::size_t i = 0; i < grid.points().size(); ++i) {
        REQUIRE(fam.steps[0].points[i].valid);
        CHECK(head_distance(*fam.steps[0].points[i].f, *local.points[i].p) < 1e-9);
    }
}

TEST_CASE("three orthogonal families in M_4[eps]") {
    std::mt19937_64 rng(77);
    for (bool sa : {false, true}) {
        const int n = 4;
        const auto A = make_dual_algebra(n);
        const auto B = make_matrix_algebra(n);
        const auto pi = dual_hom(A, B);
        const Matrix v = sa ? Matrix(Matrix::Identity(n, n)) : Matrix(Matrix::Identity(n, n) + oracle::random_matrix(n, rng, 0.1));
        const Matrix K = sa ? skew(n, rng, 0.3) : oracle::random_matrix(n, rng, 0.2);
        std::vector<ElementFamily> qs;
        std::vector<Section> secs;
        for (int i = 0; i < 3; ++i) {
            Matrix e = Matrix::Zero(n, n);
            e(i, i) = 1.0;
            qs.push_back(exp_conjugation_family(matrix_element(B, v * e * v.inverse()), matrix_element(B, -K)));
            auto kernel = polynomial_family(
                {dual_element(A, Matrix::Zero(n, n), oracle::random_matrix(n, rng, 0.05)),
                 dual_element(A, Matrix::Zero(n, n), oracle::random_matrix(n, rng, 0.05))});
            secs.push_back(make_section(pi, qs.back(), SectionStrategy::component_embed, kernel));
        }
        const Grid grid{0.0, 0.5, 7};
        const FamilyLift fl = lift_family(pi, qs, secs, grid, sa);
        REQUIRE(fl.steps.size() == 3);
        CHECK(fl.validity_radius == doctest::Approx(0.5));
        const auto lambdas = grid.points();
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            Matrix E = Matrix::Zero(2 * n, 2 * n);
            Element sum = zero(A);
            std::vector<Element> fs;
            for (std::size_t k = 0; k < 3; ++k) {
                const auto& pt = fl.steps[k].points[i];
                REQUIRE(pt.valid);
                const Matrix Bk = faithful(*pt.b);
                const Matrix I = Matrix::Identity(2 * n, 2 * n);
                const Matrix expected = oracle::square_zero_projector((I - E) * Bk * (I - E));
                CHECK(oracle::opnorm(faithful(*pt.f) - expected) < 1e-8);
                E += expected;
                CHECK(pt.idem < 1e-9);
                CHECK(pt.orth < 1e-9);
                CHECK(pt.lift < 1e-9);
                CHECK(pt.eq2 < 1e-9);
                CHECK(pt.eq5 < 1e-9);
                CHECK(pt.eq17 < 1e-9);
                CHECK(pt.comm < 1e-9);
                if (sa) CHECK(pt.sa < 1e-9);
                fs.push_back(*pt.f);
                sum = add(sum, *pt.f);
                CHECK(head_distance(mul(sum, sum), sum) < 1e-9);
            }
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b)
                    if (a != b) CHECK(head_norm(mul(fs[a], fs[b])) < 1e-9);
        }
        const Element f2 = fl.families[1](cd(0.05, -0.1));
        CHECK(head_distance(mul(f2, f2), f2) < 1e-9);
        CHECK(head_distance(pi.apply(cd(0.05, -0.1), f2), qs[1](cd(0.05, -0.1))) < 1e-9);
    }
}

TEST_CASE("lift_family rejects non-orthogonal inputs") {
    const auto A = make_dual_algebra(2);
    const auto B = make_matrix_algebra(2);
    const auto pi = dual_hom(A, B);
    const auto q = constant_family(matrix_element(B, diag_projection(2, 1)));
    const auto sec = make_section(pi, q, SectionStrategy::component_embed);
    CHECK(code_of([&] { lift_family(pi, {q, q}, {sec, sec}, Grid{}, false); }) == ErrorCode::hypothesis_failed);
    CHECK(code_of([&] { lift_family(pi, {}, {}, Grid{}, false); }) == ErrorCode::invalid_parameter);
}
