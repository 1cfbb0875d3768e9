#include <algorithm>

#include "doctest.h"
#include "idemlift/cli.hpp"
#include "idemlift/scenarios.hpp"

using namespace idemlift;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::invalid_parameter;
}

nlohmann::json without_timings(nlohmann::json d) {
    d.erase("timings");
    return d;
}

ScenarioParams small_grid() {
    ScenarioParams p;
    p.grid = Grid{0.0, 0.5, 5};
    return p;
}

}  // namespace

TEST_CASE("every listed scenario builds and passes on a small grid") {
    for (const auto& id : scenario_ids()) {
        CAPTURE(id);
        const Scenario s = build_scenario(id, small_grid());
        CHECK(s.id == id);
        REQUIRE(s.A);
        REQUIRE(s.B);
        const LiftReport r = run_verification(s);
        CHECK(r.pass);
        CHECK(r.failures.empty());
        CHECK(r.document["status"] == "pass");
        CHECK(r.document["schema_version"] == kReportSchemaVersion);
        CHECK(exit_status(r) == 0);
    }
}

TEST_CASE("theorem paths and expected outcomes") {
    auto path = [](const std::string& id) { return run_verification(build_scenario(id, small_grid())).document["theorem_path"]; };
    CHECK(path("dual-testbed") == 1);
    CHECK(path("block-testbed") == 1);
    CHECK(path("dual-testbed-sa") == 2);
    CHECK(path("dual-family") == 3);
    CHECK(path("dual-family-sa") == 4);
    CHECK(path("remark3-probe").is_null());
    CHECK(build_scenario("remark3-probe").expected == ExpectedOutcome::hypothesis_violated_probe);
    CHECK(build_scenario("example1").tail_aware);
    CHECK(build_scenario("example3").mode == LiftMode::family);
    CHECK(build_scenario("example2").mode == LiftMode::trivial);
}

TEST_CASE("unknown scenario ids list the valid ones") {
    try {
        build_scenario("nope");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config_error);
        const std::string msg = e.what();
        for (const auto& id : scenario_ids()) CHECK(msg.find(id) != std::string::npos);
    }
}

TEST_CASE("builders validate their generators") {
    const Matrix K = Matrix::Zero(2, 2);
    Matrix not_idem = Matrix::Identity(2, 2);
    not_idem(0, 1) = 0.5;
    not_idem(1, 1) = 0.5;
    CHECK(code_of([&] { build_dual_testbed(2, K, not_idem, false); }) == ErrorCode::invalid_generator);
    Matrix not_skew = Matrix::Identity(2, 2);
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 1.0;
    CHECK(code_of([&] { build_dual_testbed(2, not_skew, p, true); }) == ErrorCode::invalid_generator);
    Matrix oblique = p;
    oblique(0, 1) = 1.0;
    CHECK(code_of([&] { build_dual_testbed(2, K, oblique, true); }) == ErrorCode::invalid_generator);
    CHECK(code_of([&] { build_dual_testbed(3, K, p, false); }) == ErrorCode::invalid_generator);
    CHECK(code_of([&] { build_dual_family(2, K, {p, p}, false); }) == ErrorCode::invalid_generator);
    CHECK(code_of([&] { build_dual_family(2, K, {}, false); }) == ErrorCode::invalid_parameter);
    CHECK(code_of([&] { build_block_testbed(0, 2); }) == ErrorCode::invalid_parameter);
    CHECK(code_of([&] { build_example1(make_matrix_algebra(2), 0); }) == ErrorCode::invalid_parameter);
}

TEST_CASE("reports are deterministic apart from timings") {
    for (const std::string id : {"dual-testbed", "dual-family", "example1"}) {
        CAPTURE(id);
        const auto a = run_verification(build_scenario(id, small_grid()));
        const auto b = run_verification(build_scenario(id, small_grid()));
        CHECK(without_timings(a.document).dump() == without_timings(b.document).dump());
        CHECK(a.csv == b.csv);
        // a serial lambda sweep is bitwise identical; the serial quadrature sums in another order
        LiftOptions serial_sweep;
        serial_sweep.parallel = false;
        const auto c = run_verification(build_scenario(id, small_grid()), serial_sweep);
        CHECK(without_timings(a.document).dump() == without_timings(c.document).dump());
        LiftOptions serial;
        serial.parallel = false;
        serial.quadrature.parallel = false;
        const auto d = run_verification(build_scenario(id, small_grid()), serial);
        CHECK(d.pass == a.pass);
        CHECK(d.document["theorem_path"] == a.document["theorem_path"]);
    }
}

TEST_CASE("the seed is echoed and changes the randomized parts") {
    ScenarioParams p = small_grid();
    p.seed = 7;
    const auto a = run_verification(build_scenario("dual-testbed", p));
    p.seed = 8;
    const auto b = run_verification(build_scenario("dual-testbed", p));
    CHECK(a.document["seed"] == 7);
    CHECK(b.document["seed"] == 8);
    CHECK(a.csv != b.csv);
}

TEST_CASE("a broken section fails with section-invalid and skips the lift") {
    ScenarioParams p = small_grid();
    p.section_offset = 0.5;
    const auto r = run_verification(build_scenario("dual-testbed", p));
    CHECK_FALSE(r.pass);
    CHECK(exit_status(r) == 1);
    REQUIRE_FALSE(r.failures.empty());
    CHECK(r.failures[0].rfind("section-invalid", 0) == 0);
    CHECK(r.document["lift"]["skipped"] == "section-invalid");
}

TEST_CASE("remark 3 probe reports no lift") {
    const auto r = run_verification(build_scenario("remark3-probe"));
    CHECK(r.pass);
    CHECK_FALSE(r.document.contains("lift"));
    CHECK(r.document["expected_outcome"] == "hypothesis-violated-probe");
    REQUIRE(r.document["probes"].size() == 1);
    CHECK(r.document["probes"][0]["name"] == "spectral-escape");
    CHECK(r.document["probes"][0]["pass"] == true);
}

TEST_CASE("series examples carry their probes") {
    auto names = [](const LiftReport& r) {
        std::vector<std::string> out;
        for (const auto& p : r.document["probes"]) {
            CHECK(p["pass"] == true);
            out.push_back(p["name"]);
        }
        return out;
    };
    const auto e1 = names(run_verification(build_scenario("example1", small_grid())));
    CHECK(std::find(e1.begin(), e1.end(), "norm-constancy") != e1.end());
    const auto e2 = names(run_verification(build_scenario("example2", small_grid())));
    CHECK(std::find(e2.begin(), e2.end(), "nilpotency") != e2.end());
    CHECK(std::find(e2.begin(), e2.end(), "factorial-decay") != e2.end());
    ScenarioParams nonmatrix = small_grid();
    nonmatrix.base = "convolution(4)";
    const Scenario s = build_scenario("example1", nonmatrix);
    CHECK(s.mode == LiftMode::probe);
    CHECK(run_verification(s).pass);
}

TEST_CASE("CSV rows have one line per grid point and step") {
    const auto r = run_verification(build_scenario("dual-family", small_grid()));
    const std::string header = "step,lambda_re,lambda_im,valid,idem,lift,comm,orth,eq2,eq5,eq17,sa,identity,oracle,tail";
    CHECK(r.csv.rfind(header + "\n", 0) == 0);
    CHECK(std::count(r.csv.begin(), r.csv.end(), '\n') == 1 + 3 * 5);
}

TEST_CASE("config files parse into scenario parameters") {
    const auto cfg = parse_config("# comment\nseed = 99\n grid = 0,0.25,3 \nn=5\ntol_lift = 1e-6  # inline\n\n");
    CHECK(cfg.at("seed") == "99");
    ScenarioParams p;
    apply_config(cfg, p);
    CHECK(p.seed == 99);
    CHECK(p.grid.count == 3);
    CHECK(p.grid.half_width == doctest::Approx(0.25));
    CHECK(p.n == 5);
    REQUIRE(p.tol.has_value());
    CHECK(p.tol->lift == doctest::Approx(1e-6));
    CHECK(p.tol->idem == doctest::Approx(Tolerances{}.idem));

    CHECK(code_of([] { parse_config("novalue\n"); }) == ErrorCode::config_error);
    CHECK(code_of([] {
              ScenarioParams q;
              apply_config({{"colour", "blue"}}, q);
          }) == ErrorCode::config_error);
    CHECK(code_of([] {
              ScenarioParams q;
              apply_config({{"tol_idem", "-1"}}, q);
          }) == ErrorCode::config_error);
    CHECK(code_of([] {
              ScenarioParams q;
              apply_config({{"n", "2.5"}}, q);
          }) == ErrorCode::config_error);
    CHECK(code_of([] { parse_grid("1,2"); }) == ErrorCode::config_error);
    CHECK(code_of([] { parse_grid("0,0.5,0"); }) == ErrorCode::config_error);
    const Grid g = parse_grid("0.1,-0.2,0.3,4");
    CHECK(g.center == cd(0.1, -0.2));
    CHECK(g.count == 4);
}
