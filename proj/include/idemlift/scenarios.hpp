#pragma once

// Worked examples and finite-dimensional testbeds, plus the verification
// report generator that runs a scenario end to end.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idemlift/families.hpp"
#include "idemlift/lifting.hpp"

namespace idemlift {

enum class ExpectedOutcome { lift_succeeds, hypothesis_violated_probe };
enum class LiftMode { local, local_sa, family, family_sa, trivial, probe };

std::string_view to_string(ExpectedOutcome outcome) noexcept;
std::string_view to_string(LiftMode mode) noexcept;

struct ProbeResult {
    bool pass = true;
    nlohmann::json detail;
};

/// Scenario-specific check that runs alongside (or instead of) the lift.
struct Probe {
    std::string name;
    std::function<ProbeResult()> run;
};

struct Scenario {
    std::string id;
    std::string summary;
    AlgebraPtr A, B;
    HomFamily pi;
    std::vector<ElementFamily> qs;
    std::vector<Section> sections;
    Grid grid;
    Tolerances tol;
    double oracle_tol = 1e-7;
    LiftMode mode = LiftMode::local;
    ExpectedOutcome expected = ExpectedOutcome::lift_succeeds;
    /// Add tail bounds of truncated series to every defect tolerance.
    bool tail_aware = false;
    std::uint64_t seed = 0;
    std::vector<Probe> probes;
    std::map<std::string, std::string> parameters;  // echoed into the report
};

/// Knobs shared by the builders; every field has a working default.
struct ScenarioParams {
    std::uint64_t seed = 12345;
    Grid grid{0.0, 0.5, 21};
    std::optional<Tolerances> tol;
    int n = 4;             // dual testbed / dual family size
    int k = 2, m = 2;      // block testbed
    int conv_grid = 8;     // N
    int degree = 16;       // wiener truncation D
    int n1 = 3;            // example3 matrix size
    std::string base = "matrix(2)";  // example1 base algebra
    /// Size of the kernel part of the sections; each builder has its own default.
    std::optional<double> perturbation;
    double twist = 0.3;              // block testbed homomorphism twist
    /// Non-kernel offset injected into the section, for negative tests.
    double section_offset = 0.0;
};

std::vector<std::string> scenario_ids();
/// Throws config-error listing the valid ids for an unknown id.
Scenario build_scenario(const std::string& id, const ScenarioParams& params = {});

Scenario build_example1(const AlgebraPtr& base, int degree, const ScenarioParams& params = {});
Scenario build_example2(int conv_grid, int degree, const ScenarioParams& params = {});
Scenario build_example3(int conv_grid, int degree, int n1, const ScenarioParams& params = {});
/// K skew and P0 a self-adjoint projection are required for the self-adjoint variant.
Scenario build_dual_testbed(int n, const Matrix& K, const Matrix& P0, bool self_adjoint,
                            const ScenarioParams& params = {});
Scenario build_block_testbed(int k, int m, const ScenarioParams& params = {});
/// Pairwise orthogonal families exp(lambda K) P_i exp(-lambda K) in M_n.
Scenario build_dual_family(int n, const Matrix& K, const std::vector<Matrix>& projections, bool self_adjoint,
                           const ScenarioParams& params = {});
Scenario remark3_probe(const ScenarioParams& params = {});

struct LiftReport {
    std::string scenario;
    bool pass = false;
    std::vector<std::string> failures;
    nlohmann::json document;  // full report; only "timings" varies between identical runs
    std::string csv;          // per-lambda defects
};

LiftReport run_verification(const Scenario& s, const LiftOptions& options = {});

/// 0 when the report passes, 1 otherwise.
int exit_status(const LiftReport& report) noexcept;

inline constexpr int kReportSchemaVersion = 1;

}  // namespace idemlift
