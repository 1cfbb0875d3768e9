#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "idemlift/oracle.hpp"
#include "idemlift/scenarios.hpp"

namespace idemlift {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kVersion = "0.1.0";

json cdj(cd z) { return json::array({z.real(), z.imag()}); }

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

std::string lambda_text(cd z) {
    std::ostringstream os;
    os.precision(6);
    os << z.real();
    if (z.imag() != 0.0) os << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
    return os.str();
}

json tol_json(const Tolerances& t, double oracle) {
    return {{"idem", t.idem}, {"comm", t.comm},         {"lift", t.lift}, {"orth", t.orth},
            {"residual", t.residual}, {"sa", t.sa}, {"oracle", oracle}};
}

/// Collects threshold violations; one failure line per metric with its worst lambda.
class Checker {
public:
    void check(const std::string& metric, double value, double limit, cd lambda) {
        if (value <= limit) return;
        auto& v = seen_[metric];
        ++v.count;
        if (v.count == 1 || value > v.worst) {
            v.worst = value;
            v.limit = limit;
            v.lambda = lambda;
        }
    }
    void emit(std::vector<std::string>& failures) const {
        for (const auto& [name, v] : seen_)
            failures.push_back(name + " " + sci(v.worst) + " exceeds " + sci(v.limit) + " at lambda = " +
                               lambda_text(v.lambda) + " (" + std::to_string(v.count) + " point" +
                               (v.count == 1 ? "" : "s") + ")");
    }

private:
    struct Violation {
        int count = 0;
        double worst = 0.0;
        double limit = 0.0;
        cd lambda;
    };
    std::map<std::string, Violation> seen_;
};

/// Dense pictures of x that every homomorphism-compatible oracle can use: the faithful matrix,
/// or for series algebras the faithful matrices of a few point evaluations.
std::vector<Matrix> views(const Scenario& s, const Element& x) {
    if (auto m = faithful_matrix(x)) return {*m};
    std::vector<Matrix> out;
    if (s.pi.tag == FamilyTag::evaluation_hom)
        for (cd zeta : {cd(0.0), cd(0.5), cd(-0.4, 0.3)})
            if (auto m = faithful_matrix(s.pi.apply(zeta, x))) out.push_back(*m);
    return out;
}

double views_distance(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) d = std::max(d, operator_norm(a[i] - b[i]));
    return d;
}

json opt_number(bool present, double v) { return present ? json(v) : json(nullptr); }

bool is_sa(LiftMode m) { return m == LiftMode::local_sa || m == LiftMode::family_sa; }
bool is_family(LiftMode m) { return m == LiftMode::family || m == LiftMode::family_sa || m == LiftMode::trivial; }

struct Hypotheses {
    json list = json::array();
    bool section_ok = true;
    bool kernel_global = false;
};

void record(Hypotheses& h, std::vector<std::string>& failures, const std::string& name, json pass, json detail) {
    h.list.push_back({{"name", name}, {"pass", pass}, {"detail", std::move(detail)}});
    if (pass.is_boolean() && !pass.get<bool>()) failures.push_back("hypothesis-failed: " + name);
}

Hypotheses check_hypotheses(const Scenario& s, std::vector<std::string>& failures) {
    Hypotheses h;
    std::mt19937_64 rng(s.seed + 101);
    const auto lambdas = s.grid.points();

    if (s.pi.right_inverse) {
        double worst = 0.0;
        for (int t = 0; t < 5; ++t) {
            const Element b = random_element(s.B, rng);
            worst = std::max(worst, head_distance(s.pi.apply(0.0, s.pi.right_inverse(0.0, b)), b));
        }
        record(h, failures, "surjective-at-base", worst <= 1e-10, {{"method", "right inverse"}, {"max_defect", worst}});
    } else {
        record(h, failures, "surjective-at-base", nullptr, {{"method", "no right inverse available"}});
    }

    if (s.mode == LiftMode::probe) return h;

    // spectral condition on the kernel
    if (s.pi.kernel_sample) {
        auto radius_at = [&](cd lambda, bool& finite) {
            double r = 0.0;
            for (int t = 0; t < 4; ++t) {
                const Element k = s.pi.kernel_sample(lambda, rng);
                finite = finite && faithful_matrix(k).has_value();
                r = std::max(r, spectrum(k).radius);
            }
            return r;
        };
        bool finite = true;
        const double base = radius_at(0.0, finite);
        if (is_family(s.mode)) {
            double grid_r = base;
            for (cd l : lambdas) grid_r = std::max(grid_r, radius_at(l, finite));
            h.kernel_global = grid_r <= 1e-8;
            record(h, failures, "kernel-spectrum", base <= 1e-8,
                   {{"required", "{0}"},
                    {"spectral_radius_at_base", base},
                    {"spectral_radius_on_grid", grid_r},
                    {"holds_on_grid", h.kernel_global}});
        } else if (finite) {
            record(h, failures, "kernel-spectrum", true,
                   {{"required", s.mode == LiftMode::local ? "does not disconnect C" : "totally disconnected"},
                    {"method", "finite-dimensional kernel, finite spectra"}});
        } else {
            record(h, failures, "kernel-spectrum", nullptr,
                   {{"required", s.mode == LiftMode::local ? "does not disconnect C" : "totally disconnected"},
                    {"method", "not verifiable for series algebras; the escape arc is built for the spectrum "
                               "actually used at lambda = 0"}});
        }
    }

    double idem = 0.0, orth = 0.0, sa = 0.0;
    for (cd l : lambdas) {
        std::vector<Element> q;
        for (const auto& f : s.qs) q.push_back(f(l));
        for (std::size_t i = 0; i < q.size(); ++i) {
            idem = std::max(idem, head_distance(mul(q[i], q[i]), q[i]));
            if (is_sa(s.mode) && l.imag() == 0.0) sa = std::max(sa, head_distance(adjoint(q[i]), q[i]));
            for (std::size_t j = i + 1; j < q.size(); ++j)
                orth = std::max({orth, head_norm(mul(q[i], q[j])), head_norm(mul(q[j], q[i]))});
        }
    }
    record(h, failures, "inputs-idempotent", idem <= s.tol.idem, {{"max_defect", idem}});
    if (s.qs.size() > 1) record(h, failures, "inputs-orthogonal", orth <= s.tol.orth, {{"max_defect", orth}});
    if (is_sa(s.mode)) {
        record(h, failures, "inputs-self-adjoint", sa <= s.tol.sa, {{"max_defect", sa}});
        double star = 0.0;
        bool applicable = s.A->has_involution() && s.B->has_involution();
        if (applicable)
            for (cd l : lambdas) {
                if (l.imag() != 0.0) continue;
                const Element x = random_element(s.A, rng);
                star = std::max(star, head_distance(s.pi.apply(l, adjoint(x)), adjoint(s.pi.apply(l, x))));
            }
        record(h, failures, "star-homomorphism", applicable && s.pi.star_on_real && star <= 1e-10,
               {{"max_defect", star}});
    }

    double sec_base = 0.0, sec_grid = 0.0;
    for (const auto& sec : s.sections) {
        sec_base = std::max(sec_base, section_defect(s.pi, sec, 0.0));
        for (cd l : lambdas) sec_grid = std::max(sec_grid, section_defect(s.pi, sec, l));
    }
    h.section_ok = sec_base <= s.tol.lift && sec_grid <= s.tol.lift;
    h.list.push_back({{"name", "section"}, {"pass", h.section_ok},
                      {"detail", {{"defect_at_base", sec_base}, {"max_defect_on_grid", sec_grid}}}});
    if (!h.section_ok)
        failures.push_back("section-invalid: pi(lambda) a(lambda) misses q(lambda) by " + sci(std::max(sec_base, sec_grid)));

    if (s.mode == LiftMode::local && h.section_ok) {
        double gap = std::numeric_limits<double>::infinity();
        for (const auto& p : spectrum(s.sections[0].lift(0.0)).points) gap = std::min(gap, std::abs(p - 0.5));
        record(h, failures, "half-not-in-spectrum", gap > 1e-8, {{"distance", gap}});
    }
    return h;
}

json arc_json(const PolygonalArc& P) {
    json v = json::array();
    for (const auto& z : P.vertices) v.push_back(cdj(z));
    return {{"vertices", v}, {"direction", cdj(P.direction)}, {"simple", arc_is_simple(P)}};
}

json polygon_json(const JordanPolygon& g) {
    json v = json::array();
    for (const auto& z : g.vertices) v.push_back(cdj(z));
    return {{"vertices", v}, {"orientation", g.orientation}, {"simple", polygon_is_simple(g)},
            {"signed_area", signed_area(g)}};
}

json contour_json(const ContourData& c) {
    json curves = json::array();
    for (const auto& cv : c.curves) {
        if (cv.shape == Curve::Shape::polygon) curves.push_back({{"polygon", polygon_json(cv.polygon)}});
        else curves.push_back({{"circle", {{"center", cdj(cv.circle.center)}, {"radius", cv.circle.radius}}}});
    }
    json out = {{"curves", curves}, {"eps", c.eps}};
    if (c.branch.kind == BranchKind::cut) out["cut"] = arc_json(c.branch.cut);
    return out;
}

struct Outcome {
    json lift;
    std::string csv;
    std::optional<int> theorem;
};

const char* kCsvHeader = "step,lambda_re,lambda_im,valid,idem,lift,comm,orth,eq2,eq5,eq17,sa,identity,oracle,tail\n";

std::string csv_num(bool present, double v) {
    if (!present) return "";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

Outcome run_local(const Scenario& s, const LiftOptions& options, Checker& ck, std::vector<std::string>& failures) {
    Outcome out;
    const bool sa = s.mode == LiftMode::local_sa;
    out.theorem = sa ? 2 : 1;
    const LiftTrace trace = sa ? lift_local_sa(s.pi, s.qs[0], s.sections[0], s.grid, options)
                               : lift_local(s.pi, s.qs[0], s.sections[0], s.grid, options);
    json points = json::array();
    std::ostringstream csv;
    csv << kCsvHeader;
    int valid_count = 0;
    json first_invalid = nullptr;
    for (const auto& pt : trace.points) {
        double oracle = 0.0;
        bool has_oracle = false;
        if (pt.valid) {
            ++valid_count;
            const auto va = views(s, *pt.a), vp = views(s, *pt.p);
            if (!va.empty()) {
                std::vector<Matrix> ref;
                for (const auto& m : va) ref.push_back(projector_near_one(m));
                oracle = views_distance(vp, ref);
                has_oracle = true;
            }
            const double tail = s.tail_aware ? pt.tail : 0.0;
            const Tolerances& t = s.tol;
            ck.check("idempotency defect", pt.idem, t.idem + tail, pt.lambda);
            ck.check("lifting defect", pt.lift, t.lift + tail, pt.lambda);
            ck.check("commutation defect", pt.comm, t.comm + tail, pt.lambda);
            if (has_oracle) ck.check("oracle disagreement", oracle, s.oracle_tol + tail, pt.lambda);
            if (sa) {
                ck.check("self-adjointness defect", pt.sa, t.sa + tail, pt.lambda);
                ck.check("identity a - p = (a^2 - a)(a1 - a0) defect", pt.identity, t.residual + tail, pt.lambda);
            } else {
                ck.check("eq2 residual", pt.eq2, t.residual + tail, pt.lambda);
                ck.check("eq5 residual", pt.eq5, t.residual + tail, pt.lambda);
                ck.check("kernel residual ||pi x||", pt.kernel, t.lift + tail, pt.lambda);
            }
        } else if (first_invalid.is_null()) {
            first_invalid = {{"lambda", cdj(pt.lambda)}, {"reason", pt.reason}};
        }
        json row = {{"lambda", cdj(pt.lambda)}, {"valid", pt.valid}};
        if (pt.valid) {
            row["idem"] = pt.idem;
            row["lift"] = pt.lift;
            row["comm"] = pt.comm;
            if (sa) {
                row["sa"] = pt.sa;
                row["identity"] = pt.identity;
            } else {
                row["eq2"] = pt.eq2;
                row["eq5"] = pt.eq5;
                row["kernel"] = pt.kernel;
            }
            row["oracle"] = opt_number(has_oracle, oracle);
            row["tail"] = pt.tail;
            row["nodes"] = pt.nodes;
        } else {
            row["reason"] = pt.reason;
        }
        points.push_back(row);
        const bool v = pt.valid;
        csv << 1 << ',' << pt.lambda.real() << ',' << pt.lambda.imag() << ',' << (v ? 1 : 0) << ','
            << csv_num(v, pt.idem) << ',' << csv_num(v, pt.lift) << ',' << csv_num(v, pt.comm) << ",,"
            << csv_num(v && !sa, pt.eq2) << ',' << csv_num(v && !sa, pt.eq5) << ",," << csv_num(v && sa, pt.sa) << ','
            << csv_num(v && sa, pt.identity) << ',' << csv_num(v && has_oracle, oracle) << ',' << csv_num(v, pt.tail)
            << '\n';
    }
    if (valid_count != static_cast<int>(trace.points.size()))
        failures.push_back("enclosure-failed: " + std::to_string(trace.points.size() - valid_count) +
                           " grid points outside the validity region, first at lambda = " +
                           lambda_text(cd(first_invalid["lambda"][0].get<double>(), first_invalid["lambda"][1].get<double>())) +
                           ": " + first_invalid["reason"].get<std::string>());

    json audit;
    if (sa) {
        audit = {{"gamma0", contour_json(trace.pair[0])}, {"gamma1", contour_json(trace.pair[1])}, {"eps", trace.eps}};
    } else {
        audit = contour_json(trace.contour);
        audit["rho"] = trace.rho;
        audit["sheet"] = trace.sheet;
        audit["branch_sheet"] = options.branch_sheet;
    }
    out.lift = {{"method", sa ? "riesz-projection" : "branch-square-root"},
                {"points", points},
                {"validity", {{"radius", trace.validity_radius},
                              {"valid_points", valid_count},
                              {"grid_points", static_cast<int>(trace.points.size())},
                              {"first_invalid", first_invalid}}},
                {"contour_audit", audit}};
    out.csv = csv.str();
    return out;
}

Outcome run_family(const Scenario& s, const LiftOptions& options, bool kernel_global, Checker& ck,
                   std::vector<std::string>& failures) {
    Outcome out;
    const bool sa = s.mode == LiftMode::family_sa;
    out.theorem = sa ? (kernel_global ? 4 : 6) : (kernel_global ? 3 : 5);
    const FamilyLift fl = lift_family(s.pi, s.qs, s.sections, s.grid, sa, options);
    const std::size_t m = fl.steps.size();
    const std::size_t np = m ? fl.steps[0].points.size() : 0;

    std::vector<std::vector<Matrix>> oracle_e(np);
    json steps = json::array();
    std::ostringstream csv;
    csv << kCsvHeader;
    int invalid = 0;
    std::string first_reason;
    cd first_lambda;
    for (std::size_t k = 0; k < m; ++k) {
        const auto& st = fl.steps[k];
        json points = json::array();
        for (std::size_t i = 0; i < np; ++i) {
            const auto& pt = st.points[i];
            double oracle = 0.0;
            bool has_oracle = false;
            json row = {{"lambda", cdj(pt.lambda)}, {"valid", pt.valid}};
            if (pt.valid) {
                auto vb = views(s, *pt.b);
                const auto vf = views(s, *pt.f);
                if (!vb.empty()) {
                    if (oracle_e[i].empty())
                        for (const auto& b : vb) oracle_e[i].push_back(Matrix::Zero(b.rows(), b.cols()));
                    std::vector<Matrix> ref;
                    for (std::size_t j = 0; j < vb.size(); ++j) {
                        const Matrix ce = Matrix::Identity(vb[j].rows(), vb[j].cols()) - oracle_e[i][j];
                        ref.push_back(projector_near_one(ce * vb[j] * ce));
                        oracle_e[i][j] += ref.back();
                    }
                    oracle = views_distance(vf, ref);
                    has_oracle = true;
                }
                const double tail = s.tail_aware ? pt.tail : 0.0;
                const Tolerances& t = s.tol;
                ck.check("idempotency defect", pt.idem, t.idem + tail, pt.lambda);
                ck.check("lifting defect", pt.lift, t.lift + tail, pt.lambda);
                ck.check("orthogonality to earlier lifts", pt.orth, t.orth + tail, pt.lambda);
                ck.check("commutation defect", pt.comm, t.comm + tail, pt.lambda);
                ck.check("eq2 residual", pt.eq2, t.residual + tail, pt.lambda);
                ck.check("eq5 residual", pt.eq5, t.residual + tail, pt.lambda);
                ck.check("eq17 residual", pt.eq17, t.residual + tail, pt.lambda);
                if (sa) ck.check("self-adjointness defect", pt.sa, t.sa + tail, pt.lambda);
                if (has_oracle) ck.check("oracle disagreement", oracle, s.oracle_tol + tail, pt.lambda);
                row.update({{"idem", pt.idem}, {"lift", pt.lift}, {"orth", pt.orth}, {"comm", pt.comm},
                            {"eq2", pt.eq2}, {"eq5", pt.eq5}, {"eq17", pt.eq17}, {"oracle", opt_number(has_oracle, oracle)},
                            {"tail", pt.tail}});
                if (sa) row["sa"] = pt.sa;
            } else {
                row["reason"] = pt.reason;
                if (invalid++ == 0) {
                    first_reason = "step " + std::to_string(k + 1) + ": " + pt.reason;
                    first_lambda = pt.lambda;
                }
            }
            points.push_back(row);
            const bool v = pt.valid;
            csv << k + 1 << ',' << pt.lambda.real() << ',' << pt.lambda.imag() << ',' << (v ? 1 : 0) << ','
                << csv_num(v, pt.idem) << ',' << csv_num(v, pt.lift) << ',' << csv_num(v, pt.comm) << ','
                << csv_num(v, pt.orth) << ',' << csv_num(v, pt.eq2) << ',' << csv_num(v, pt.eq5) << ','
                << csv_num(v, pt.eq17) << ',' << csv_num(v && sa, pt.sa) << ",," << csv_num(v && has_oracle, oracle)
                << ',' << csv_num(v, pt.tail) << '\n';
        }
        steps.push_back({{"step", st.step}, {"eps0", st.eps0}, {"validity_radius", st.validity_radius},
                         {"points", points}});
    }
    if (invalid)
        failures.push_back("enclosure-failed: " + std::to_string(invalid) + " step points outside the validity region, "
                           "first at lambda = " + lambda_text(first_lambda) + " (" + first_reason + ")");

    // pairwise orthogonality of the final lifts
    json pairwise = json::array();
    for (std::size_t i = 0; i < np; ++i) {
        double worst = 0.0, tail = 0.0;
        bool all = true;
        for (std::size_t a = 0; a < m; ++a) {
            if (!fl.steps[a].points[i].valid) all = false;
        }
        if (!all) {
            pairwise.push_back(nullptr);
            continue;
        }
        for (std::size_t a = 0; a < m; ++a) {
            const auto& fa = *fl.steps[a].points[i].f;
            tail = std::max(tail, tail_bound(fa));
            for (std::size_t b = a + 1; b < m; ++b) {
                const auto& fb = *fl.steps[b].points[i].f;
                worst = std::max({worst, head_norm(mul(fa, fb)), head_norm(mul(fb, fa))});
            }
        }
        ck.check("pairwise orthogonality", worst, s.tol.orth + (s.tail_aware ? tail : 0.0), fl.steps[0].points[i].lambda);
        pairwise.push_back(worst);
    }
    json audit = json::array();
    for (const auto& st : fl.steps)
        audit.push_back({{"step", st.step}, {"eps0", st.eps0}, {"contour", contour_json(near_one_contour())}});
    out.lift = {{"method", "kaplansky-steps"},
                {"families", static_cast<int>(m)},
                {"steps", steps},
                {"pairwise_orthogonality", pairwise},
                {"validity", {{"radius", fl.validity_radius}, {"invalid_step_points", invalid}}},
                {"contour_audit", audit}};
    out.csv = csv.str();
    return out;
}

Outcome run_trivial(const Scenario& s, bool kernel_global, Checker& ck, std::vector<std::string>& failures) {
    Outcome out;
    out.theorem = kernel_global ? 3 : 5;
    json points = json::array();
    std::ostringstream csv;
    csv << kCsvHeader;
    for (std::size_t k = 0; k < s.qs.size(); ++k) {
        const auto p = lift_trivial(s.qs[k]);
        if (!p) {
            failures.push_back("hypothesis-failed: q_" + std::to_string(k + 1) + "(0) has spectrum outside {0} and {1}");
            continue;
        }
        // the constant lift lives in the codomain; embed it through the section strategy
        const auto emb = constant_embed(s.A, (*p)(0.0));
        const Element pa = emb ? *emb : s.pi.right_inverse(0.0, (*p)(0.0));
        for (cd l : s.grid.points()) {
            const double idem = head_distance(mul(pa, pa), pa);
            const double lift = head_distance(s.pi.apply(l, pa), s.qs[k](l));
            ck.check("idempotency defect", idem, s.tol.idem, l);
            ck.check("lifting defect", lift, s.tol.lift, l);
            points.push_back({{"family", k + 1}, {"lambda", cdj(l)}, {"valid", true}, {"idem", idem}, {"lift", lift}});
            csv << k + 1 << ',' << l.real() << ',' << l.imag() << ",1," << csv_num(true, idem) << ','
                << csv_num(true, lift) << ",,,,,,,,,\n";
        }
    }
    out.lift = {{"method", "constant-0-or-1"}, {"points", points}};
    out.csv = csv.str();
    return out;
}

}  // namespace

LiftReport run_verification(const Scenario& s, const LiftOptions& base_options) {
    const auto t0 = Clock::now();
    LiftOptions options = base_options;
    options.tol = s.tol;

    LiftReport report;
    report.scenario = s.id;
    json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["version"] = kVersion;
    doc["scenario"] = s.id;
    doc["summary"] = s.summary;
    doc["expected_outcome"] = std::string(to_string(s.expected));
    doc["mode"] = std::string(to_string(s.mode));
    doc["algebras"] = {{"A", s.A->describe()}, {"B", s.B->describe()}};
    doc["seed"] = s.seed;
    doc["parameters"] = s.parameters;
    doc["grid"] = {{"center", cdj(s.grid.center)}, {"half_width", s.grid.half_width}, {"count", s.grid.count}};
    doc["tolerances"] = tol_json(s.tol, s.oracle_tol);
    doc["tail_aware"] = s.tail_aware;
    doc["branch_sheet"] = options.branch_sheet;

    json timings;
    auto t = Clock::now();
    Hypotheses hyp = check_hypotheses(s, report.failures);
    doc["hypotheses"] = hyp.list;
    timings["hypotheses_s"] = seconds_since(t);

    doc["theorem_path"] = nullptr;
    t = Clock::now();
    if (s.mode != LiftMode::probe) {
        if (!hyp.section_ok) {
            doc["lift"] = {{"skipped", "section-invalid"}};
        } else {
            Checker ck;
            try {
                Outcome o;
                if (s.mode == LiftMode::local || s.mode == LiftMode::local_sa) o = run_local(s, options, ck, report.failures);
                else if (s.mode == LiftMode::trivial) o = run_trivial(s, hyp.kernel_global, ck, report.failures);
                else o = run_family(s, options, hyp.kernel_global, ck, report.failures);
                doc["lift"] = o.lift;
                if (o.theorem) doc["theorem_path"] = *o.theorem;
                report.csv = o.csv;
            } catch (const Error& e) {
                report.failures.push_back(std::string(e.what()) + " [scenario " + s.id + "]");
                doc["lift"] = {{"error", to_string(e.code())}, {"message", e.what()}};
            }
            ck.emit(report.failures);
        }
    }
    timings["lift_s"] = seconds_since(t);

    t = Clock::now();
    json probes = json::array();
    for (const auto& p : s.probes) {
        ProbeResult r;
        try {
            r = p.run();
        } catch (const Error& e) {
            r.pass = false;
            r.detail = {{"error", e.what()}};
        }
        if (!r.pass) report.failures.push_back("probe " + p.name + " failed");
        probes.push_back({{"name", p.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    doc["probes"] = probes;
    timings["probes_s"] = seconds_since(t);

    report.pass = report.failures.empty();
    doc["status"] = report.pass ? "pass" : "fail";
    doc["failures"] = report.failures;
    timings["total_s"] = seconds_since(t0);
    doc["timings"] = timings;
    report.document = std::move(doc);
    return report;
}

int exit_status(const LiftReport& report) noexcept { return report.pass ? 0 : 1; }

}  // namespace idemlift
