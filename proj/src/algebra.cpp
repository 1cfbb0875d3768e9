#include "idemlift/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace idemlift {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_parameter: return "invalid-parameter";
        case ErrorCode::algebra_mismatch: return "algebra-mismatch";
        case ErrorCode::not_invertible: return "not-invertible";
        case ErrorCode::no_involution: return "no-involution";
        case ErrorCode::spectrum_contains_zero: return "spectrum-contains-zero";
        case ErrorCode::degenerate_geometry: return "degenerate-geometry";
        case ErrorCode::spectrum_not_enclosed: return "spectrum-not-enclosed";
        case ErrorCode::quadrature_not_converged: return "quadrature-not-converged";
        case ErrorCode::spectrum_on_contour: return "spectrum-on-contour";
        case ErrorCode::spectrum_meets_cut: return "spectrum-meets-cut";
        case ErrorCode::spectrum_too_large: return "spectrum-too-large";
        case ErrorCode::out_of_radius: return "out-of-radius";
        case ErrorCode::unsupported_strategy: return "unsupported-strategy";
        case ErrorCode::not_idempotent_input: return "not-idempotent-input";
        case ErrorCode::section_invalid: return "section-invalid";
        case ErrorCode::half_in_spectrum: return "half-in-spectrum";
        case ErrorCode::enclosure_failed: return "enclosure-failed";
        case ErrorCode::ambiguous_sign: return "ambiguous-sign";
        case ErrorCode::not_star_compatible: return "not-star-compatible";
        case ErrorCode::invalid_generator: return "invalid-generator";
        case ErrorCode::hypothesis_failed: return "hypothesis-failed";
        case ErrorCode::config_error: return "config-error";
    }
    return "unknown";
}

std::string_view to_string(AlgebraKind kind) noexcept {
    switch (kind) {
        case AlgebraKind::matrix: return "matrix";
        case AlgebraKind::dual: return "dual";
        case AlgebraKind::block_triangular: return "block";
        case AlgebraKind::wiener: return "wiener";
        case AlgebraKind::convolution: return "convolution";
        case AlgebraKind::unitization: return "unitization";
        case AlgebraKind::product: return "product";
    }
    return "unknown";
}

std::string_view Algebra::norm_kind() const noexcept {
    switch (kind_) {
        case AlgebraKind::matrix:
        case AlgebraKind::block_triangular: return "operator-2";
        case AlgebraKind::dual: return "head-plus-nilpotent";
        case AlgebraKind::wiener: return "l1-coefficients";
        case AlgebraKind::convolution: return "l1-samples";
        case AlgebraKind::unitization: return "l1-sum";
        case AlgebraKind::product: return "linf-sum";
    }
    return "unknown";
}

AlgebraPtr Algebra::make(AlgebraKind kind, int n, int m, int degree, int grid,
                         std::vector<AlgebraPtr> children) {
    auto alg = std::shared_ptr<Algebra>(new Algebra());
    alg->kind_ = kind;
    alg->n_ = n;
    alg->m_ = m;
    alg->degree_ = degree;
    alg->grid_ = grid;
    alg->children_ = std::move(children);

    std::ostringstream name;
    switch (kind) {
        case AlgebraKind::matrix:
            name << "matrix(" << n << ")";
            break;
        case AlgebraKind::dual:
            name << "dual(" << n << ")";
            break;
        case AlgebraKind::block_triangular:
            name << "block(" << n << "," << m << ")";
            alg->involution_ = false;
            alg->involution_bound_ = 0.0;
            break;
        case AlgebraKind::convolution:
            name << "convolution(" << grid << ")";
            alg->unital_ = false;
            alg->radical_ = true;
            break;
        case AlgebraKind::wiener: {
            const auto& base = *alg->children_.at(0);
            name << "wiener(" << degree << "," << base.describe() << ")";
            alg->unital_ = base.unital();
            alg->involution_ = base.has_involution();
            alg->involution_bound_ = base.involution_bound();
            alg->radical_ = base.radical();
            break;
        }
        case AlgebraKind::unitization: {
            const auto& inner = *alg->children_.at(0);
            name << "unitization(" << inner.describe() << ")";
            alg->involution_ = inner.has_involution();
            alg->involution_bound_ = inner.has_involution() ? std::max(1.0, inner.involution_bound()) : 0.0;
            break;
        }
        case AlgebraKind::product: {
            name << "product(";
            alg->involution_bound_ = 0.0;
            alg->radical_ = true;
            for (std::size_t i = 0; i < alg->children_.size(); ++i) {
                const auto& f = *alg->children_[i];
                name << (i ? "," : "") << f.describe();
                alg->unital_ = alg->unital_ && f.unital();
                alg->involution_ = alg->involution_ && f.has_involution();
                alg->radical_ = alg->radical_ && f.radical();
                alg->involution_bound_ = std::max(alg->involution_bound_, f.involution_bound());
            }
            if (!alg->involution_) alg->involution_bound_ = 0.0;
            name << ")";
            break;
        }
    }
    alg->description_ = name.str();
    return alg;
}

AlgebraPtr make_matrix_algebra(int n) {
    if (n < 1) fail(ErrorCode::invalid_parameter, "matrix size must be >= 1");
    return Algebra::make(AlgebraKind::matrix, n, 0, 0, 0, {});
}

AlgebraPtr make_dual_algebra(int n) {
    if (n < 1) fail(ErrorCode::invalid_parameter, "dual-number matrix size must be >= 1");
    return Algebra::make(AlgebraKind::dual, n, 0, 0, 0, {});
}

AlgebraPtr make_block_algebra(int k, int m) {
    if (k < 1 || m < 1) fail(ErrorCode::invalid_parameter, "block sizes must be >= 1");
    return Algebra::make(AlgebraKind::block_triangular, k, m, 0, 0, {});
}

AlgebraPtr make_convolution_algebra(int grid) {
    if (grid < 1) fail(ErrorCode::invalid_parameter, "convolution grid size must be >= 1");
    return Algebra::make(AlgebraKind::convolution, 0, 0, 0, grid, {});
}

AlgebraPtr make_wiener_algebra(AlgebraPtr base, int degree) {
    if (!base) fail(ErrorCode::invalid_parameter, "wiener algebra needs a base");
    if (degree < 0) fail(ErrorCode::invalid_parameter, "truncation degree must be >= 0");
    if (base->kind() == AlgebraKind::wiener)
        fail(ErrorCode::invalid_parameter, "nested power-series algebras are not supported");
    return Algebra::make(AlgebraKind::wiener, 0, 0, degree, 0, {std::move(base)});
}

AlgebraPtr make_unitization(AlgebraPtr inner) {
    if (!inner) fail(ErrorCode::invalid_parameter, "unitization needs an inner algebra");
    if (inner->unital() || !inner->radical())
        fail(ErrorCode::invalid_parameter, "unitization is provided for non-unital radical algebras only");
    return Algebra::make(AlgebraKind::unitization, 0, 0, 0, 0, {std::move(inner)});
}

AlgebraPtr make_product(std::vector<AlgebraPtr> factors) {
    if (factors.empty()) fail(ErrorCode::invalid_parameter, "product needs at least one factor");
    for (const auto& f : factors)
        if (!f) fail(ErrorCode::invalid_parameter, "null product factor");
    return Algebra::make(AlgebraKind::product, 0, 0, 0, 0, std::move(factors));
}

AlgebraPtr build_algebra(const AlgebraDescriptor& d) {
    switch (d.kind) {
        case AlgebraKind::matrix: return make_matrix_algebra(d.n);
        case AlgebraKind::dual: return make_dual_algebra(d.n);
        case AlgebraKind::block_triangular: return make_block_algebra(d.n, d.m);
        case AlgebraKind::convolution: return make_convolution_algebra(d.grid);
        case AlgebraKind::wiener:
            if (d.children.size() != 1) fail(ErrorCode::invalid_parameter, "wiener needs one base");
            return make_wiener_algebra(build_algebra(d.children[0]), d.degree);
        case AlgebraKind::unitization:
            if (d.children.size() != 1) fail(ErrorCode::invalid_parameter, "unitization needs one inner algebra");
            return make_unitization(build_algebra(d.children[0]));
        case AlgebraKind::product: {
            std::vector<AlgebraPtr> factors;
            for (const auto& c : d.children) factors.push_back(build_algebra(c));
            return make_product(std::move(factors));
        }
    }
    fail(ErrorCode::invalid_parameter, "unknown algebra kind");
}

// ---------------------------------------------------------------------------

namespace {

std::size_t expected_payload(AlgebraKind kind) {
    switch (kind) {
        case AlgebraKind::matrix:
        case AlgebraKind::block_triangular: return 0;
        case AlgebraKind::dual: return 1;
        case AlgebraKind::convolution: return 2;
        case AlgebraKind::wiener: return 3;
        case AlgebraKind::unitization: return 4;
        case AlgebraKind::product: return 5;
    }
    return 0;
}

int matrix_dim(const Algebra& a) {
    return a.kind() == AlgebraKind::block_triangular ? a.size() + a.block_lower_size() : a.size();
}

int sample_count(const Algebra& a) { return std::max(0, a.grid() - 1); }

void check_same(const Element& x, const Element& y, const char* op) {
    if (!x.algebra()->same_as(*y.algebra()))
        fail(ErrorCode::algebra_mismatch, std::string(op) + ": " + x.algebra()->describe() + " vs " +
                                              y.algebra()->describe());
}

double l1(const Vector& v, double h) { return h * v.cwiseAbs().sum(); }

Vector convolve(const Vector& f, const Vector& g, int grid) {
    const Eigen::Index len = f.size();
    const double h = 1.0 / grid;
    Vector out = Vector::Zero(len);
    for (Eigen::Index i = 1; i < len; ++i) {
        cd acc = 0.0;
        for (Eigen::Index j = 0; j <= i - 1; ++j) acc += f(j) * g(i - 1 - j);
        out(i) = h * acc;
    }
    return out;
}

Element with_extra_tail(const Element& x, double extra) {
    if (extra <= 0.0) return x;
    switch (x.kind()) {
        case AlgebraKind::wiener: {
            const auto& s = x.as<SeriesData>();
            return Element(x.algebra(), SeriesData{s.coeffs, s.tail + extra});
        }
        case AlgebraKind::unitization: {
            const auto& u = x.as<UnitData>();
            return Element(x.algebra(), UnitData{std::make_shared<const Element>(with_extra_tail(*u.inner, extra)),
                                                 u.scalar});
        }
        default:
            // kinds without tails are computed exactly up to rounding
            return x;
    }
}

}  // namespace

Element::Element(AlgebraPtr algebra, Payload payload) : algebra_(std::move(algebra)), payload_(std::move(payload)) {
    if (!algebra_) fail(ErrorCode::invalid_parameter, "element without algebra");
    if (payload_.index() != expected_payload(algebra_->kind()))
        fail(ErrorCode::invalid_parameter, "payload does not match " + algebra_->describe());
}

Element zero(const AlgebraPtr& a) {
    switch (a->kind()) {
        case AlgebraKind::matrix:
        case AlgebraKind::block_triangular: {
            const int d = matrix_dim(*a);
            return Element(a, MatrixData{Matrix::Zero(d, d)});
        }
        case AlgebraKind::dual:
            return Element(a, DualData{Matrix::Zero(a->size(), a->size()), Matrix::Zero(a->size(), a->size())});
        case AlgebraKind::convolution: return Element(a, SampleData{Vector::Zero(sample_count(*a))});
        case AlgebraKind::wiener: {
            std::vector<Element> coeffs(static_cast<std::size_t>(a->degree() + 1), zero(a->base()));
            return Element(a, SeriesData{std::move(coeffs), 0.0});
        }
        case AlgebraKind::unitization:
            return Element(a, UnitData{std::make_shared<const Element>(zero(a->base())), 0.0});
        case AlgebraKind::product: {
            std::vector<Element> parts;
            for (const auto& f : a->children()) parts.push_back(zero(f));
            return Element(a, TupleData{std::move(parts)});
        }
    }
    fail(ErrorCode::invalid_parameter, "unknown kind");
}

Element identity(const AlgebraPtr& a) {
    if (!a->unital()) fail(ErrorCode::invalid_parameter, a->describe() + " has no unit");
    switch (a->kind()) {
        case AlgebraKind::matrix:
        case AlgebraKind::block_triangular: {
            const int d = matrix_dim(*a);
            return Element(a, MatrixData{Matrix::Identity(d, d)});
        }
        case AlgebraKind::dual:
            return Element(a, DualData{Matrix::Identity(a->size(), a->size()), Matrix::Zero(a->size(), a->size())});
        case AlgebraKind::wiener: {
            std::vector<Element> coeffs(static_cast<std::size_t>(a->degree() + 1), zero(a->base()));
            coeffs[0] = identity(a->base());
            return Element(a, SeriesData{std::move(coeffs), 0.0});
        }
        case AlgebraKind::unitization:
            return Element(a, UnitData{std::make_shared<const Element>(zero(a->base())), 1.0});
        case AlgebraKind::product: {
            std::vector<Element> parts;
            for (const auto& f : a->children()) parts.push_back(identity(f));
            return Element(a, TupleData{std::move(parts)});
        }
        case AlgebraKind::convolution: break;
    }
    fail(ErrorCode::invalid_parameter, a->describe() + " has no unit");
}

Element scalar(const AlgebraPtr& a, cd value) { return scale(value, identity(a)); }

Element matrix_element(const AlgebraPtr& a, Matrix value) {
    if (a->kind() != AlgebraKind::matrix) fail(ErrorCode::algebra_mismatch, "matrix_element needs a matrix algebra");
    if (value.rows() != a->size() || value.cols() != a->size())
        fail(ErrorCode::invalid_parameter, "matrix shape does not match " + a->describe());
    return Element(a, MatrixData{std::move(value)});
}

Element dual_element(const AlgebraPtr& a, Matrix head, Matrix nil) {
    if (a->kind() != AlgebraKind::dual) fail(ErrorCode::algebra_mismatch, "dual_element needs a dual algebra");
    const int n = a->size();
    if (head.rows() != n || head.cols() != n || nil.rows() != n || nil.cols() != n)
        fail(ErrorCode::invalid_parameter, "dual component shape does not match " + a->describe());
    return Element(a, DualData{std::move(head), std::move(nil)});
}

Element block_element(const AlgebraPtr& a, const Matrix& x, const Matrix& y, const Matrix& z) {
    if (a->kind() != AlgebraKind::block_triangular)
        fail(ErrorCode::algebra_mismatch, "block_element needs a block-triangular algebra");
    const int k = a->size(), m = a->block_lower_size();
    if (x.rows() != k || x.cols() != k || y.rows() != k || y.cols() != m || z.rows() != m || z.cols() != m)
        fail(ErrorCode::invalid_parameter, "block shapes do not match " + a->describe());
    Matrix full = Matrix::Zero(k + m, k + m);
    full.topLeftCorner(k, k) = x;
    full.topRightCorner(k, m) = y;
    full.bottomRightCorner(m, m) = z;
    return Element(a, MatrixData{std::move(full)});
}

Element convolution_element(const AlgebraPtr& a, Vector samples) {
    if (a->kind() != AlgebraKind::convolution)
        fail(ErrorCode::algebra_mismatch, "convolution_element needs a convolution algebra");
    if (samples.size() == a->grid()) samples.conservativeResize(sample_count(*a));
    if (samples.size() != sample_count(*a))
        fail(ErrorCode::invalid_parameter, "expected N or N-1 samples for " + a->describe());
    return Element(a, SampleData{std::move(samples)});
}

Element series_element(const AlgebraPtr& a, std::vector<Element> coeffs, double tail) {
    if (a->kind() != AlgebraKind::wiener) fail(ErrorCode::algebra_mismatch, "series_element needs a wiener algebra");
    if (tail < 0.0 || !std::isfinite(tail)) fail(ErrorCode::invalid_parameter, "tail bound must be finite and >= 0");
    if (coeffs.size() > static_cast<std::size_t>(a->degree() + 1))
        fail(ErrorCode::invalid_parameter, "more coefficients than the truncation degree allows");
    for (const auto& c : coeffs)
        if (!c.algebra()->same_as(*a->base())) fail(ErrorCode::algebra_mismatch, "coefficient outside the base algebra");
    while (coeffs.size() < static_cast<std::size_t>(a->degree() + 1)) coeffs.push_back(zero(a->base()));
    return Element(a, SeriesData{std::move(coeffs), tail});
}

Element unit_element(const AlgebraPtr& a, Element inner, cd s) {
    if (a->kind() != AlgebraKind::unitization)
        fail(ErrorCode::algebra_mismatch, "unit_element needs a unitization");
    if (!inner.algebra()->same_as(*a->base())) fail(ErrorCode::algebra_mismatch, "inner element outside the algebra");
    return Element(a, UnitData{std::make_shared<const Element>(std::move(inner)), s});
}

Element tuple_element(const AlgebraPtr& a, std::vector<Element> parts) {
    if (a->kind() != AlgebraKind::product) fail(ErrorCode::algebra_mismatch, "tuple_element needs a product algebra");
    if (parts.size() != a->children().size()) fail(ErrorCode::invalid_parameter, "wrong number of components");
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (!parts[i].algebra()->same_as(*a->children()[i]))
            fail(ErrorCode::algebra_mismatch, "component outside its factor");
    return Element(a, TupleData{std::move(parts)});
}

// ---------------------------------------------------------------------------

namespace {

template <class Op>
Element combine(const Element& x, const Element& y, Op op) {
    const auto& a = x.algebra();
    switch (x.kind()) {
        case AlgebraKind::matrix:
        case AlgebraKind::block_triangular:
            return Element(a, MatrixData{op(x.as<MatrixData>().value, y.as<MatrixData>().value)});
        case AlgebraKind::dual: {
            const auto& p = x.as<DualData>();
            const auto& q = y.as<DualData>();
            return Element(a, DualData{op(p.head, q.head), op(p.nil, q.nil)});
        }
        case AlgebraKind::convolution:
            return Element(a, SampleData{op(x.as<SampleData>().samples, y.as<SampleData>().samples)});
        case AlgebraKind::wiener: {
            const auto& p = x.as<SeriesData>();
            const auto& q = y.as<SeriesData>();
            std::vector<Element> coeffs;
            coeffs.reserve(p.coeffs.size());
            for (std::size_t k = 0; k < p.coeffs.size(); ++k)
                coeffs.push_back(combine(p.coeffs[k], q.coeffs[k], op));
            return Element(a, SeriesData{std::move(coeffs), p.tail + q.tail});
        }
        case AlgebraKind::unitization: {
            const auto& p = x.as<UnitData>();
            const auto& q = y.as<UnitData>();
            return Element(a, UnitData{std::make_shared<const Element>(combine(*p.inner, *q.inner, op)),
                                       op(p.scalar, q.scalar)});
        }
        case AlgebraKind::product: {
            const auto& p = x.as<TupleData>();
            const auto& q = y.as<TupleData>();
            std::vector<Element> parts;
            for (std::size_t i = 0; i < p.parts.size(); ++i)
                parts.push_back(combine(p.parts[i], q.parts[i], op));
            return Element(a, TupleData{std::move(parts)});
        }
    }
    fail(ErrorCode::invalid_parameter, "unknown kind");
}

}  // namespace

Element add(const Element& x, const Element& y) {
    check_same(x, y, "add");
    return combine(x, y, [](const auto& u, const auto& v) { return decltype(u + v)(u + v); });
}

Element sub(const Element& x, const Element& y) {
    check_same(x, y, "sub");
    return combine(x, y, [](const auto& u, const auto& v) { return decltype(u - v)(u - v); });
}

Element scale(cd s, const Element& x) {
    const auto& a = x.algebra();
    switch (x.kind()) {
        case AlgebraKind::matrix:
        case AlgebraKind::block_triangular: return Element(a, MatrixData{s * x.as<MatrixData>().value});
        case AlgebraKind::dual: {
            const auto& p = x.as<DualData>();
            return Element(a, DualData{s * p.head, s * p.nil});
        }
        case AlgebraKind::convolution: return Element(a, SampleData{s * x.as<SampleData>().samples});
        case AlgebraKind::wiener: {
            const auto& p = x.as<SeriesData>();
            std::vector<Element> coeffs;
            for (const auto& c : p.coeffs) coeffs.push_back(scale(s, c));
            return Element(a, SeriesData{std::move(coeffs), std::abs(s) * p.tail});
        }
        case AlgebraKind::unitization: {
            const auto& p = x.as<UnitData>();
            return Element(a, UnitData{std::make_shared<const Element>(scale(s, *p.inner)), s * p.scalar});
        }
        case AlgebraKind::product: {
            std::vector<Element> parts;
            for (const auto& c : x.as<TupleData>().parts) parts.push_back(scale(s, c));
            return Element(a, TupleData{std::move(parts)});
        }
    }
    fail(ErrorCode::invalid_parameter, "unknown kind");
}

Element mul(const Element& x, const Element& y) {
    check_same(x, y, "mul");
    const auto& a = x.algebra();
    switch (x.kind()) {
        case AlgebraKind::matrix:
        case AlgebraKind::block_triangular:
            return Element(a, MatrixData{x.as<MatrixData>().value * y.as<MatrixData>().value});
        case AlgebraKind::dual: {
            const auto& p = x.as<DualData>();
            const auto& q = y.as<DualData>();
            return Element(a, DualData{p.head * q.head, p.head * q.nil + p.nil * q.head});
        }
        case AlgebraKind::convolution:
            return Element(a, SampleData{convolve(x.as<SampleData>().samples, y.as<SampleData>().samples, a->grid())});
        case AlgebraKind::wiener: {
            const auto& p = x.as<SeriesData>();
            const auto& q = y.as<SeriesData>();
            const int deg = a->degree();
            std::vector<Element> coeffs(static_cast<std::size_t>(deg + 1), zero(a->base()));
            double discarded = 0.0;
            for (int mdeg = 0; mdeg <= 2 * deg; ++mdeg) {
                std::optional<Element> acc;
                for (int j = std::max(0, mdeg - deg); j <= std::min(mdeg, deg); ++j) {
                    if (is_exact_zero(p.coeffs[j]) || is_exact_zero(q.coeffs[mdeg - j])) continue;
                    Element term = mul(p.coeffs[j], q.coeffs[mdeg - j]);
                    acc = acc ? add(*acc, term) : term;
                }
                if (!acc) continue;
                if (mdeg <= deg)
                    coeffs[mdeg] = *acc;
                else
                    discarded += norm(*acc);
            }
            const double hx = head_norm(x), hy = head_norm(y);
            const double tail = discarded + hx * q.tail + p.tail * hy + p.tail * q.tail;
            return Element(a, SeriesData{std::move(coeffs), tail});
        }
        case AlgebraKind::unitization: {
            const auto& p = x.as<UnitData>();
            const auto& q = y.as<UnitData>();
            Element inner = add(add(mul(*p.inner, *q.inner), scale(p.scalar, *q.inner)), scale(q.scalar, *p.inner));
            return Element(a, UnitData{std::make_shared<const Element>(std::move(inner)), p.scalar * q.scalar});
        }
        case AlgebraKind::product: {
            const auto& p = x.as<TupleData>();
            const auto& q = y.as<TupleData>();
            std::vector<Element> parts;
            for (std::size_t i = 0; i < p.parts.size(); ++i) parts.push_back(mul(p.parts[i], q.parts[i]));
            return Element(a, TupleData{std::move(parts)});
        }
    }
    fail(ErrorCode::invalid_parameter, "unknown kind");
}

Matrix invert_matrix(const Matrix& m) {
    if (!m.allFinite()) fail(ErrorCode::not_invertible, "matrix has non-finite entries");
    Eigen::PartialPivLU<Matrix> lu(m);
    const double rcond = lu.rcond();
    if (!(rcond * kConditionThreshold > 1.0))
        fail(ErrorCode::not_invertible, "condition estimate exceeds 1e12");
    return lu.inverse();
}

Element inverse(const Element& x) {
    const auto& a = x.algebra();
    switch (x.kind()) {
        case AlgebraKind::matrix: return Element(a, MatrixData{invert_matrix(x.as<MatrixData>().value)});
        case AlgebraKind::block_triangular: {
            const Matrix& v = x.as<MatrixData>().value;
            const int k = a->size(), m = a->block_lower_size();
            const Matrix xi = invert_matrix(v.topLeftCorner(k, k));
            const Matrix zi = invert_matrix(v.bottomRightCorner(m, m));
            return block_element(a, xi, -xi * v.topRightCorner(k, m) * zi, zi);
        }
        case AlgebraKind::dual: {
            const auto& p = x.as<DualData>();
            const Matrix hi = invert_matrix(p.head);
            return Element(a, DualData{hi, -hi * p.nil * hi});
        }
        case AlgebraKind::convolution: fail(ErrorCode::not_invertible, "convolution algebra has no unit");
        case AlgebraKind::wiener: {
            if (!a->unital()) fail(ErrorCode::not_invertible, a->describe() + " has no unit");
            const auto& p = x.as<SeriesData>();
            const int deg = a->degree();
            std::vector<Element> g(static_cast<std::size_t>(deg + 1), zero(a->base()));
            const Element b0 = inverse(p.coeffs[0]);
            g[0] = b0;
            for (int k = 1; k <= deg; ++k) {
                std::optional<Element> acc;
                for (int j = 1; j <= k; ++j) {
                    if (is_exact_zero(p.coeffs[j])) continue;
                    Element term = mul(p.coeffs[j], g[k - j]);
                    acc = acc ? add(*acc, term) : term;
                }
                if (acc) g[k] = -mul(b0, *acc);
            }
            // x * g = 1 + E with E made of the degree > D part of head(x) * g and the input tail.
            double high = 0.0;
            for (int mdeg = deg + 1; mdeg <= 2 * deg; ++mdeg) {
                std::optional<Element> acc;
                for (int j = mdeg - deg; j <= deg; ++j) {
                    if (is_exact_zero(p.coeffs[j])) continue;
                    Element term = mul(p.coeffs[j], g[mdeg - j]);
                    acc = acc ? add(*acc, term) : term;
                }
                if (acc) high += norm(*acc);
            }
            Element head(a, SeriesData{g, 0.0});
            const double gnorm = head_norm(head);
            const double e = high + p.tail * gnorm;
            if (!(e < 1.0)) fail(ErrorCode::not_invertible, "power-series inverse diverges in the l1 norm");
            return Element(a, SeriesData{std::move(g), gnorm * e / (1.0 - e)});
        }
        case AlgebraKind::unitization: {
            const auto& p = x.as<UnitData>();
            const double scale_ref = std::max(1.0, norm(*p.inner));
            if (!(std::abs(p.scalar) * kConditionThreshold > scale_ref))
                fail(ErrorCode::not_invertible, "scalar part vanishes in the unitization");
            // (f + c)^{-1} = c^{-1} (1 + u)^{-1}, u = f / c radical; the head of u is nilpotent.
            const Element u = scale(1.0 / p.scalar, *p.inner);
            Element term = -u;
            Element sum = term;
            bool terminated = false;
            for (int k = 0; k < 100000; ++k) {
                term = -mul(term, u);
                if (head_norm(term) == 0.0) {
                    terminated = true;
                    break;
                }
                sum = add(sum, term);
            }
            if (!terminated) fail(ErrorCode::not_invertible, "Neumann series did not terminate");
            const double t = norm(term);
            if (!(t < 1.0)) fail(ErrorCode::not_invertible, "Neumann remainder bound diverges");
            const double remainder = t * (1.0 + norm(sum)) / (1.0 - t);
            Element inner = with_extra_tail(scale(1.0 / p.scalar, sum), remainder / std::abs(p.scalar));
            return Element(a, UnitData{std::make_shared<const Element>(std::move(inner)), 1.0 / p.scalar});
        }
        case AlgebraKind::product: {
            std::vector<Element> parts;
            for (const auto& c : x.as<TupleData>().parts) parts.push_back(inverse(c));
            return Element(a, TupleData{std::move(parts)});
        }
    }
    fail(ErrorCode::invalid_parameter, "unknown kind");
}

Element adjoint(const Element& x) {
    const auto& a = x.algebra();
    if (!a->has_involution()) fail(ErrorCode::no_involution, a->describe() + " has no involution");
    switch (x.kind()) {
        case AlgebraKind::matrix: return Element(a, MatrixData{x.as<MatrixData>().value.adjoint()});
        case AlgebraKind::dual: {
            const auto& p = x.as<DualData>();
            return Element(a, DualData{p.head.adjoint(), p.nil.adjoint()});
        }
        case AlgebraKind::convolution: return Element(a, SampleData{x.as<SampleData>().samples.conjugate()});
        case AlgebraKind::wiener: {
            const auto& p = x.as<SeriesData>();
            std::vector<Element> coeffs;
            for (const auto& c : p.coeffs) coeffs.push_back(adjoint(c));
            return Element(a, SeriesData{std::move(coeffs), a->involution_bound() * p.tail});
        }
        case AlgebraKind::unitization: {
            const auto& p = x.as<UnitData>();
            return Element(a, UnitData{std::make_shared<const Element>(adjoint(*p.inner)), std::conj(p.scalar)});
        }
        case AlgebraKind::product: {
            std::vector<Element> parts;
            for (const auto& c : x.as<TupleData>().parts) parts.push_back(adjoint(c));
            return Element(a, TupleData{std::move(parts)});
        }
        case AlgebraKind::block_triangular: break;
    }
    fail(ErrorCode::no_involution, a->describe() + " has no involution");
}

Element power(const Element& x, int exponent) {
    if (exponent < 0) fail(ErrorCode::invalid_parameter, "negative exponent");
    if (exponent == 0) return identity(x.algebra());
    Element result = x;
    Element base = x;
    bool have = false;
    int e = exponent;
    while (e > 0) {
        if (e & 1) {
            result = have ? mul(result, base) : base;
            have = true;
        }
        e >>= 1;
        if (e > 0) base = mul(base, base);
    }
    return result;
}

Element exponential(const Element& x) {
    const double nx = norm(x);
    int squarings = 0;
    if (nx > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nx / 0.5)));
    const Element y = scale(std::ldexp(1.0, -squarings), x);
    Element sum = identity(x.algebra());
    Element term = sum;
    for (int k = 1; k < 64; ++k) {
        term = scale(1.0 / k, mul(term, y));
        sum = add(sum, term);
        if (norm(term) < 1e-17 * std::max(1.0, norm(sum))) break;
    }
    for (int s = 0; s < squarings; ++s) sum = mul(sum, sum);
    return sum;
}

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    if (m.size() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

std::vector<cd> eigenvalues(const Matrix& m) {
    if (m.rows() == 1) return {m(0, 0)};
    Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    const Vector ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double norm(const Element& x) {
    switch (x.kind()) {
        case AlgebraKind::matrix:
        case AlgebraKind::block_triangular: return operator_norm(x.as<MatrixData>().value);
        case AlgebraKind::dual: {
            const auto& p = x.as<DualData>();
            return operator_norm(p.head) + operator_norm(p.nil);
        }
        case AlgebraKind::convolution: return l1(x.as<SampleData>().samples, 1.0 / x.algebra()->grid());
        case AlgebraKind::wiener: {
            const auto& p = x.as<SeriesData>();
            double s = p.tail;
            for (const auto& c : p.coeffs) s += norm(c);
            return s;
        }
        case AlgebraKind::unitization: {
            const auto& p = x.as<UnitData>();
            return norm(*p.inner) + std::abs(p.scalar);
        }
        case AlgebraKind::product: {
            double s = 0.0;
            for (const auto& c : x.as<TupleData>().parts) s = std::max(s, norm(c));
            return s;
        }
    }
    return 0.0;
}

double head_norm(const Element& x) {
    switch (x.kind()) {
        case AlgebraKind::wiener: {
            double s = 0.0;
            for (const auto& c : x.as<SeriesData>().coeffs) s += head_norm(c);
            return s;
        }
        case AlgebraKind::unitization: {
            const auto& p = x.as<UnitData>();
            return head_norm(*p.inner) + std::abs(p.scalar);
        }
        case AlgebraKind::product: {
            double s = 0.0;
            for (const auto& c : x.as<TupleData>().parts) s = std::max(s, head_norm(c));
            return s;
        }
        default: return norm(x);
    }
}

double tail_bound(const Element& x) {
    switch (x.kind()) {
        case AlgebraKind::wiener: return x.as<SeriesData>().tail;
        case AlgebraKind::unitization: return tail_bound(*x.as<UnitData>().inner);
        case AlgebraKind::product: {
            double s = 0.0;
            for (const auto& c : x.as<TupleData>().parts) s = std::max(s, tail_bound(c));
            return s;
        }
        default: return 0.0;
    }
}

bool is_exact_zero(const Element& x) {
    switch (x.kind()) {
        case AlgebraKind::matrix:
        case AlgebraKind::block_triangular: return x.as<MatrixData>().value.isZero(0.0);
        case AlgebraKind::dual: {
            const auto& p = x.as<DualData>();
            return p.head.isZero(0.0) && p.nil.isZero(0.0);
        }
        case AlgebraKind::convolution: return x.as<SampleData>().samples.isZero(0.0);
        case AlgebraKind::wiener: {
            const auto& p = x.as<SeriesData>();
            return std::all_of(p.coeffs.begin(), p.coeffs.end(), [](const Element& c) { return is_exact_zero(c); });
        }
        case AlgebraKind::unitization: {
            const auto& p = x.as<UnitData>();
            return p.scalar == cd(0.0) && is_exact_zero(*p.inner);
        }
        case AlgebraKind::product: {
            const auto& p = x.as<TupleData>().parts;
            return std::all_of(p.begin(), p.end(), [](const Element& c) { return is_exact_zero(c); });
        }
    }
    return false;
}

namespace {

Element evaluate_series_head(const Element& x, cd z) {
    const auto& p = x.as<SeriesData>();
    Element acc = p.coeffs.back();
    for (int k = static_cast<int>(p.coeffs.size()) - 2; k >= 0; --k) acc = add(scale(z, acc), p.coeffs[k]);
    return acc;
}

void finish(SpectrumReport& r) {
    r.radius = 0.0;
    for (const auto& z : r.points) r.radius = std::max(r.radius, std::abs(z));
}

}  // namespace

SpectrumReport spectrum(const Element& x) {
    SpectrumReport r;
    switch (x.kind()) {
        case AlgebraKind::matrix: r.points = eigenvalues(x.as<MatrixData>().value); break;
        case AlgebraKind::block_triangular: {
            const Matrix& v = x.as<MatrixData>().value;
            const int k = x.algebra()->size(), m = x.algebra()->block_lower_size();
            r.points = eigenvalues(v.topLeftCorner(k, k));
            const auto lower = eigenvalues(v.bottomRightCorner(m, m));
            r.points.insert(r.points.end(), lower.begin(), lower.end());
            break;
        }
        case AlgebraKind::dual: r.points = eigenvalues(x.as<DualData>().head); break;
        case AlgebraKind::convolution: r.points = {0.0}; break;
        case AlgebraKind::wiener: {
            if (x.algebra()->radical()) {
                r.points = {0.0};
                break;
            }
            // sigma(f) is the union of sigma(f(z)) over the closed disc; sample circles |z| = j / M.
            constexpr int circles = 16;
            r.exact = false;
            for (int j = 0; j <= circles; ++j) {
                const double rad = static_cast<double>(j) / circles;
                const int count = j == 0 ? 1 : 8 * j;
                for (int t = 0; t < count; ++t) {
                    const cd z = std::polar(rad, 2.0 * M_PI * t / count);
                    const auto part = spectrum(evaluate_series_head(x, z));
                    r.points.insert(r.points.end(), part.points.begin(), part.points.end());
                }
            }
            break;
        }
        case AlgebraKind::unitization: r.points = {x.as<UnitData>().scalar}; break;
        case AlgebraKind::product: {
            for (const auto& c : x.as<TupleData>().parts) {
                const auto part = spectrum(c);
                r.exact = r.exact && part.exact;
                r.points.insert(r.points.end(), part.points.begin(), part.points.end());
            }
            break;
        }
    }
    finish(r);
    return r;
}

std::optional<Matrix> faithful_matrix(const Element& x) {
    switch (x.kind()) {
        case AlgebraKind::matrix:
        case AlgebraKind::block_triangular: return x.as<MatrixData>().value;
        case AlgebraKind::dual: {
            const auto& p = x.as<DualData>();
            const auto n = p.head.rows();
            Matrix m = Matrix::Zero(2 * n, 2 * n);
            m.topLeftCorner(n, n) = p.head;
            m.topRightCorner(n, n) = p.nil;
            m.bottomRightCorner(n, n) = p.head;
            return m;
        }
        case AlgebraKind::convolution: {
            const int grid = x.algebra()->grid();
            const double h = 1.0 / grid;
            const Vector& f = x.as<SampleData>().samples;
            Matrix m = Matrix::Zero(grid, grid);
            for (int i = 1; i < grid; ++i)
                for (int k = 0; k < i; ++k) m(i, k) = h * f(i - k - 1);
            return m;
        }
        case AlgebraKind::unitization: {
            const auto& p = x.as<UnitData>();
            auto inner = faithful_matrix(*p.inner);
            if (!inner) return std::nullopt;
            return Matrix(*inner + p.scalar * Matrix::Identity(inner->rows(), inner->cols()));
        }
        case AlgebraKind::product: {
            std::vector<Matrix> blocks;
            Eigen::Index total = 0;
            for (const auto& c : x.as<TupleData>().parts) {
                auto b = faithful_matrix(c);
                if (!b) return std::nullopt;
                total += b->rows();
                blocks.push_back(std::move(*b));
            }
            Matrix m = Matrix::Zero(total, total);
            Eigen::Index off = 0;
            for (const auto& b : blocks) {
                m.block(off, off, b.rows(), b.cols()) = b;
                off += b.rows();
            }
            return m;
        }
        case AlgebraKind::wiener: return std::nullopt;
    }
    return std::nullopt;
}

Element shift(const Element& x, cd c) { return add(x, scalar(x.algebra(), c)); }

double head_distance(const Element& x, const Element& y) { return head_norm(sub(x, y)); }

}  // namespace idemlift
