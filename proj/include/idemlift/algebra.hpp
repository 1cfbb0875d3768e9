#pragma once

// Concrete unital (and a few non-unital) Banach algebras realized at desk
// scale. Elements are immutable values tied to the algebra handle that owns
// them; all arithmetic is exposed as free functions and operators.

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "idemlift/error.hpp"

namespace idemlift {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class AlgebraKind {
    matrix,            // M_n with the operator 2-norm
    dual,              // M_n[eps], eps^2 = 0
    block_triangular,  // [[X, Y], [0, Z]] with X in M_k, Z in M_m
    wiener,            // power series over a base algebra, truncated at degree D
    convolution,       // discretized Volterra convolution on [0, 1], radical
    unitization,       // X (+) C with the l1-sum norm
    product,           // X_1 x ... x X_r with the l-infinity-sum norm
};

std::string_view to_string(AlgebraKind kind) noexcept;

struct AlgebraDescriptor {
    AlgebraKind kind = AlgebraKind::matrix;
    int n = 1;       // matrix / dual size; block: k
    int m = 0;       // block: m
    int degree = 0;  // wiener truncation degree D
    int grid = 0;    // convolution grid size N
    std::vector<AlgebraDescriptor> children;
};

/// Parses descriptors such as `product(unitization(wiener(4, convolution(8))), matrix(3))`.
AlgebraDescriptor parse_algebra_descriptor(std::string_view text);

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

class Algebra {
public:
    AlgebraKind kind() const noexcept { return kind_; }
    /// Matrix size for matrix/dual, k for block-triangular.
    int size() const noexcept { return n_; }
    int block_lower_size() const noexcept { return m_; }
    int degree() const noexcept { return degree_; }
    int grid() const noexcept { return grid_; }
    bool unital() const noexcept { return unital_; }
    bool has_involution() const noexcept { return involution_; }
    /// Smallest C with ||x*|| <= C ||x||; zero when no involution exists.
    double involution_bound() const noexcept { return involution_bound_; }
    /// True when every element has spectrum {0} (in the unitization if needed).
    bool radical() const noexcept { return radical_; }
    const std::vector<AlgebraPtr>& children() const noexcept { return children_; }
    const AlgebraPtr& base() const { return children_.at(0); }
    const std::string& describe() const noexcept { return description_; }
    /// Norm descriptor, e.g. "operator-2", "l1-coefficients".
    std::string_view norm_kind() const noexcept;

    bool same_as(const Algebra& other) const noexcept {
        return this == &other || description_ == other.description_;
    }

    static AlgebraPtr make(AlgebraKind kind, int n, int m, int degree, int grid,
                           std::vector<AlgebraPtr> children);

private:
    Algebra() = default;

    AlgebraKind kind_ = AlgebraKind::matrix;
    int n_ = 1;
    int m_ = 0;
    int degree_ = 0;
    int grid_ = 0;
    bool unital_ = true;
    bool involution_ = true;
    bool radical_ = false;
    double involution_bound_ = 1.0;
    std::vector<AlgebraPtr> children_;
    std::string description_;
};

AlgebraPtr make_matrix_algebra(int n);
AlgebraPtr make_dual_algebra(int n);
AlgebraPtr make_block_algebra(int k, int m);
AlgebraPtr make_convolution_algebra(int grid);
AlgebraPtr make_wiener_algebra(AlgebraPtr base, int degree);
AlgebraPtr make_unitization(AlgebraPtr inner);
AlgebraPtr make_product(std::vector<AlgebraPtr> factors);
AlgebraPtr build_algebra(const AlgebraDescriptor& descriptor);

class Element;

// Payloads. The matrix payload is shared by matrix and block-triangular kinds.
struct MatrixData {
    Matrix value;
};
struct DualData {
    Matrix head;  // b0
    Matrix nil;   // b1, coefficient of eps
};
/// Samples f(t_j), t_j = j/N, j = 0..N-2; the sample at t_{N-1} never enters a product.
struct SampleData {
    Vector samples;
};
struct SeriesData {
    std::vector<Element> coeffs;  // a_0..a_D
    double tail = 0.0;            // bound on the norm of discarded coefficients
};
struct UnitData {
    std::shared_ptr<const Element> inner;
    cd scalar;
};
struct TupleData {
    std::vector<Element> parts;
};

class Element {
public:
    using Payload = std::variant<MatrixData, DualData, SampleData, SeriesData, UnitData, TupleData>;

    Element(AlgebraPtr algebra, Payload payload);

    const AlgebraPtr& algebra() const noexcept { return algebra_; }
    const Payload& payload() const noexcept { return payload_; }
    AlgebraKind kind() const noexcept { return algebra_->kind(); }

    template <class T>
    const T& as() const {
        return std::get<T>(payload_);
    }

private:
    AlgebraPtr algebra_;
    Payload payload_;
};

struct SpectrumReport {
    std::vector<cd> points;
    bool exact = true;
    double radius = 0.0;
};

// Constructors (validate payload shape against the algebra).
Element zero(const AlgebraPtr& algebra);
Element identity(const AlgebraPtr& algebra);
Element scalar(const AlgebraPtr& algebra, cd value);
Element matrix_element(const AlgebraPtr& algebra, Matrix value);
Element dual_element(const AlgebraPtr& algebra, Matrix head, Matrix nil);
Element block_element(const AlgebraPtr& algebra, const Matrix& x, const Matrix& y, const Matrix& z);
Element convolution_element(const AlgebraPtr& algebra, Vector samples);
Element series_element(const AlgebraPtr& algebra, std::vector<Element> coeffs, double tail = 0.0);
Element unit_element(const AlgebraPtr& algebra, Element inner, cd scalar);
Element tuple_element(const AlgebraPtr& algebra, std::vector<Element> parts);

// Arithmetic.
Element add(const Element& x, const Element& y);
Element sub(const Element& x, const Element& y);
Element scale(cd s, const Element& x);
Element mul(const Element& x, const Element& y);
Element inverse(const Element& x);
Element adjoint(const Element& x);
Element power(const Element& x, int exponent);
/// exp(x) by scaling and squaring of the Taylor series (terms below 1e-16 relative).
Element exponential(const Element& x);

double norm(const Element& x);
/// Norm with every tracked tail bound set to zero.
double head_norm(const Element& x);
/// Largest tail bound carried anywhere inside x.
double tail_bound(const Element& x);
bool is_exact_zero(const Element& x);
SpectrumReport spectrum(const Element& x);

/// Faithful dense representation for matrix-representable kinds (none for wiener).
std::optional<Matrix> faithful_matrix(const Element& x);

inline Element operator+(const Element& x, const Element& y) { return add(x, y); }
inline Element operator-(const Element& x, const Element& y) { return sub(x, y); }
inline Element operator-(const Element& x) { return scale(-1.0, x); }
inline Element operator*(const Element& x, const Element& y) { return mul(x, y); }
inline Element operator*(cd s, const Element& x) { return scale(s, x); }
inline Element operator*(double s, const Element& x) { return scale(s, x); }

/// x + c * 1 (the algebra must be unital).
Element shift(const Element& x, cd c);
/// Distance ||x - y|| measured without tails.
double head_distance(const Element& x, const Element& y);

// Matrix helpers shared by several kinds.
double operator_norm(const Matrix& m);
std::vector<cd> eigenvalues(const Matrix& m);
/// LU with partial pivoting; fails with not_invertible above the 1e12 condition threshold.
Matrix invert_matrix(const Matrix& m);

constexpr double kConditionThreshold = 1e12;

}  // namespace idemlift
