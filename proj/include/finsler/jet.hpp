#pragma once

// Truncated multivariate Taylor polynomials ("jets") over two variable groups.
//
// A jet lives in a Layout: n_x base variables truncated at total degree x_cap,
// n_y fiber variables truncated at total degree y_cap. Coefficients are stored
// densely; coefficient k multiplies the monomial exponents(k), so the mixed
// partial derivative of multi-index m equals m! * coefficient(m).
//
// Monomial order (fixed, graded lexicographic): ascending total degree; within
// a degree, exponent vectors (x-group first, then y-group) in descending
// lexicographic order. Index 0 is always the constant term.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace finsler::jet {

struct Caps {
    int x = 1;
    int y = 5;

    friend bool operator==(const Caps&, const Caps&) = default;
};

enum class Group { x, y };

/// Exponent vector over (x-group, y-group).
class MultiIndex {
public:
    MultiIndex(int n_x, int n_y) : n_x_(n_x), exps_(static_cast<std::size_t>(n_x + n_y), 0) {}

    /// Multi-index from lists of differentiation variables, repeats allowed:
    /// of(3, 3, {}, {1, 1, 2}) is d^3 / dy1 dy1 dy2 (0-based indices).
    static MultiIndex of(int n_x, int n_y, std::initializer_list<int> x_vars,
                         std::initializer_list<int> y_vars);
    static MultiIndex of(int n_x, int n_y, std::span<const int> x_vars,
                         std::span<const int> y_vars);

    int n_x() const { return n_x_; }
    int n_y() const { return static_cast<int>(exps_.size()) - n_x_; }
    int& x(int i) { return exps_.at(static_cast<std::size_t>(i)); }
    int& y(int i) { return exps_.at(static_cast<std::size_t>(n_x_ + i)); }
    int x(int i) const { return exps_.at(static_cast<std::size_t>(i)); }
    int y(int i) const { return exps_.at(static_cast<std::size_t>(n_x_ + i)); }
    int x_degree() const;
    int y_degree() const;
    std::span<const int> exponents() const { return exps_; }

private:
    int n_x_;
    std::vector<int> exps_;
};

/// Immutable monomial layout shared by all jets of one shape.
class Layout {
public:
    struct Product {
        std::uint32_t lhs;
        std::uint32_t rhs;
        std::uint32_t out;
    };

    /// Cached, thread-safe lookup.
    static std::shared_ptr<const Layout> get(int n_x, int n_y, Caps caps);

    int n_x() const { return n_x_; }
    int n_y() const { return n_y_; }
    Caps caps() const { return caps_; }
    std::size_t size() const { return count_; }

    /// Exponents of monomial k (length n_x + n_y).
    std::span<const int> exponents(std::size_t k) const;
    /// Position of the exponent vector, or size() when outside the caps.
    std::size_t find(std::span<const int> exps) const;
    /// Multi-index factorial of monomial k.
    double factorial(std::size_t k) const { return factorials_[k]; }
    /// Every (lhs, rhs, out) with monomial(lhs) * monomial(rhs) = monomial(out) inside the caps.
    const std::vector<Product>& products() const { return products_; }
    /// Largest total degree present (x_cap + y_cap over nonempty groups).
    int max_total_degree() const { return max_total_; }

    Layout(int n_x, int n_y, Caps caps);

private:
    std::size_t key(std::span<const int> exps) const;

    int n_x_;
    int n_y_;
    Caps caps_;
    std::size_t count_ = 0;
    int max_total_ = 0;
    std::vector<int> exps_;
    std::vector<double> factorials_;
    std::vector<std::uint32_t> lookup_;
    std::vector<Product> products_;
};

using LayoutPtr = std::shared_ptr<const Layout>;

class TaylorValue {
public:
    TaylorValue(LayoutPtr layout, double constant);

    static TaylorValue constant(LayoutPtr layout, double value) { return {std::move(layout), value}; }

    /// Expansion of a coordinate function: constant term `value`, unit linear term in its own slot.
    static TaylorValue variable(LayoutPtr layout, Group group, int index, double value);

    const LayoutPtr& layout() const { return layout_; }
    Caps caps() const { return layout_->caps(); }
    double value() const { return coeffs_[0]; }
    std::span<const double> coefficients() const { return coeffs_; }
    std::span<double> coefficients() { return coeffs_; }

    /// Raw Taylor coefficient of the monomial.
    double coefficient(const MultiIndex& idx) const;
    /// Mixed partial derivative at the expansion point.
    double derivative(const MultiIndex& idx) const;
    /// Partial derivative in the listed variables (0-based, repeats allowed).
    double d(std::initializer_list<int> x_vars, std::initializer_list<int> y_vars) const;
    double dy(std::initializer_list<int> y_vars) const { return d({}, y_vars); }

    /// Derivative as a jet; the differentiated group's cap drops by one.
    TaylorValue differentiate(Group group, int index) const;
    /// Re-expressed with smaller caps (drops monomials outside them).
    TaylorValue truncate(Caps caps) const;

    TaylorValue operator-() const;
    TaylorValue& operator+=(const TaylorValue& rhs);
    TaylorValue& operator-=(const TaylorValue& rhs);
    TaylorValue& operator*=(const TaylorValue& rhs);
    TaylorValue& operator/=(const TaylorValue& rhs);
    TaylorValue& operator+=(double rhs);
    TaylorValue& operator-=(double rhs);
    TaylorValue& operator*=(double rhs);
    TaylorValue& operator/=(double rhs);

private:
    void require_same_shape(const TaylorValue& rhs, const char* op) const;

    LayoutPtr layout_;
    std::vector<double> coeffs_;
};

TaylorValue operator+(TaylorValue a, const TaylorValue& b);
TaylorValue operator-(TaylorValue a, const TaylorValue& b);
TaylorValue operator*(const TaylorValue& a, const TaylorValue& b);
TaylorValue operator/(const TaylorValue& a, const TaylorValue& b);
TaylorValue operator+(TaylorValue a, double b);
TaylorValue operator+(double a, TaylorValue b);
TaylorValue operator-(TaylorValue a, double b);
TaylorValue operator-(double a, const TaylorValue& b);
TaylorValue operator*(TaylorValue a, double b);
TaylorValue operator*(double a, TaylorValue b);
TaylorValue operator/(TaylorValue a, double b);
TaylorValue operator/(double a, const TaylorValue& b);

/// Absolute tolerance on constant terms of divisors, roots and log arguments.
inline constexpr double kSingularTolerance = 1e-14;

/// Substitutes `a` into the univariate series sum_k series[k] * (t - a0)^k.
TaylorValue compose(std::span<const double> series, const TaylorValue& a);

TaylorValue reciprocal(const TaylorValue& a);
TaylorValue sqrt(const TaylorValue& a);
TaylorValue exp(const TaylorValue& a);
TaylorValue log(const TaylorValue& a);
TaylorValue pow(const TaylorValue& a, double exponent);
TaylorValue sin(const TaylorValue& a);
TaylorValue cos(const TaylorValue& a);
TaylorValue atan(const TaylorValue& a);
/// Real branch 1/2 ln|(1+z)/(1-z)|; for |z| > 1 this is 1/2 ln((z+1)/(z-1)).
TaylorValue atanh(const TaylorValue& a);
/// atan(num/den), evaluated through den/num when |num| > |den| so den -> 0 stays finite.
TaylorValue atan_ratio(const TaylorValue& num, const TaylorValue& den);
/// atanh(num/den) on the real branch; uses atanh(den/num) (identical value) when |num| > |den|.
TaylorValue atanh_ratio(const TaylorValue& num, const TaylorValue& den);
/// Angle of the point (x, y), continuous off the negative x axis.
TaylorValue atan2(const TaylorValue& y, const TaylorValue& x);
TaylorValue square(const TaylorValue& a);

/// Univariate Taylor coefficients of the elementary functions at t0, orders 0..order.
namespace series {
std::vector<double> exp(double t0, int order);
std::vector<double> log(double t0, int order);
std::vector<double> pow(double t0, double exponent, int order);
std::vector<double> reciprocal(double t0, int order);
std::vector<double> sin(double t0, int order);
std::vector<double> cos(double t0, int order);
std::vector<double> atan(double t0, int order);
std::vector<double> atanh(double t0, int order);
}  // namespace series

/// Jets of all coordinates at (x, y): each group is seeded when its cap is >= 1, constant otherwise.
struct Point {
    std::vector<TaylorValue> x;
    std::vector<TaylorValue> y;
};
Point seed_point(std::span<const double> x, std::span<const double> y, Caps caps);

/// Expansion of one coordinate function.
TaylorValue seed_variable(Group group, int index, double value, int n_x, int n_y, Caps caps);

double extract(const TaylorValue& a, const MultiIndex& idx);

}  // namespace finsler::jet
