#include "finsler/jet.hpp"

#include "finsler/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <tuple>

namespace finsler::jet {

// ---------------------------------------------------------------- MultiIndex

MultiIndex MultiIndex::of(int n_x, int n_y, std::span<const int> x_vars, std::span<const int> y_vars) {
    MultiIndex m(n_x, n_y);
    for (int v : x_vars) {
        if (v < 0 || v >= n_x) throw ShapeError("x variable index out of range: " + std::to_string(v));
        ++m.x(v);
    }
    for (int v : y_vars) {
        if (v < 0 || v >= n_y) throw ShapeError("y variable index out of range: " + std::to_string(v));
        ++m.y(v);
    }
    return m;
}

MultiIndex MultiIndex::of(int n_x, int n_y, std::initializer_list<int> x_vars,
                          std::initializer_list<int> y_vars) {
    return of(n_x, n_y, std::span<const int>(x_vars.begin(), x_vars.size()),
              std::span<const int>(y_vars.begin(), y_vars.size()));
}

int MultiIndex::x_degree() const {
    return std::accumulate(exps_.begin(), exps_.begin() + n_x_, 0);
}

int MultiIndex::y_degree() const {
    return std::accumulate(exps_.begin() + n_x_, exps_.end(), 0);
}

// -------------------------------------------------------------------- Layout

namespace {

void enumerate_group(int n, int cap, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    // depth-first over variables, bounded total degree
    auto rec = [&](auto& self, int var, int remaining) -> void {
        if (var == n) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            cur[static_cast<std::size_t>(var)] = e;
            self(self, var + 1, remaining - e);
        }
        cur[static_cast<std::size_t>(var)] = 0;
    };
    rec(rec, 0, cap);
}

double int_factorial(int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

}  // namespace

Layout::Layout(int n_x, int n_y, Caps caps) : n_x_(n_x), n_y_(n_y), caps_(caps) {
    if (n_x < 0 || n_y < 0 || caps.x < 0 || caps.y < 0) throw ShapeError("negative layout dimension or cap");
    std::vector<std::vector<int>> xs, ys;
    enumerate_group(n_x, caps.x, xs);
    enumerate_group(n_y, caps.y, ys);

    std::vector<std::vector<int>> all;
    all.reserve(xs.size() * ys.size());
    for (const auto& xe : xs) {
        for (const auto& ye : ys) {
            std::vector<int> e = xe;
            e.insert(e.end(), ye.begin(), ye.end());
            all.push_back(std::move(e));
        }
    }
    auto degree = [](const std::vector<int>& e) { return std::accumulate(e.begin(), e.end(), 0); };
    std::sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
        const int da = degree(a), db = degree(b);
        if (da != db) return da < db;
        return a > b;
    });

    const std::size_t dim = static_cast<std::size_t>(n_x + n_y);
    count_ = all.size();
    exps_.reserve(count_ * dim);
    factorials_.reserve(count_);
    for (const auto& e : all) {
        exps_.insert(exps_.end(), e.begin(), e.end());
        double f = 1.0;
        for (int v : e) f *= int_factorial(v);
        factorials_.push_back(f);
        max_total_ = std::max(max_total_, degree(e));
    }

    // Dense key space: base (cap + 1) per variable within each group.
    std::size_t key_space = 1;
    for (int i = 0; i < n_x; ++i) key_space *= static_cast<std::size_t>(caps.x + 1);
    for (int i = 0; i < n_y; ++i) key_space *= static_cast<std::size_t>(caps.y + 1);
    lookup_.assign(key_space, static_cast<std::uint32_t>(count_));
    for (std::size_t k = 0; k < count_; ++k) lookup_[key(exponents(k))] = static_cast<std::uint32_t>(k);

    std::vector<int> sum(dim);
    for (std::size_t i = 0; i < count_; ++i) {
        const auto ei = exponents(i);
        for (std::size_t j = 0; j < count_; ++j) {
            const auto ej = exponents(j);
            for (std::size_t v = 0; v < dim; ++v) sum[v] = ei[v] + ej[v];
            const std::size_t k = find(sum);
            if (k < count_) {
                products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                     static_cast<std::uint32_t>(k)});
            }
        }
    }
}

std::span<const int> Layout::exponents(std::size_t k) const {
    const std::size_t dim = static_cast<std::size_t>(n_x_ + n_y_);
    return {exps_.data() + k * dim, dim};
}

std::size_t Layout::key(std::span<const int> exps) const {
    std::size_t k = 0;
    for (int i = 0; i < n_x_; ++i) k = k * static_cast<std::size_t>(caps_.x + 1) + static_cast<std::size_t>(exps[static_cast<std::size_t>(i)]);
    for (int i = 0; i < n_y_; ++i)
        k = k * static_cast<std::size_t>(caps_.y + 1) + static_cast<std::size_t>(exps[static_cast<std::size_t>(n_x_ + i)]);
    return k;
}

std::size_t Layout::find(std::span<const int> exps) const {
    if (exps.size() != static_cast<std::size_t>(n_x_ + n_y_)) return count_;
    int dx = 0, dy = 0;
    for (int i = 0; i < n_x_; ++i) {
        const int e = exps[static_cast<std::size_t>(i)];
        if (e < 0) return count_;
        dx += e;
    }
    for (int i = 0; i < n_y_; ++i) {
        const int e = exps[static_cast<std::size_t>(n_x_ + i)];
        if (e < 0) return count_;
        dy += e;
    }
    if (dx > caps_.x || dy > caps_.y) return count_;
    return lookup_[key(exps)];
}

std::shared_ptr<const Layout> Layout::get(int n_x, int n_y, Caps caps) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int, int>, std::shared_ptr<const Layout>> cache;
    const auto k = std::make_tuple(n_x, n_y, caps.x, caps.y);
    std::lock_guard lock(mutex);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    auto layout = std::make_shared<const Layout>(n_x, n_y, caps);
    cache.emplace(k, layout);
    return layout;
}

// --------------------------------------------------------------- TaylorValue

TaylorValue::TaylorValue(LayoutPtr layout, double constant)
    : layout_(std::move(layout)), coeffs_(layout_->size(), 0.0) {
    coeffs_[0] = constant;
}

TaylorValue TaylorValue::variable(LayoutPtr layout, Group group, int index, double value) {
    const int n = group == Group::x ? layout->n_x() : layout->n_y();
    const int cap = group == Group::x ? layout->caps().x : layout->caps().y;
    if (index < 0 || index >= n) throw ShapeError("seed index " + std::to_string(index) + " out of range");
    if (cap < 1) throw ShapeError("cannot seed a variable in a group with cap 0");
    TaylorValue t(layout, value);
    MultiIndex m(layout->n_x(), layout->n_y());
    if (group == Group::x) m.x(index) = 1;
    else m.y(index) = 1;
    t.coeffs_[layout->find(m.exponents())] = 1.0;
    return t;
}

double TaylorValue::coefficient(const MultiIndex& idx) const {
    if (idx.n_x() != layout_->n_x() || idx.n_y() != layout_->n_y()) throw ShapeError("multi-index dimension mismatch");
    const std::size_t k = layout_->find(idx.exponents());
    if (k >= layout_->size()) throw ShapeError("multi-index exceeds the jet caps");
    return coeffs_[k];
}

double TaylorValue::derivative(const MultiIndex& idx) const {
    if (idx.n_x() != layout_->n_x() || idx.n_y() != layout_->n_y()) throw ShapeError("multi-index dimension mismatch");
    const std::size_t k = layout_->find(idx.exponents());
    if (k >= layout_->size()) throw ShapeError("multi-index exceeds the jet caps");
    return coeffs_[k] * layout_->factorial(k);
}

double TaylorValue::d(std::initializer_list<int> x_vars, std::initializer_list<int> y_vars) const {
    return derivative(MultiIndex::of(layout_->n_x(), layout_->n_y(), x_vars, y_vars));
}

TaylorValue TaylorValue::differentiate(Group group, int index) const {
    const int n = group == Group::x ? layout_->n_x() : layout_->n_y();
    if (index < 0 || index >= n) throw ShapeError("differentiation index out of range");
    Caps caps = layout_->caps();
    int& cap = group == Group::x ? caps.x : caps.y;
    if (cap < 1) throw ShapeError("cannot differentiate in a group with cap 0");
    --cap;
    auto out_layout = Layout::get(layout_->n_x(), layout_->n_y(), caps);
    TaylorValue out(out_layout, 0.0);
    const std::size_t slot = static_cast<std::size_t>(group == Group::x ? index : layout_->n_x() + index);
    std::vector<int> e;
    for (std::size_t k = 0; k < out_layout->size(); ++k) {
        const auto ek = out_layout->exponents(k);
        e.assign(ek.begin(), ek.end());
        ++e[slot];
        out.coeffs_[k] = e[slot] * coeffs_[layout_->find(e)];
    }
    return out;
}

TaylorValue TaylorValue::truncate(Caps caps) const {
    const Caps own = layout_->caps();
    if (caps.x > own.x || caps.y > own.y) throw ShapeError("truncate cannot raise caps");
    if (caps == own) return *this;
    auto out_layout = Layout::get(layout_->n_x(), layout_->n_y(), caps);
    TaylorValue out(out_layout, 0.0);
    for (std::size_t k = 0; k < out_layout->size(); ++k) out.coeffs_[k] = coeffs_[layout_->find(out_layout->exponents(k))];
    return out;
}

void TaylorValue::require_same_shape(const TaylorValue& rhs, const char* op) const {
    if (layout_ == rhs.layout_) return;
    throw ShapeError(std::string("jet shape mismatch in ") + op);
}

TaylorValue TaylorValue::operator-() const {
    TaylorValue r = *this;
    for (double& c : r.coeffs_) c = -c;
    return r;
}

TaylorValue& TaylorValue::operator+=(const TaylorValue& rhs) {
    require_same_shape(rhs, "+");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
    return *this;
}

TaylorValue& TaylorValue::operator-=(const TaylorValue& rhs) {
    require_same_shape(rhs, "-");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
    return *this;
}

TaylorValue& TaylorValue::operator*=(const TaylorValue& rhs) {
    require_same_shape(rhs, "*");
    std::vector<double> out(coeffs_.size(), 0.0);
    for (const auto& p : layout_->products()) out[p.out] += coeffs_[p.lhs] * rhs.coeffs_[p.rhs];
    coeffs_ = std::move(out);
    return *this;
}

TaylorValue& TaylorValue::operator/=(const TaylorValue& rhs) {
    require_same_shape(rhs, "/");
    return *this *= reciprocal(rhs);
}

TaylorValue& TaylorValue::operator+=(double rhs) {
    coeffs_[0] += rhs;
    return *this;
}

TaylorValue& TaylorValue::operator-=(double rhs) {
    coeffs_[0] -= rhs;
    return *this;
}

TaylorValue& TaylorValue::operator*=(double rhs) {
    for (double& c : coeffs_) c *= rhs;
    return *this;
}

TaylorValue& TaylorValue::operator/=(double rhs) {
    if (std::abs(rhs) <= kSingularTolerance) throw SingularPoint("division by a near-zero scalar", rhs);
    for (double& c : coeffs_) c /= rhs;
    return *this;
}

TaylorValue operator+(TaylorValue a, const TaylorValue& b) { return a += b; }
TaylorValue operator-(TaylorValue a, const TaylorValue& b) { return a -= b; }
TaylorValue operator*(const TaylorValue& a, const TaylorValue& b) {
    TaylorValue r = a;
    return r *= b;
}
TaylorValue operator/(const TaylorValue& a, const TaylorValue& b) {
    TaylorValue r = a;
    return r /= b;
}
TaylorValue operator+(TaylorValue a, double b) { return a += b; }
TaylorValue operator+(double a, TaylorValue b) { return b += a; }
TaylorValue operator-(TaylorValue a, double b) { return a -= b; }
TaylorValue operator-(double a, const TaylorValue& b) {
    TaylorValue r = -b;
    return r += a;
}
TaylorValue operator*(TaylorValue a, double b) { return a *= b; }
TaylorValue operator*(double a, TaylorValue b) { return b *= a; }
TaylorValue operator/(TaylorValue a, double b) { return a /= b; }
TaylorValue operator/(double a, const TaylorValue& b) { return reciprocal(b) *= a; }

// ------------------------------------------------------------ series (1-D)

namespace series {

std::vector<double> exp(double t0, int order) {
    std::vector<double> c(static_cast<std::size_t>(order + 1));
    double v = std::exp(t0);
    for (int k = 0; k <= order; ++k) {
        c[static_cast<std::size_t>(k)] = v;
        v /= (k + 1);
    }
    return c;
}

std::vector<double> log(double t0, int order) {
    std::vector<double> c(static_cast<std::size_t>(order + 1));
    c[0] = std::log(t0);
    double p = 1.0;
    for (int k = 1; k <= order; ++k) {
        p /= t0;
        c[static_cast<std::size_t>(k)] = (k % 2 == 1 ? 1.0 : -1.0) * p / k;
    }
    return c;
}

std::vector<double> pow(double t0, double exponent, int order) {
    std::vector<double> c(static_cast<std::size_t>(order + 1));
    c[0] = exponent == 0.5 ? std::sqrt(t0) : std::pow(t0, exponent);
    double binom = 1.0;
    for (int k = 1; k <= order; ++k) {
        binom *= (exponent - (k - 1)) / k;
        c[static_cast<std::size_t>(k)] = c[0] * binom / std::pow(t0, k);
    }
    return c;
}

std::vector<double> reciprocal(double t0, int order) {
    std::vector<double> c(static_cast<std::size_t>(order + 1));
    double p = 1.0 / t0;
    for (int k = 0; k <= order; ++k) {
        c[static_cast<std::size_t>(k)] = (k % 2 == 0 ? 1.0 : -1.0) * p;
        p /= t0;
    }
    return c;
}

namespace {
std::vector<double> sin_cos(double t0, int order, bool is_sin) {
    std::vector<double> c(static_cast<std::size_t>(order + 1));
    const double s = std::sin(t0), co = std::cos(t0);
    // k-th derivative of sin cycles sin, cos, -sin, -cos
    const double cycle_sin[4] = {s, co, -s, -co};
    const double cycle_cos[4] = {co, -s, -co, s};
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= k;
        c[static_cast<std::size_t>(k)] = (is_sin ? cycle_sin[k % 4] : cycle_cos[k % 4]) / fact;
    }
    return c;
}

// Antiderivative series of 1 / (d0 + d1 t + d2 t^2) with given constant term.
std::vector<double> integrate_inverse_quadratic(double value, double d0, double d1, double d2, int order) {
    std::vector<double> q(static_cast<std::size_t>(std::max(order, 1)));
    if (order >= 1) q[0] = 1.0 / d0;
    for (int k = 1; k < order; ++k) {
        double acc = d1 * q[static_cast<std::size_t>(k - 1)];
        if (k >= 2) acc += d2 * q[static_cast<std::size_t>(k - 2)];
        q[static_cast<std::size_t>(k)] = -acc / d0;
    }
    std::vector<double> c(static_cast<std::size_t>(order + 1));
    c[0] = value;
    for (int k = 1; k <= order; ++k) c[static_cast<std::size_t>(k)] = q[static_cast<std::size_t>(k - 1)] / k;
    return c;
}
}  // namespace

std::vector<double> sin(double t0, int order) { return sin_cos(t0, order, true); }
std::vector<double> cos(double t0, int order) { return sin_cos(t0, order, false); }

std::vector<double> atan(double t0, int order) {
    // d/dt atan(t0 + t) = 1 / ((1 + t0^2) + 2 t0 t + t^2)
    return integrate_inverse_quadratic(std::atan(t0), 1.0 + t0 * t0, 2.0 * t0, 1.0, order);
}

std::vector<double> atanh(double t0, int order) {
    // d/dt atanh(t0 + t) = 1 / ((1 - t0^2) - 2 t0 t - t^2), on either real branch
    const double value = 0.5 * std::log(std::abs((1.0 + t0) / (1.0 - t0)));
    return integrate_inverse_quadratic(value, 1.0 - t0 * t0, -2.0 * t0, -1.0, order);
}

}  // namespace series

// ------------------------------------------------------ elementary functions

TaylorValue compose(std::span<const double> s, const TaylorValue& a) {
    if (s.empty()) return TaylorValue(a.layout(), 0.0);
    TaylorValue h = a;
    h.coefficients()[0] = 0.0;
    // h^k vanishes beyond the largest representable total degree
    const std::size_t order = std::min<std::size_t>(s.size() - 1, static_cast<std::size_t>(a.layout()->max_total_degree()));
    TaylorValue r(a.layout(), s[order]);
    for (std::size_t k = order; k-- > 0;) {
        r *= h;
        r += s[k];
    }
    return r;
}

namespace {
int order_of(const TaylorValue& a) { return a.layout()->max_total_degree(); }

void require_positive(const TaylorValue& a, const char* fn) {
    if (!(a.value() > kSingularTolerance)) throw SingularPoint(std::string(fn) + " argument outside the real domain", a.value());
}
}  // namespace

TaylorValue reciprocal(const TaylorValue& a) {
    if (!(std::abs(a.value()) > kSingularTolerance)) throw SingularPoint("division by a near-zero constant term", a.value());
    return compose(series::reciprocal(a.value(), order_of(a)), a);
}

TaylorValue sqrt(const TaylorValue& a) {
    require_positive(a, "sqrt");
    return compose(series::pow(a.value(), 0.5, order_of(a)), a);
}

TaylorValue exp(const TaylorValue& a) { return compose(series::exp(a.value(), order_of(a)), a); }

TaylorValue log(const TaylorValue& a) {
    require_positive(a, "log");
    return compose(series::log(a.value(), order_of(a)), a);
}

TaylorValue pow(const TaylorValue& a, double exponent) {
    if (exponent == 0.0) return TaylorValue(a.layout(), 1.0);
    if (exponent == 1.0) return a;
    if (exponent == 2.0) return a * a;
    require_positive(a, "pow");
    return compose(series::pow(a.value(), exponent, order_of(a)), a);
}

TaylorValue sin(const TaylorValue& a) { return compose(series::sin(a.value(), order_of(a)), a); }
TaylorValue cos(const TaylorValue& a) { return compose(series::cos(a.value(), order_of(a)), a); }
TaylorValue atan(const TaylorValue& a) { return compose(series::atan(a.value(), order_of(a)), a); }

TaylorValue atanh(const TaylorValue& a) {
    const double z = a.value();
    if (!(std::abs(1.0 - z * z) > kSingularTolerance)) throw SingularPoint("atanh argument at a branch point", z);
    return compose(series::atanh(z, order_of(a)), a);
}

TaylorValue square(const TaylorValue& a) { return a * a; }

TaylorValue atan_ratio(const TaylorValue& num, const TaylorValue& den) {
    if (std::abs(num.value()) <= std::abs(den.value())) return atan(num / den);
    // atan(z) = sign(z) pi/2 - atan(1/z)
    const double sign = (num.value() > 0) == (den.value() > 0) ? 1.0 : -1.0;
    return sign * (std::numbers::pi / 2) - atan(den / num);
}

TaylorValue atanh_ratio(const TaylorValue& num, const TaylorValue& den) {
    // 1/2 ln|(1+z)/(1-z)| is invariant under z -> 1/z
    if (std::abs(num.value()) <= std::abs(den.value())) return atanh(num / den);
    return atanh(den / num);
}

TaylorValue atan2(const TaylorValue& y, const TaylorValue& x) {
    const double yv = y.value();
    const double xv = x.value();
    if (yv == 0.0 && xv == 0.0) throw SingularPoint("atan2 at the origin", 0.0);
    if (std::abs(xv) >= std::abs(yv)) {
        auto t = atan(y / x);
        if (xv < 0) t += yv >= 0 ? std::numbers::pi : -std::numbers::pi;
        return t;
    }
    return (yv > 0 ? std::numbers::pi / 2 : -std::numbers::pi / 2) - atan(x / y);
}

Point seed_point(std::span<const double> x, std::span<const double> y, Caps caps) {
    const int n_x = static_cast<int>(x.size());
    const int n_y = static_cast<int>(y.size());
    auto layout = Layout::get(n_x, n_y, caps);
    Point p;
    p.x.reserve(x.size());
    p.y.reserve(y.size());
    for (int i = 0; i < n_x; ++i) {
        const double v = x[static_cast<std::size_t>(i)];
        p.x.push_back(caps.x > 0 ? TaylorValue::variable(layout, Group::x, i, v) : TaylorValue(layout, v));
    }
    for (int i = 0; i < n_y; ++i) {
        const double v = y[static_cast<std::size_t>(i)];
        p.y.push_back(caps.y > 0 ? TaylorValue::variable(layout, Group::y, i, v) : TaylorValue(layout, v));
    }
    return p;
}

TaylorValue seed_variable(Group group, int index, double value, int n_x, int n_y, Caps caps) {
    return TaylorValue::variable(Layout::get(n_x, n_y, caps), group, index, value);
}

double extract(const TaylorValue& a, const MultiIndex& idx) { return a.derivative(idx); }

}  // namespace finsler::jet
