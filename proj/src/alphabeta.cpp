#include "finsler/alphabeta.hpp"

#include "finsler/errors.hpp"

#include <cmath>
#include <sstream>

namespace finsler::alphabeta {

using jet::Caps;
using jet::Group;
using jet::Layout;
using jet::TaylorValue;

namespace {

constexpr double kDenominatorFloor = 1e-12;

Jet zero_like(const Jet& a) { return Jet(a.layout(), 0.0); }

double as_number(const UnivariateFn& fn, double t) {
    return fn(Jet(Layout::get(0, 0, {0, 0}), t)).value();
}

struct PointValues {
    double f = 0.0;
    double alpha2 = 0.0;
    double beta = 0.0;
};

PointValues point_values(const RiemannSetup& setup, std::span<const double> x, std::span<const double> y) {
    const auto p = jet::seed_point(x, y, {0, 0});
    return {setup.f(p.x[0]).value(), setup.alpha2(p.x, p.y).value(), setup.beta(p.x, p.y).value()};
}

void check_dims(const RiemannSetup& setup, std::size_t nx, std::size_t ny) {
    if (static_cast<int>(nx) != setup.dim() || static_cast<int>(ny) != setup.dim())
        throw ShapeError("point dimension does not match the Riemannian setup");
}

}  // namespace

std::vector<double> univariate_series(const UnivariateFn& fn, double t0, int order) {
    auto layout = Layout::get(0, 1, {0, order});
    const auto t = order > 0 ? TaylorValue::variable(layout, Group::y, 0, t0) : TaylorValue(layout, t0);
    const auto r = fn(t);
    const auto c = r.coefficients();
    return {c.begin(), c.end()};
}

std::vector<Jet> lift(const UnivariateFn& fn, const Jet& a, int derivatives) {
    const int d = a.layout()->max_total_degree();
    const auto s = univariate_series(fn, a.value(), d + derivatives);
    std::vector<Jet> out;
    for (int m = 0; m <= derivatives; ++m) {
        std::vector<double> sm(static_cast<std::size_t>(d) + 1);
        for (int k = 0; k <= d; ++k) {
            double scale = 1.0;
            for (int j = k + 1; j <= k + m; ++j) scale *= j;
            sm[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k + m)] * scale;
        }
        out.push_back(jet::compose(sm, a));
    }
    return out;
}

RiemannSetup::RiemannSetup(UnivariateFn f, linalg::Matrix c, std::string f_label)
    : f_(std::move(f)), c_(std::move(c)), f_label_(std::move(f_label)) {
    if (c_.rows() == 0 || c_.rows() != c_.cols()) throw InvalidParameter("quadratic form c must be square and non-empty");
    const double scale = std::max(1.0, linalg::frobenius_norm(c_));
    for (std::size_t i = 0; i < c_.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(c_(i, j) - c_(j, i)) > 1e-12 * scale) throw InvalidParameter("quadratic form c must be symmetric");
    const double det = linalg::determinant(c_);
    if (!(std::abs(det) > 1e-10)) {
        std::ostringstream os;
        os << "quadratic form c is singular (det " << det << ")";
        throw InvalidParameter(os.str());
    }
    c_inv_ = linalg::inverse(c_);
}

std::pair<Jet, Jet> RiemannSetup::f_and_derivative(const Jet& x1) const {
    auto v = lift(f_, x1, 1);
    return {std::move(v[0]), std::move(v[1])};
}

double RiemannSetup::f(double x1) const { return as_number(f_, x1); }

double RiemannSetup::f_prime(double x1) const { return univariate_series(f_, x1, 1)[1]; }

double RiemannSetup::k(double x1) const {
    const double fv = f(x1);
    return f_prime(x1) / (fv * fv);
}

Jet RiemannSetup::phi_hat(JetArgs y) const {
    Jet acc = zero_like(y[0]);
    const std::size_t m = c_.rows();
    for (std::size_t l = 0; l < m; ++l)
        for (std::size_t u = 0; u < m; ++u)
            if (c_(l, u) != 0.0) acc += c_(l, u) * (y[l + 1] * y[u + 1]);
    return acc;
}

Jet RiemannSetup::alpha2(JetArgs x, JetArgs y) const {
    const Jet fx = f(x[0]);
    return fx * fx * (y[0] * y[0] + phi_hat(y));
}

Jet RiemannSetup::beta(JetArgs x, JetArgs y) const { return f(x[0]) * y[0]; }

void RiemannSetup::require_positive_f(const ChartPoint& x) const {
    const double fv = f(x.x.at(0));
    if (!(fv > 0.0)) {
        std::ostringstream os;
        os << f_label_ << " is not positive at x1=" << x.x[0] << " (value " << fv << ")";
        throw DomainError(os.str());
    }
}

linalg::Matrix RiemannSetup::a(const ChartPoint& x) const {
    const double f2 = std::pow(f(x.x.at(0)), 2);
    const auto n = static_cast<std::size_t>(dim());
    linalg::Matrix m(n, n);
    m(0, 0) = f2;
    for (std::size_t l = 1; l < n; ++l)
        for (std::size_t u = 1; u < n; ++u) m(l, u) = f2 * c_(l - 1, u - 1);
    return m;
}

linalg::Matrix RiemannSetup::a_inv(const ChartPoint& x) const {
    const double f2 = std::pow(f(x.x.at(0)), 2);
    const auto n = static_cast<std::size_t>(dim());
    linalg::Matrix m(n, n);
    m(0, 0) = 1.0 / f2;
    for (std::size_t l = 1; l < n; ++l)
        for (std::size_t u = 1; u < n; ++u) m(l, u) = c_inv_(l - 1, u - 1) / f2;
    return m;
}

std::vector<double> RiemannSetup::b_lower(const ChartPoint& x) const {
    std::vector<double> b(static_cast<std::size_t>(dim()), 0.0);
    b[0] = f(x.x.at(0));
    return b;
}

std::vector<double> RiemannSetup::b_upper(const ChartPoint& x) const {
    std::vector<double> b(static_cast<std::size_t>(dim()), 0.0);
    b[0] = 1.0 / f(x.x.at(0));
    return b;
}

double RiemannSetup::b2(const ChartPoint& x) const {
    const auto lo = b_lower(x);
    const auto up = b_upper(x);
    double s = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) s += lo[i] * up[i];
    return s;
}

linalg::Matrix RiemannSetup::b_cov(const ChartPoint& x) const {
    const double fp = f_prime(x.x.at(0));
    const auto n = static_cast<std::size_t>(dim());
    linalg::Matrix m(n, n);
    for (std::size_t l = 1; l < n; ++l)
        for (std::size_t u = 1; u < n; ++u) m(l, u) = fp * c_(l - 1, u - 1);
    return m;
}

linalg::Tensor3 RiemannSetup::christoffel(const ChartPoint& x) const {
    const double x1 = x.x.at(0);
    const double kf = f_prime(x1) / f(x1);
    const auto n = static_cast<std::size_t>(dim());
    linalg::Tensor3 g(n);
    g(0, 0, 0) = kf;
    for (std::size_t l = 1; l < n; ++l) {
        g(l, 0, l) = kf;
        g(l, l, 0) = kf;
        for (std::size_t u = 1; u < n; ++u) g(0, l, u) = -kf * c_(l - 1, u - 1);
    }
    return g;
}

double RiemannSetup::r00(const ChartPoint& x, const Direction& y) const {
    const auto v = point_values(*this, x.x, y.y);
    return (v.alpha2 - v.beta * v.beta) * f_prime(x.x.at(0)) / (v.f * v.f);
}

FinslerField RiemannSetup::alpha_field() const {
    FinslerField F;
    F.dim = dim();
    F.label = "alpha";
    RiemannSetup self = *this;
    F.eval = [self](JetArgs x, JetArgs y) { return jet::sqrt(self.alpha2(x, y)); };
    F.domain_guard = [self](std::span<const double> x, std::span<const double> y) {
        const auto v = point_values(self, x, y);
        return v.f > 0.0 && v.alpha2 > 0.0;
    };
    return F;
}

std::vector<Jet> riemann_spray(const RiemannSetup& setup, JetArgs x, JetArgs y) {
    const auto [f, fp] = setup.f_and_derivative(x[0]);
    const Jet a2 = setup.alpha2(x, y);
    std::vector<Jet> G;
    G.push_back((2.0 * f * f * y[0] * y[0] - a2) * fp / (2.0 * f * f * f));
    const Jet kf = fp / f;
    for (std::size_t m = 1; m < y.size(); ++m) G.push_back(kf * y[0] * y[m]);
    return G;
}

std::vector<double> riemann_spray(const RiemannSetup& setup, const ChartPoint& x, const Direction& y) {
    return riemann_spray_field(setup).values(x, y);
}

SprayField riemann_spray_field(const RiemannSetup& setup) {
    SprayField s;
    s.dim = setup.dim();
    s.label = "alpha spray";
    s.domain_guard = [setup](std::span<const double> x, std::span<const double>) { return setup.f(x[0]) > 0.0; };
    s.expand = [setup](const ChartPoint& x, const Direction& y, Caps caps) {
        check_dims(setup, x.dim(), y.dim());
        setup.require_positive_f(x);
        const auto p = jet::seed_point(x.x, y.y, caps);
        return riemann_spray(setup, p.x, p.y);
    };
    return s;
}

QThetaSeries q_theta_series(const PhiFunction& phi, double s0, double b2, int order, bool with_ratio) {
    if (!(std::abs(s0) < phi.b0)) {
        std::ostringstream os;
        os << "s=" << s0 << " outside |s| < b0=" << phi.b0 << " for " << phi.label;
        throw DomainError(os.str());
    }
    auto var = [s0](int cap) {
        auto layout = Layout::get(0, 1, {0, cap});
        return cap > 0 ? TaylorValue::variable(layout, Group::y, 0, s0) : TaylorValue(layout, s0);
    };
    auto guard = [&](const Jet& d, const char* what) {
        if (!(std::abs(d.value()) > kDenominatorFloor)) {
            std::ostringstream os;
            os << what << " vanishes at s=" << s0 << " for " << phi.label << " (value " << d.value() << ")";
            throw SingularParameter(os.str());
        }
    };

    const Jet P = phi.phi(var(order + 2));
    const Jet dP = P.differentiate(Group::y, 0);
    const Jet t1 = var(order + 1);
    const Jet qden = P.truncate({0, order + 1}) - t1 * dP;
    guard(qden, "phi - s phi'");
    const Jet Q = dP / qden;

    const Jet dQ = Q.differentiate(Group::y, 0);
    const Jet Qt = Q.truncate({0, order});
    const Jet t0 = var(order);
    const Jet num = Qt - t0 * dQ;
    const Jet tden = 2.0 * (1.0 + t0 * Qt + (b2 - t0 * t0) * dQ);
    guard(tden, "1 + sQ + (b^2 - s^2)Q'");
    if (with_ratio) guard(num, "Q - sQ'");

    auto coeffs = [](const Jet& j) {
        const auto c = j.coefficients();
        return std::vector<double>(c.begin(), c.end());
    };
    QThetaSeries out;
    out.Q = coeffs(Qt);
    out.Theta = coeffs(num / tden);
    out.Theta_ratio = coeffs(dQ / tden);
    if (with_ratio) out.ratio = coeffs(dQ / num);
    return out;
}

QTheta q_theta(const PhiFunction& phi, double s, double b2) {
    const auto ser = q_theta_series(phi, s, b2, 1, true);
    return {ser.Q[0], ser.Theta[0], ser.Q[1], ser.ratio[0]};
}

namespace {

double s_value(const RiemannSetup& setup, std::span<const double> x, std::span<const double> y, bool& ok) {
    const auto v = point_values(setup, x, y);
    ok = v.f > 0.0 && v.alpha2 > 0.0;
    return ok ? v.beta / std::sqrt(v.alpha2) : 0.0;
}

}  // namespace

FinslerField ab_metric(const PhiFunction& phi, const RiemannSetup& setup, std::string label) {
    FinslerField F;
    F.dim = setup.dim();
    F.label = std::move(label);
    F.eval = [phi, setup](JetArgs x, JetArgs y) {
        const Jet alpha = jet::sqrt(setup.alpha2(x, y));
        return alpha * phi.phi(setup.beta(x, y) / alpha);
    };
    F.domain_guard = [phi, setup](std::span<const double> x, std::span<const double> y) {
        bool ok = false;
        const double s = s_value(setup, x, y, ok);
        if (!ok || !(std::abs(s) < phi.b0)) return false;
        try {
            return as_number(phi.phi, s) > 0.0;
        } catch (const Error&) {
            return false;
        }
    };
    return F;
}

SprayField ab_spray_field(const PhiFunction& phi, const RiemannSetup& setup) {
    SprayField S;
    S.dim = setup.dim();
    S.label = "(alpha,beta) spray of " + phi.label;
    S.domain_guard = [phi, setup](std::span<const double> x, std::span<const double> y) {
        bool ok = false;
        const double s = s_value(setup, x, y, ok);
        if (!ok || !(std::abs(s) < phi.b0)) return false;
        try {
            return univariate_series(phi.phi, s, 0)[0] > 0.0;
        } catch (const Error&) {
            return false;
        }
    };
    S.expand = [phi, setup, guard = S.domain_guard](const ChartPoint& x, const Direction& y, Caps caps) {
        check_dims(setup, x.dim(), y.dim());
        setup.require_positive_f(x);
        if (!guard(x.x, y.y)) throw DomainError("(x, y) outside the admissible cone of " + phi.label);
        const auto p = jet::seed_point(x.x, y.y, caps);
        const auto [f, fp] = setup.f_and_derivative(p.x[0]);
        const Jet a2 = setup.alpha2(p.x, p.y);
        const Jet alpha = jet::sqrt(a2);
        const Jet beta = setup.beta(p.x, p.y);
        const Jet s = beta / alpha;
        const int order = s.layout()->max_total_degree();
        const auto ser = q_theta_series(phi, s.value(), 1.0, order, false);
        const Jet Theta = jet::compose(ser.Theta, s);
        const Jet Theta_ratio = jet::compose(ser.Theta_ratio, s);
        const Jet r00 = (a2 - beta * beta) * fp / (f * f);
        auto G = riemann_spray(setup, p.x, p.y);
        const Jet coef = Theta * r00 / alpha;
        for (std::size_t i = 0; i < G.size(); ++i) G[i] += coef * p.y[i];
        G[0] += Theta_ratio * r00 / f;
        return G;
    };
    return S;
}

std::vector<double> ab_spray(const PhiFunction& phi, const RiemannSetup& setup, const ChartPoint& x,
                             const Direction& y) {
    return ab_spray_field(phi, setup).values(x, y);
}

SprayField shen_class_spray_field(double c1, double c3, const RiemannSetup& setup) {
    if (c1 == 0.0) throw InvalidParameter("c1 must be non-zero");
    if (!(1.0 + c3 > 0.0)) throw InvalidParameter("1 + c3 b0 must be positive");
    SprayField S;
    S.dim = setup.dim();
    std::ostringstream os;
    os << "c1/c3 class spray (c1=" << c1 << ", c3=" << c3 << ")";
    S.label = os.str();
    S.domain_guard = [setup](std::span<const double> x, std::span<const double> y) {
        const auto v = point_values(setup, x, y);
        return v.f > 0.0 && v.alpha2 - v.beta * v.beta > 0.0;
    };
    S.expand = [c1, c3, setup, guard = S.domain_guard, label = S.label](const ChartPoint& x, const Direction& y,
                                                                       Caps caps) {
        check_dims(setup, x.dim(), y.dim());
        setup.require_positive_f(x);
        if (!guard(x.x, y.y)) throw DomainError("(x, y) outside the admissible cone of the " + label);
        const auto p = jet::seed_point(x.x, y.y, caps);
        const auto [f, fp] = setup.f_and_derivative(p.x[0]);
        const Jet beta = setup.beta(p.x, p.y);
        const Jet root = jet::sqrt(setup.alpha2(p.x, p.y) - beta * beta);
        const Jet k = fp / (f * f);
        const Jet X = c1 * k * root / (2.0 * (1.0 + c3));
        auto G = riemann_spray(setup, p.x, p.y);
        for (std::size_t i = 0; i < G.size(); ++i) {
            Jet bracket = p.y[i];
            if (i == 0) bracket += (-beta + (c3 / c1) * root) / f;
            G[i] += X * bracket;
        }
        return G;
    };
    return S;
}

std::vector<double> shen_class_spray(double c1, double c3, const RiemannSetup& setup, const ChartPoint& x,
                                     const Direction& y) {
    return shen_class_spray_field(c1, c3, setup).values(x, y);
}

}  // namespace finsler::alphabeta
