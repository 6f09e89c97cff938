#pragma once

// (alpha, beta)-metrics F = alpha phi(beta/alpha) over the Riemannian setup
//   alpha = f(x1) sqrt((y1)^2 + c_{lm} y^l y^m),  beta = f(x1) y1,
// where c is a constant symmetric non-singular (n-1)x(n-1) matrix.

#include "finsler/geometry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace finsler::alphabeta {

using UnivariateFn = std::function<Jet(const Jet&)>;

/// Taylor coefficients of fn at t0 up to `order`, from one jet evaluation.
std::vector<double> univariate_series(const UnivariateFn& fn, double t0, int order);
/// fn(a) and its first `derivatives` derivatives, each as a jet shaped like `a`.
std::vector<Jet> lift(const UnivariateFn& fn, const Jet& a, int derivatives);

class RiemannSetup {
public:
    RiemannSetup(UnivariateFn f, linalg::Matrix c, std::string f_label = "f");

    int dim() const { return static_cast<int>(c_.rows()) + 1; }
    const linalg::Matrix& c() const { return c_; }
    const linalg::Matrix& c_inv() const { return c_inv_; }
    const std::string& f_label() const { return f_label_; }

    Jet f(const Jet& x1) const { return f_(x1); }
    /// f and f' at x1 as jets.
    std::pair<Jet, Jet> f_and_derivative(const Jet& x1) const;
    double f(double x1) const;
    double f_prime(double x1) const;
    /// k = f'/f^2.
    double k(double x1) const;

    Jet phi_hat(JetArgs y) const;
    Jet alpha2(JetArgs x, JetArgs y) const;
    Jet beta(JetArgs x, JetArgs y) const;

    linalg::Matrix a(const ChartPoint& x) const;
    linalg::Matrix a_inv(const ChartPoint& x) const;
    std::vector<double> b_lower(const ChartPoint& x) const;
    std::vector<double> b_upper(const ChartPoint& x) const;
    double b2(const ChartPoint& x) const;
    /// Covariant derivative b_{i|j}.
    linalg::Matrix b_cov(const ChartPoint& x) const;
    /// gamma^h_{ij} = dot-d_i dot-d_j G_alpha^h.
    linalg::Tensor3 christoffel(const ChartPoint& x) const;
    /// r_00 = (alpha^2 - beta^2) f'/f^2.
    double r00(const ChartPoint& x, const Direction& y) const;

    /// F = alpha as a field, with the guard alpha^2 > 0.
    FinslerField alpha_field() const;
    /// Rejects points where f(x1) <= 0.
    void require_positive_f(const ChartPoint& x) const;

private:
    UnivariateFn f_;
    linalg::Matrix c_;
    linalg::Matrix c_inv_;
    std::string f_label_;
};

/// Geodesic coefficients of alpha:
///   G^1 = (2 f^2 (y1)^2 - alpha^2) f' / (2 f^3),  G^m = (f'/f) y1 y^m.
std::vector<Jet> riemann_spray(const RiemannSetup& setup, JetArgs x, JetArgs y);
std::vector<double> riemann_spray(const RiemannSetup& setup, const ChartPoint& x, const Direction& y);
SprayField riemann_spray_field(const RiemannSetup& setup);

struct PhiFunction {
    UnivariateFn phi;
    double b0 = 1.0;
    std::string label;
};

struct QTheta {
    double Q = 0.0;
    double Theta = 0.0;
    double dQ = 0.0;
    /// Q' / (Q - s Q')
    double ratio = 0.0;
};

/// Q = phi'/(phi - s phi') and Theta = (Q - s Q')/(2(1 + s Q + (b^2 - s^2) Q')), by AD from phi.
QTheta q_theta(const PhiFunction& phi, double s, double b2 = 1.0);

/// Univariate Taylor series (orders 0..order) at s0 of Q, Theta, Q'/(Q - sQ') and of the product
/// Theta Q'/(Q - sQ') = Q'/(2(1 + sQ + (b^2 - s^2)Q')), which stays finite when Q - sQ' = 0.
/// `ratio` is filled (and Q - sQ' = 0 rejected) only when with_ratio is set.
struct QThetaSeries {
    std::vector<double> Q, Theta, ratio, Theta_ratio;
};
QThetaSeries q_theta_series(const PhiFunction& phi, double s0, double b2, int order, bool with_ratio);

/// F = alpha phi(beta/alpha), admissible where |s| < b0 and phi > 0.
FinslerField ab_metric(const PhiFunction& phi, const RiemannSetup& setup, std::string label);

/// G^i = G_alpha^i + Theta r_00 (y^i/alpha + Q'/(Q - sQ') b^i), the s_ij = 0 reduction.
std::vector<double> ab_spray(const PhiFunction& phi, const RiemannSetup& setup, const ChartPoint& x,
                             const Direction& y);
SprayField ab_spray_field(const PhiFunction& phi, const RiemannSetup& setup);

/// Spray of the c1/c3 class with b0 = 1:
///   G^i = G_alpha^i + c1 k sqrt(alpha^2 - beta^2) / (2(1 + c3))
///         * (y^i - beta b^i + (c3/c1) sqrt(alpha^2 - beta^2) b^i).
std::vector<double> shen_class_spray(double c1, double c3, const RiemannSetup& setup, const ChartPoint& x,
                                     const Direction& y);
SprayField shen_class_spray_field(double c1, double c3, const RiemannSetup& setup);

}  // namespace finsler::alphabeta
