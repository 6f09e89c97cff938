#include <doctest.h>

#include "finsler/alphabeta.hpp"
#include "finsler/errors.hpp"

#include <cmath>
#include <random>

using namespace finsler;
using namespace finsler::alphabeta;

namespace {

linalg::Matrix product_c() {
    linalg::Matrix c(2, 2);
    c(0, 1) = c(1, 0) = 0.5;
    return c;
}

RiemannSetup exp_setup(linalg::Matrix c = product_c()) {
    return RiemannSetup([](const Jet& t) { return jet::exp(t); }, std::move(c), "exp(x1)");
}

PhiFunction class1_phi(double a) {
    return {[a](const Jet& s) {
                const Jet r = jet::sqrt(1.0 - s * s);
                const Jet d = a * s + r;
                return d * jet::exp(a * s / d);
            },
            1.0, "class1"};
}

PhiFunction class3_phi(double a) {
    return {[a](const Jet& s) {
                const Jet r = jet::sqrt(1.0 - s * s);
                return a * s + (1.0 - s * s) / (a * s + 2.0 * r);
            },
            1.0, "class3"};
}

PhiFunction class4_phi(double p, double q) {
    const double D = p * p - 4 * q - 4;
    return {[p, q, D](const Jet& s) {
                const Jet r = jet::sqrt(1.0 - s * s);
                const double m = std::sqrt(D);
                return jet::sqrt(1.0 + p * s * r + q * s * s) *
                       jet::exp((p / m) * jet::atanh_ratio(p * s + 2.0 * r, m * s));
            },
            1.0, "class4"};
}

// G^1 = ((y1^2 - phi)/2 + kg phi) f'/f,  G^m = (y1 + kp sqrt(phi)) (f'/f) y^m, for f = exp
SprayField special_form(const RiemannSetup& setup, double kg, double kp) {
    return make_spray(
        setup.dim(),
        [setup, kg, kp](JetArgs x, JetArgs y) {
            const auto [f, fp] = setup.f_and_derivative(x[0]);
            const Jet kf = fp / f;
            const Jet ph = setup.phi_hat(y);
            std::vector<Jet> G{(0.5 * (y[0] * y[0] - ph) + kg * ph) * kf};
            const Jet P = (y[0] + kp * jet::sqrt(ph)) * kf;
            for (std::size_t m = 1; m < y.size(); ++m) G.push_back(P * y[m]);
            return G;
        },
        {}, "special form");
}

struct Sampler {
    std::mt19937_64 rng{11};
    std::uniform_real_distribution<double> ux{-0.5, 0.5}, uy{0.2, 1.5}, u1{-1.0, 1.0};
    ChartPoint x() { return ChartPoint({ux(rng), ux(rng), ux(rng)}); }
    Direction y() { return Direction({u1(rng), uy(rng), uy(rng)}); }
    std::pair<ChartPoint, Direction> draw(const FinslerField& F) {
        for (;;) {
            auto px = x();
            auto py = y();
            py.y[0] = std::abs(py.y[0]);
            if (F.admissible(px, py)) return {px, py};
        }
    }
};

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    REQUIRE(a.size() == b.size());
    double scale = 1.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= tol * scale);
}

}  // namespace

TEST_CASE("riemann spray printed values") {
    RiemannSetup flat([](const Jet& t) { return 0.0 * t + 2.0; }, product_c());
    for (double g : riemann_spray(flat, ChartPoint({0.3, 0, 0}), Direction({1, 2, 3}))) CHECK(g == 0.0);

    auto G = riemann_spray(exp_setup(), ChartPoint({0, 0, 0}), Direction({1, 1, 1}));
    CHECK(std::abs(G[0]) < 1e-15);
    CHECK(G[1] == doctest::Approx(1.0));
    CHECK(G[2] == doctest::Approx(1.0));
}

TEST_CASE("riemann spray and Christoffel symbols agree with the metric of alpha") {
    for (auto c : {product_c(), linalg::Matrix::identity(2)}) {
        auto setup = exp_setup(c);
        auto alpha = setup.alpha_field();
        auto ad = geodesic_spray_field(alpha);
        Sampler smp;
        for (int i = 0; i < 20; ++i) {
            auto x = smp.x();
            auto y = smp.y();
            check_close(riemann_spray(setup, x, y), ad.values(x, y), 1e-9);

            auto G = ad.expand(x, y, {0, 2});
            auto gamma = setup.christoffel(x);
            for (int h = 0; h < 3; ++h)
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        CHECK(std::abs(G[static_cast<std::size_t>(h)].dy({a, b}) - gamma(h, a, b)) < 1e-9);
        }
    }
}

TEST_CASE("covariant derivative of beta") {
    RiemannSetup setup([](const Jet& t) { return 1.0 + t * t / 4.0; }, product_c());
    ChartPoint x({0.4, 0.1, -0.2});
    CHECK(setup.b2(x) == doctest::Approx(1.0).epsilon(1e-14));
    auto a = setup.a(x);
    auto b = setup.b_lower(x);
    auto bij = setup.b_cov(x);
    const double k = setup.k(0.4);
    CHECK(k == doctest::Approx(0.2 / std::pow(1.04, 2)));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(bij(i, j) == doctest::Approx(bij(j, i)));
            CHECK(std::abs(bij(i, j) - k * (a(i, j) - b[i] * b[j])) < 1e-14);
        }
    auto I = a * setup.a_inv(x);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(I(i, j) - (i == j ? 1.0 : 0.0)) < 1e-14);

    // r00 = b_{i|j} y^i y^j when s_ij = 0
    Direction y({0.3, 0.8, 1.1});
    double r = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) r += bij(i, j) * y.y[i] * y.y[j];
    CHECK(setup.r00(x, y) == doctest::Approx(r));
}

TEST_CASE("Q and Theta at s = 0") {
    auto c1 = q_theta(class1_phi(2.0), 0.0);
    CHECK(c1.Q == doctest::Approx(4.0));
    CHECK(c1.Theta == doctest::Approx(0.5));
    auto c4 = q_theta(class4_phi(3.0, 1.0), 0.0);
    CHECK(c4.Q == doctest::Approx(3.0));
    CHECK(c4.Theta == doctest::Approx(0.75));
    auto c3 = q_theta(class3_phi(2.0), 0.0);
    CHECK(c3.Q == doctest::Approx(3.0));
    CHECK(c3.Theta == doctest::Approx(0.75));

    PhiFunction one{[](const Jet& s) { return 0.0 * s + 1.0; }, 1.0, "one"};
    CHECK_THROWS_AS(q_theta(one, 0.4), SingularParameter);
    auto r = q_theta_series(one, 0.4, 1.0, 2, false);
    for (double v : r.Theta) CHECK(v == 0.0);
    for (double v : r.Theta_ratio) CHECK(v == 0.0);
    CHECK_THROWS_AS(q_theta(one, 1.0), DomainError);
    PhiFunction lin{[](const Jet& s) { return s; }, 1.0, "linear"};
    CHECK_THROWS_AS(q_theta(lin, 0.3), SingularParameter);
}

TEST_CASE("(alpha,beta) spray formula") {
    auto setup = exp_setup();
    PhiFunction one{[](const Jet& s) { return 0.0 * s + 1.0; }, 1.0, "one"};
    Sampler smp;
    auto x = smp.x();
    auto y = smp.y();
    CHECK(ab_spray(one, setup, x, y) == riemann_spray(setup, x, y));

    const double a = 2.0;
    auto closed1 = special_form(setup, (a * a - 1) / (2 * a * a), 1 / a);
    auto F1 = ab_metric(class1_phi(a), setup, "class1");
    auto closed4 = special_form(setup, 1.0 / 4.0, 3.0 / 4.0);
    auto F4 = ab_metric(class4_phi(3, 1), setup, "class4");
    for (int i = 0; i < 20; ++i) {
        std::tie(x, y) = smp.draw(F1);
        auto g = ab_spray(class1_phi(a), setup, x, y);
        check_close(g, closed1.values(x, y), 1e-9);
        check_close(g, geodesic_spray(F1, x, y), 1e-8);
        std::tie(x, y) = smp.draw(F4);
        check_close(ab_spray(class4_phi(3, 1), setup, x, y), closed4.values(x, y), 1e-9);
    }

    // Berwald tensors from the composed Q/Theta series
    std::tie(x, y) = smp.draw(F1);
    auto B = berwald_tensor(ab_spray_field(class1_phi(a), setup), x, y);
    auto Bc = berwald_tensor(closed1, x, y);
    for (std::size_t i = 0; i < B.data().size(); ++i)
        CHECK(std::abs(B.data()[i] - Bc.data()[i]) < 1e-8 * std::max(1.0, Bc.max_abs()));
}

TEST_CASE("c1/c3 class spray") {
    RiemannSetup flat([](const Jet& t) { return 0.0 * t + 1.5; }, product_c());
    for (double g : shen_class_spray(2.0, 0.5, flat, ChartPoint({0.2, 0, 0}), Direction({0.3, 1, 1}))) CHECK(g == 0.0);

    auto setup = exp_setup();
    auto G = shen_class_spray(2.0, 0.0, setup, ChartPoint({0, 0, 0}), Direction({1, 1, 1}));
    CHECK(std::abs(G[0]) < 1e-15);
    CHECK(G[1] == doctest::Approx(2.0));
    CHECK(G[2] == doctest::Approx(2.0));

    Sampler smp;
    for (double a : {-2.0, 0.5, 2.0}) {
        auto closed1 = special_form(setup, (a * a - 1) / (2 * a * a), 1 / a);
        for (int i = 0; i < 10; ++i) {
            auto x = smp.x();
            auto y = smp.y();
            check_close(shen_class_spray(2 * a, a * a - 1, setup, x, y), closed1.values(x, y), 1e-9);
        }
    }
    auto F4 = ab_metric(class4_phi(3, 1), setup, "class4");
    for (int i = 0; i < 10; ++i) {
        auto [x, y] = smp.draw(F4);
        check_close(shen_class_spray(3, 1, setup, x, y), ab_spray(class4_phi(3, 1), setup, x, y), 1e-8);
    }
    CHECK_THROWS_AS(shen_class_spray_field(0.0, 1.0, setup), InvalidParameter);
    CHECK_THROWS_AS(shen_class_spray_field(1.0, -1.0, setup), InvalidParameter);
}

TEST_CASE("setup validation") {
    linalg::Matrix sing(2, 2);
    sing(0, 0) = 1.0;
    CHECK_THROWS_AS(exp_setup(sing), InvalidParameter);
    linalg::Matrix asym(2, 2);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS(exp_setup(asym), InvalidParameter);
    RiemannSetup neg([](const Jet& t) { return t; }, product_c());
    CHECK_THROWS_AS(riemann_spray(neg, ChartPoint({-0.5, 0, 0}), Direction({1, 1, 1})), DomainError);
}

TEST_CASE("lift gives derivatives of the univariate function") {
    auto p = jet::seed_point(std::vector<double>{0.3}, std::vector<double>{}, {3, 0});
    auto v = lift([](const Jet& t) { return jet::sin(t); }, 2.0 * p.x[0], 2);
    CHECK(v[0].value() == doctest::Approx(std::sin(0.6)));
    CHECK(v[1].value() == doctest::Approx(std::cos(0.6)));
    CHECK(v[2].value() == doctest::Approx(-std::sin(0.6)));
    CHECK(v[1].d({0}, {}) == doctest::Approx(-2 * std::sin(0.6)));
    CHECK(v[0].d({0, 0, 0}, {}) == doctest::Approx(-8 * std::cos(0.6)));
}
