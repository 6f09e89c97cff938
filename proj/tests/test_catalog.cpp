#include <doctest.h>

#include "finsler/catalog.hpp"
#include "finsler/errors.hpp"
#include "finsler/verify.hpp"

#include <cmath>
#include <numbers>

using namespace finsler;
using namespace finsler::catalog;

namespace {

const ChartPoint origin3{{0.0, 0.0, 0.0}};
const Direction ones3{{1.0, 1.0, 1.0}};

std::vector<MetricSpec> closed_form_specs() {
    std::vector<MetricSpec> out;
    for (const char* q : {"product", "euclid", "mixed4"}) {
        const auto qf = quadratic_preset(q);
        out.push_back(make_spec("class1", {{"a", 2.0}}, qf));
        out.push_back(make_spec("class1", {{"a", -0.5}}, qf));
        out.push_back(make_spec("class2", {{"a", -3.0}}, qf));
        out.push_back(make_spec("class3", {{"a", 0.5}}, qf));
        out.push_back(make_spec("class4", {{"p", 3.0}, {"q", 1.0}}, qf));
        out.push_back(make_spec("class4", {{"p", -2.0}, {"q", 3.0}}, qf));
        out.push_back(make_spec("shen_eq8", {{"c1", 1.0}, {"c3", 2.0}}, qf));
        out.push_back(make_spec("asanov_eq9", {{"g", -1.2}}, qf));
    }
    out.push_back(make_spec("example31", {}));
    out.push_back(make_spec("example32", {}));
    out.push_back(make_spec("example33", {}));
    return out;
}

verify::SamplePlan plan(int n, std::uint64_t seed = 3) {
    verify::SamplePlan p;
    p.n_points = n;
    p.seed = seed;
    return p;
}

DomainGuard joint(const FinslerField& F, const SprayField& S) {
    return [F, S](std::span<const double> x, std::span<const double> y) {
        return F.domain_guard(x, y) && S.domain_guard(x, y) &&
               !metric_tensor(F, ChartPoint({x.begin(), x.end()}), Direction({y.begin(), y.end()})).degenerate;
    };
}

}  // namespace

TEST_CASE("hand-substituted Finsler values") {
    const auto c1 = make_spec("class1", {{"a", 1.0}}, quadratic_preset("product"));
    CHECK(build_finsler(c1).value(origin3, ones3) == doctest::Approx(2.0 * std::exp(0.5)).epsilon(1e-13));
    const auto e31 = make_spec("example31", {});
    const double expected = std::sqrt(3.0) * std::exp(std::numbers::pi / (3.0 * std::sqrt(3.0)));
    CHECK(build_finsler(e31).value(origin3, ones3) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("hand-substituted sprays") {
    const auto e33 = closed_form_spray(make_spec("example33", {}));
    const auto G = e33.spray.values(ChartPoint({0, 0, 0, 0}), Direction({1, 1, 1, 1}));
    CHECK(G[0] == doctest::Approx(-0.5).epsilon(1e-14));
    for (int m = 1; m < 4; ++m) CHECK(G[static_cast<std::size_t>(m)] == doctest::Approx((2 + std::sqrt(2.0)) / 2).epsilon(1e-14));

    const auto c2 = closed_form_spray(make_spec("class2", {{"a", 2.0}}, quadratic_preset("product")));
    CHECK(c2.P.value(origin3, ones3) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));

    for (double a : {-2.0, 0.5, 2.0}) {
        const auto c4 = closed_form_spray(make_spec("class4", {{"p", 2 * a}, {"q", a * a - 1}}));
        const auto c1 = closed_form_spray(make_spec("class1", {{"a", a}}));
        CHECK(c4.kp == doctest::Approx(1 / a));
        CHECK(c4.kp == doctest::Approx(c1.kp));
        CHECK(c4.kg == doctest::Approx(c1.kg));
    }
}

TEST_CASE("printed Berwald components") {
    CHECK(expected_berwald_component(make_spec("example31", {}), origin3, ones3) == doctest::Approx(-3.0 / 16).epsilon(1e-14));
    CHECK(expected_berwald_component(make_spec("class1", {{"a", 1.0}}), origin3, ones3) ==
          doctest::Approx(-3.0 / 8).epsilon(1e-14));
    CHECK(expected_berwald_component(make_spec("class3", {{"a", 2.0}}), origin3, ones3) ==
          doctest::Approx(-9.0 / 32).epsilon(1e-14));
    CHECK(expected_berwald_component(make_spec("alpha", {}), origin3, ones3) == 0.0);

    const auto e31 = make_spec("example31", {});
    const auto B = berwald_tensor(closed_form_spray(e31).spray, origin3, ones3);
    CHECK(B(1, 1, 1, 1) == doctest::Approx(-3.0 / 16).epsilon(1e-10));
}

TEST_CASE("closed-form sprays agree with the geodesic spray and the printed components") {
    for (const auto& spec : closed_form_specs()) {
        CAPTURE(spec.describe());
        const auto F = build_finsler(spec);
        const auto cf = closed_form_spray(spec);
        const auto ad = geodesic_spray_field(F);
        const auto samples = verify::draw_samples(F.dim, joint(F, cf.spray), plan(20));
        for (const auto& s : samples) {
            const auto a = cf.spray.values(s.x, s.y);
            const auto b = ad.values(s.x, s.y);
            double d = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
            CHECK(d <= 1e-8 * std::max(1.0, linalg::max_abs(b)));

            const double lambda = 1.7;
            CHECK(cf.P.value(s.x, s.y.scaled(lambda)) ==
                  doctest::Approx(lambda * cf.P.value(s.x, s.y)).epsilon(1e-12));
            const Jet P = cf.P.expand(s.x, s.y, {0, 2});
            for (int m = 1; m < F.dim; ++m) CHECK(std::abs(P.dy({0, m})) <= 1e-10 * std::max(1.0, std::abs(P.value())));

            const auto B = berwald_tensor(cf.spray, s.x, s.y);
            const double printed = expected_berwald_component(spec, s.x, s.y);
            CHECK(B(1, 1, 1, 1) == doctest::Approx(printed).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("Shen psi: both printed forms give the same profile") {
    for (auto [c1, c3] : {std::pair{1.0, 2.0}, std::pair{2.0, 0.5}, std::pair{-1.5, 1.0}, std::pair{0.7, 0.0}}) {
        const double rho = std::hypot(c1, c3);
        const double m = std::sqrt((2 + c3) * (2 + c3) - rho * rho);
        const auto spec = make_spec("shen_eq8", {{"c1", c1}, {"c3", c3}});
        const auto phi = *phi_function(spec);
        for (int i = -19; i <= 19; ++i) {
            const double s = i / 20.0;
            const double R = std::sqrt(1 - s * s);
            const double num2 = ((2 + c3) * c3 + rho * (rho - c1)) * s + (c3 * rho - (2 + c3) * (rho - c1)) * R;
            const double den2 = (c3 * R + (rho - c1) * s) * m;
            if (std::abs(den2) < 1e-6 || 1 + s * (c1 * R + c3 * s) <= 0) continue;
            const double second = std::sqrt(1 + s * (c1 * R + c3 * s)) * std::exp(c1 * std::atan(num2 / den2) / m);
            const double first = alphabeta::univariate_series(phi.phi, s, 0)[0];
            CAPTURE(s);
            // the two forms differ at most by the branch jump of arctan across a pole of psi
            const double jump = std::exp(c1 * std::numbers::pi / m);
            const bool same = std::abs(first - second) <= 1e-9 * std::abs(second) ||
                              std::abs(first - second * jump) <= 1e-9 * std::abs(second * jump) ||
                              std::abs(first * jump - second) <= 1e-9 * std::abs(second);
            CHECK(same);
        }
    }
}

TEST_CASE("class equivalences") {
    for (const char* q : {"product", "euclid", "mixed4"}) {
        for (const auto& pair : class_equivalence_pairs(quadratic_preset(q))) {
            CAPTURE(pair.description);
            CAPTURE(q);
            const auto Fa = build_finsler(pair.a);
            const auto Fb = build_finsler(pair.b);
            const auto guard = [&](std::span<const double> x, std::span<const double> y) {
                return Fa.domain_guard(x, y) && Fb.domain_guard(x, y);
            };
            const auto samples = verify::draw_samples(Fa.dim, guard, plan(50));
            double lo = INFINITY, hi = -INFINITY;
            for (const auto& s : samples) {
                const double ra = Fa.value(s.x, s.y), rb = Fb.value(s.x, s.y);
                const double ratio = (ra * ra) / (rb * rb);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
            if (pair.relation == Relation::identical) {
                CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
            } else {
                CHECK((hi - lo) <= 1e-8 * std::abs(hi));
            }
        }
    }
}

TEST_CASE("parameter rules") {
    CHECK_THROWS_AS(make_spec("class1", {{"a", 0.0}}), InvalidParameter);
    CHECK_THROWS_AS(make_spec("class4", {{"p", 0.0}, {"q", 1.0}}), InvalidParameter);
    CHECK_THROWS_AS(make_spec("shen_eq8", {{"c1", 0.0}, {"c3", 1.0}}), InvalidParameter);
    CHECK_THROWS_AS(make_spec("shen_eq8", {{"c1", 1.0}, {"c3", -1.5}}), InvalidParameter);
    CHECK_THROWS_AS(make_spec("class1", {}), InvalidParameter);
    CHECK_THROWS_AS(make_spec("class1", {{"b", 1.0}}), InvalidParameter);
    CHECK_THROWS_AS(make_spec("nonesuch", {}), InvalidParameter);
    CHECK_THROWS_AS(make_spec("example31", {}, quadratic_preset("euclid")), InvalidParameter);
    CHECK_THROWS_AS(closed_form_spray(make_spec("shen_r3_eq1", {})), Unavailable);
    CHECK_THROWS_AS(closed_form_spray(make_spec("randers_control", {})), Unavailable);
}

TEST_CASE("collapse values raise a degenerate-metric error") {
    CHECK_THROWS_AS(build_finsler(make_spec("class2", {{"a", 1.0}})), DegenerateMetric);
    CHECK_THROWS_AS(build_finsler(make_spec("class2", {{"a", -1.0}})), DegenerateMetric);
    CHECK_THROWS_AS(build_finsler(make_spec("class3", {{"a", 0.0}})), DegenerateMetric);
    CHECK_THROWS_AS(build_finsler(make_spec("class4", {{"p", 2.0}, {"q", -1.0}})), DegenerateMetric);
    CHECK_NOTHROW(build_finsler(make_spec("class2", {{"a", 1.0}}, std::nullopt, {}, "exp(x1)", true)));
    try {
        build_finsler(make_spec("class2", {{"a", 1.0}}));
    } catch (const DegenerateMetric& e) {
        CHECK(std::string(e.what()).find("singular metric: det(g)=") != std::string::npos);
    }
}

TEST_CASE("catalog listing") {
    const auto text = list_catalog();
    int rows = 0;
    for (char c : text) rows += c == '\n';
    CHECK(rows >= 11);
    for (const auto& e : entries()) CHECK(text.find(e.id) != std::string::npos);
    CHECK(text.find("Landsberg, non-Berwald") != std::string::npos);
    CHECK(parse_verdict("landsberg") == Verdict::landsberg_non_berwald);
    CHECK(parse_verdict("Berwald") == Verdict::berwald);
    CHECK(parse_verdict(to_string(Verdict::non_landsberg)) == Verdict::non_landsberg);
    CHECK_THROWS_AS(parse_verdict("riemann"), InvalidParameter);
}
