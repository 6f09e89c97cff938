#include <doctest.h>

#include "finsler/errors.hpp"
#include "finsler/verify.hpp"

#include <cmath>

using namespace finsler;
using namespace finsler::verify;

namespace {

SamplePlan plan(int n, std::uint64_t seed = 1) {
    SamplePlan p;
    p.n_points = n;
    p.seed = seed;
    return p;
}

catalog::MetricSpec constant_f(const std::string& id, std::map<std::string, double> params) {
    return catalog::make_spec(id, std::move(params), std::nullopt, [](const Jet& t) { return 0.0 * t + 3.0; }, "3");
}

}  // namespace

TEST_CASE("plan validation and tolerance profiles") {
    SamplePlan p;
    CHECK_NOTHROW(p.validate());
    p.n_points = 0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p = SamplePlan{};
    p.exclusion_angle = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p.exclusion_angle = 1.6;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    CHECK(tolerance_profile("strict").landsberg == doctest::Approx(1e-10));
    CHECK(tolerance_profile("loose").berwald_floor == doctest::Approx(1e-6));
    CHECK_THROWS_AS(tolerance_profile("lax"), InvalidParameter);
}

TEST_CASE("sampling is deterministic per index and respects the exclusion cone") {
    const auto a = draw_samples(3, {}, plan(30, 11));
    const auto b = draw_samples(3, {}, plan(60, 11));
    REQUIRE(a.size() == 30);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x.x == b[i].x.x);
        CHECK(a[i].y.y == b[i].y.y);
        CHECK(std::abs(a[i].y.y[0]) <= std::cos(0.15));
        for (double v : a[i].x.x) CHECK((v >= -0.5 && v <= 0.5));
    }
    const auto c = draw_samples(3, {}, plan(30, 12));
    CHECK(c[0].y.y != a[0].y.y);
}

TEST_CASE("sampler starvation names the rejection rate") {
    SamplePlan p = plan(5);
    p.max_attempts = 20;
    try {
        draw_samples(3, [](std::span<const double>, std::span<const double>) { return false; }, p);
        FAIL("expected starvation");
    } catch (const SamplerStarvation& e) {
        CHECK(std::string(e.what()).find("rejection rate 1") != std::string::npos);
    }
}

TEST_CASE("verdicts") {
    SUBCASE("Riemannian alpha is Berwald") {
        const auto r = classify(catalog::make_spec("alpha", {}, catalog::quadratic_preset("euclid")), plan(30));
        CHECK(r.verdict == catalog::Verdict::berwald);
        CHECK(r.riemannian);
        CHECK(r.metrizable);
    }
    SUBCASE("class1 a=2 is Landsberg, non-Berwald") {
        const auto r = classify(catalog::make_spec("class1", {{"a", 2.0}}), plan(50));
        CHECK(r.verdict == catalog::Verdict::landsberg_non_berwald);
        CHECK(r.landsberg.value <= 1e-9);
        CHECK(r.berwald.value >= 1e-6);
        CHECK(r.metrizability.value <= 1e-9);
        CHECK(r.euler.value <= 1e-10);
        CHECK(r.homogeneity.value <= 1e-10);
        REQUIRE(r.spray_match);
        CHECK(r.spray_match->value <= 1e-8);
        CHECK_FALSE(r.riemannian);
    }
    SUBCASE("constant f is Berwald with a vanishing spray") {
        const auto spec = constant_f("class1", {{"a", 2.0}});
        const auto r = classify(spec, plan(30));
        CHECK(r.verdict == catalog::Verdict::berwald);
        const auto S = catalog::reference_spray(spec);
        for (const auto& s : draw_samples(3, S.domain_guard, plan(10)))
            for (double g : S.values(s.x, s.y)) CHECK(std::abs(g) <= 1e-12);
    }
    SUBCASE("Randers control is non-Landsberg") {
        const auto r = classify(catalog::make_spec("randers_control", {}, catalog::quadratic_preset("euclid")), plan(30));
        CHECK(r.verdict == catalog::Verdict::non_landsberg);
        CHECK(r.metrizable);
    }
    SUBCASE("AD oracle gives the same verdict") {
        const auto spec = catalog::make_spec("class4", {{"p", 3.0}, {"q", 1.0}});
        const auto a = classify(spec, plan(20), false);
        const auto b = classify(spec, plan(20), true);
        CHECK(a.verdict == b.verdict);
        CHECK(b.spray_source.find("automatic") != std::string::npos);
        CHECK_FALSE(b.spray_match);
    }
}

TEST_CASE("verdict monotonicity under a tighter Landsberg tolerance") {
    const auto spec = catalog::make_spec("class3", {{"a", 2.0}});
    SamplePlan p = plan(20);
    auto rank = [](catalog::Verdict v) { return v == catalog::Verdict::non_landsberg ? 1 : 0; };
    int last = rank(classify(spec, p).verdict);
    for (double tol : {1e-12, 1e-15, 1e-17, 0.0}) {
        p.tol.landsberg = tol;
        const int now = rank(classify(spec, p).verdict);
        CHECK(now >= last);
        last = now;
    }
    CHECK(last == 1);
}

TEST_CASE("metrizability against a foreign spray") {
    const auto F = build_finsler(catalog::make_spec("class1", {{"a", 2.0}}));
    const auto own = catalog::closed_form_spray(catalog::make_spec("class1", {{"a", 2.0}}));
    const auto other = catalog::closed_form_spray(catalog::make_spec("class2", {{"a", 2.0}}));
    const auto good = check_metrizability(F, own.spray, plan(30));
    CHECK(good.horizontal.value <= 1e-9);
    CHECK(good.euler.value <= 1e-10);
    const auto bad = check_metrizability(F, other.spray, plan(30));
    CHECK(bad.horizontal.value > 1e-3);
}

TEST_CASE("Landsberg tensor through P") {
    for (const auto& spec : {catalog::make_spec("class1", {{"a", 2.0}}),
                             catalog::make_spec("class4", {{"p", 3.0}, {"q", 1.0}}, catalog::quadratic_preset("euclid")),
                             catalog::make_spec("example33", {})}) {
        CAPTURE(spec.describe());
        const auto F = build_finsler(spec);
        const auto cf = catalog::closed_form_spray(spec);
        const auto r = landsberg_via_P(cf, F, plan(30));
        CHECK(r.via_p.value <= 1e-9);
        CHECK(r.general.value <= 1e-9);
        CHECK(r.difference.value <= 1e-9);

        const auto r1 = landsberg_via_P(perturbed_P(cf, 1e-2), F, plan(30));
        const auto r2 = landsberg_via_P(perturbed_P(cf, 2e-2), F, plan(30));
        CHECK(r1.via_p.value >= 1e-3 * 1e-2);
        CHECK(r1.difference.value <= 1e-9);
        CHECK(r2.via_p.value / r1.via_p.value == doctest::Approx(2.0).epsilon(0.05));
    }
}

TEST_CASE("special form is required") {
    const auto spec = catalog::make_spec("class1", {{"a", 2.0}});
    auto cf = catalog::closed_form_spray(spec);
    cf.G1 = FinslerField{3, [](JetArgs, JetArgs y) { return y[0] * y[0] * y[0] / (y[1] * y[1] + y[2] * y[2]); }, {}, "cubic"};
    CHECK_THROWS_AS(landsberg_via_P(cf, build_finsler(spec), plan(5)), InvalidParameter);
}

TEST_CASE("compare_sprays") {
    const auto spec = catalog::make_spec("class4", {{"p", 3.0}, {"q", 1.0}});
    const auto cf = catalog::closed_form_spray(spec);
    CHECK(compare_sprays(cf.spray, cf.spray, plan(20)).value == 0.0);
    const auto ab = alphabeta::ab_spray_field(*catalog::phi_function(spec), spec.setup);
    CHECK(compare_sprays(cf.spray, ab, plan(20)).value <= 1e-8);
    for (double a : {-2.0, 0.5, 2.0}) {
        const auto shen = alphabeta::shen_class_spray_field(2 * a, a * a - 1, spec.setup);
        const auto c1 = catalog::closed_form_spray(catalog::make_spec("class1", {{"a", a}}));
        CHECK(compare_sprays(shen, c1.spray, plan(20)).value <= 1e-8);
    }
}

TEST_CASE("reports are deterministic and serialize") {
    const auto spec = catalog::make_spec("example31", {});
    const auto a = classify(spec, plan(15, 5));
    const auto b = classify(spec, plan(15, 5));
    CHECK(a.to_json().dump(2) == b.to_json().dump(2));
    CHECK(a.to_csv() == b.to_csv());
    const auto j = a.to_json();
    for (const char* key : {"metric", "params", "plan", "residuals", "verdict", "samples"}) CHECK(j.contains(key));
    CHECK(j["samples"].size() == 15);
    CHECK(j["verdict"] == "Landsberg, non-Berwald");
    CHECK(j["residuals"]["berwald_components"].contains("G^2_222"));
    CHECK_FALSE(j.contains("wall_time_s"));
    const auto csv = a.to_csv();
    CHECK(csv.rfind("index,x1,x2,x3,y1,y2,y3,F,", 0) == 0);
}
