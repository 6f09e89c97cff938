#include "finsler/verify.hpp"

#include "finsler/errors.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace finsler::verify {

Tolerances tolerance_profile(const std::string& name) {
    Tolerances t;
    if (name == "default") return t;
    if (name == "strict") {
        t.landsberg /= 10;
        t.berwald_floor /= 10;
        t.metrizability /= 10;
        t.homogeneity /= 10;
        t.spray_match /= 10;
        return t;
    }
    if (name == "loose") {
        t.landsberg *= 100;
        t.metrizability *= 100;
        t.homogeneity *= 100;
        t.spray_match *= 100;
        return t;
    }
    throw InvalidParameter("unknown tolerance profile '" + name + "' (expected default, strict, loose)");
}

void SamplePlan::validate() const {
    if (n_points < 1) throw InvalidParameter("n_points must be at least 1");
    if (!(exclusion_angle > 0.0 && exclusion_angle < std::numbers::pi / 2))
        throw InvalidParameter("exclusion angle must lie in (0, pi/2)");
    if (!(x_lo <= x_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi)) throw InvalidParameter("invalid x range");
    if (max_attempts < 1) throw InvalidParameter("max_attempts must be at least 1");
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t s = seed ^ (index * 0xD1B54A32D192ED03ULL);
        eng_.seed(splitmix64(s));
    }
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace

std::vector<Sample> draw_samples(int dim, const DomainGuard& guard, const SamplePlan& plan) {
    plan.validate();
    const double cos_limit = std::cos(plan.exclusion_angle);
    std::vector<Sample> out;
    long long attempts = 0;
    long long rejected = 0;
    for (int i = 0; i < plan.n_points; ++i) {
        Stream rng(plan.seed, static_cast<std::uint64_t>(i));
        bool done = false;
        for (int a = 0; a < plan.max_attempts && !done; ++a) {
            ++attempts;
            std::vector<double> x(static_cast<std::size_t>(dim)), y(static_cast<std::size_t>(dim));
            for (double& v : x) v = plan.x_lo + (plan.x_hi - plan.x_lo) * rng.uniform();
            double n2 = 0.0;
            for (double& v : y) {
                v = rng.normal();
                n2 += v * v;
            }
            const double nrm = std::sqrt(n2);
            if (nrm == 0.0) {
                ++rejected;
                continue;
            }
            for (double& v : y) v /= nrm;
            if (std::abs(y[0]) > cos_limit || (guard && !guard(x, y))) {
                ++rejected;
                continue;
            }
            out.push_back({i, ChartPoint(std::move(x)), Direction(std::move(y))});
            done = true;
        }
        if (!done) {
            const double rate = static_cast<double>(rejected) / static_cast<double>(attempts);
            std::ostringstream os;
            os << "sampler starvation: sample " << i << " found no admissible point in " << plan.max_attempts
               << " draws (rejection rate " << rate << ")";
            throw SamplerStarvation(os.str(), rate);
        }
    }
    return out;
}

void ResidualMax::update(double v, int index) {
    if (sample >= 0 && std::isnan(value)) return;
    if (sample < 0 || v > value || std::isnan(v)) {
        value = v;
        sample = index;
    }
}

namespace {

DomainGuard both(const DomainGuard& a, const DomainGuard& b) {
    if (!a) return b;
    if (!b) return a;
    return [a, b](std::span<const double> x, std::span<const double> y) { return a(x, y) && b(x, y); };
}

double relative_horizontal(const FinslerField& F, const SprayField& S, const ChartPoint& x, const Direction& y) {
    const Jet Fj = F.expand(x, y, {1, 1});
    const auto G = S.expand(x, y, {0, 1});
    double worst = 0.0;
    double scale = 1.0;
    for (int i = 0; i < F.dim; ++i) {
        const double dF = Fj.d({i}, {});
        double sum = 0.0, mag = 0.0;
        for (int j = 0; j < F.dim; ++j) {
            const double term = G[static_cast<std::size_t>(j)].dy({i}) * Fj.dy({j});
            sum += term;
            mag += std::abs(term);
        }
        scale = std::max({scale, std::abs(dF), mag});
        worst = std::max(worst, std::abs(dF - sum));
    }
    return worst / scale;
}

double relative_euler(const FinslerField& F, const ChartPoint& x, const Direction& y) {
    return euler_residual(F, x, y) / std::max(1.0, std::abs(F.value(x, y)));
}

double landsberg_scale(double F, const std::vector<double>& ell, double bmax) {
    return std::max(1.0, 0.5 * std::abs(F) * linalg::norm(ell) * bmax);
}

ClassificationReport classify_impl(const FinslerField& F, const SprayField& S, const std::optional<SprayField>& cross,
                                   const SamplePlan& plan, const ScaleFn& scale_fn) {
    const auto start = std::chrono::steady_clock::now();
    ClassificationReport rep;
    rep.metric = F.label;
    rep.spray_source = S.label;
    rep.plan = plan;
    const auto n = static_cast<std::size_t>(F.dim);
    rep.berwald_components.assign(n * n * n * n, 0.0);
    if (cross) rep.spray_match = ResidualMax{};

    const auto samples = draw_samples(F.dim, both(both(F.domain_guard, S.domain_guard), nondegenerate_guard(F)), plan);
    const double lambda = 2.5;
    for (const auto& smp : samples) {
        const auto t = point_tensors(F, S, smp.x, smp.y);
        double scale = scale_fn ? scale_fn(smp.x) : 1.0;
        if (!(scale > 0.0)) scale = 1.0;

        SampleRow row;
        row.index = smp.index;
        row.x = smp.x.x;
        row.y = smp.y.y;
        row.F = t.F;
        const double bmax = t.Gijkh.max_abs();
        row.berwald = bmax / scale;
        row.landsberg = t.L.max_abs() / landsberg_scale(t.F, t.ell, bmax);
        row.metrizability = relative_horizontal(F, S, smp.x, smp.y);
        row.euler = relative_euler(F, smp.x, smp.y);
        row.homogeneity = std::abs(F.value(smp.x, smp.y.scaled(lambda)) - lambda * t.F) / std::max(1.0, lambda * std::abs(t.F));

        const Jet E = [&] {
            const Jet f3 = F.expand(smp.x, smp.y, {0, 3});
            return f3 * f3;
        }();
        double third = 0.0;
        for (int i = 0; i < F.dim; ++i)
            for (int j = i; j < F.dim; ++j)
                for (int k = j; k < F.dim; ++k) third = std::max(third, std::abs(E.dy({i, j, k})));
        rep.riemann.update(third / std::max(1.0, t.F * t.F), smp.index);

        if (cross) {
            const auto a = cross->values(smp.x, smp.y);
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(a[i] - t.G[i]));
            row.spray_match = d / std::max(1.0, linalg::max_abs(a));
            rep.spray_match->update(row.spray_match, smp.index);
        }
        for (std::size_t c = 0; c < rep.berwald_components.size(); ++c)
            rep.berwald_components[c] = std::max(rep.berwald_components[c], std::abs(t.Gijkh.data()[c]) / scale);

        rep.landsberg.update(row.landsberg, smp.index);
        rep.berwald.update(row.berwald, smp.index);
        rep.metrizability.update(row.metrizability, smp.index);
        rep.euler.update(row.euler, smp.index);
        rep.homogeneity.update(row.homogeneity, smp.index);
        if (plan.keep_samples) rep.samples.push_back(std::move(row));
    }

    const auto& tol = plan.tol;
    if (rep.landsberg.value <= tol.landsberg)
        rep.verdict = rep.berwald.value <= tol.berwald_floor ? catalog::Verdict::berwald : catalog::Verdict::landsberg_non_berwald;
    else
        rep.verdict = catalog::Verdict::non_landsberg;
    rep.riemannian = rep.riemann.value <= tol.spray_match;
    rep.metrizable = rep.metrizability.value <= tol.metrizability && rep.euler.value <= tol.metrizability;
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace

ClassificationReport classify(const FinslerField& F, const std::optional<SprayField>& S, const SamplePlan& plan,
                              const ScaleFn& scale) {
    const SprayField spray = S ? *S : geodesic_spray_field(F);
    return classify_impl(F, spray, std::nullopt, plan, scale);
}

ClassificationReport classify(const catalog::MetricSpec& spec, const SamplePlan& plan, bool oracle_ad) {
    const auto F = build_finsler(spec);
    const auto& e = catalog::entry(spec.id);
    SprayField S = oracle_ad ? geodesic_spray_field(F) : catalog::reference_spray(spec);
    std::optional<SprayField> cross;
    if (!oracle_ad && (e.closed_form || spec.id == "randers_control")) cross = geodesic_spray_field(F);
    auto rep = classify_impl(F, S, cross, plan, [spec](const ChartPoint& x) { return catalog::berwald_scale(spec, x); });
    rep.metric = spec.id;
    rep.params = spec.params;
    rep.quadratic = spec.quadratic;
    rep.f_label = spec.setup.f_label();
    rep.spray_source = oracle_ad ? "geodesic (automatic differentiation)"
                       : e.closed_form ? "closed form"
                       : spec.id == "randers_control" ? "(alpha,beta) formula"
                                                      : "geodesic (automatic differentiation)";
    return rep;
}

nlohmann::ordered_json ClassificationReport::to_json() const {
    using J = nlohmann::ordered_json;
    auto res = [](const ResidualMax& r) { return J{{"max", r.value}, {"sample", r.sample}}; };
    J j;
    j["metric"] = metric;
    j["params"] = J::object();
    for (const auto& [k, v] : params) j["params"][k] = v;
    if (!quadratic.empty()) j["quadratic"] = quadratic;
    if (!f_label.empty()) j["f"] = f_label;
    j["spray"] = spray_source;
    j["plan"] = {{"n_points", plan.n_points},
                 {"seed", plan.seed},
                 {"x_range", {plan.x_lo, plan.x_hi}},
                 {"exclusion_angle", plan.exclusion_angle},
                 {"max_attempts", plan.max_attempts},
                 {"profile", plan.profile},
                 {"tolerances",
                  {{"landsberg", plan.tol.landsberg},
                   {"berwald_floor", plan.tol.berwald_floor},
                   {"metrizability", plan.tol.metrizability},
                   {"homogeneity", plan.tol.homogeneity},
                   {"spray_match", plan.tol.spray_match}}}};
    J r;
    r["landsberg"] = res(landsberg);
    r["berwald"] = res(berwald);
    r["metrizability"] = res(metrizability);
    r["euler"] = res(euler);
    r["homogeneity"] = res(homogeneity);
    r["riemann"] = res(riemann);
    if (spray_match) r["spray_match"] = res(*spray_match);
    J comps = J::object();
    std::size_t n = 0;
    while (n * n * n * n < berwald_components.size()) ++n;
    for (std::size_t c = 0; c < berwald_components.size(); ++c) {
        if (!(berwald_components[c] > plan.tol.berwald_floor)) continue;
        const std::size_t i = c / (n * n * n), jj = c / (n * n) % n, k = c / n % n, h = c % n;
        std::ostringstream key;
        key << "G^" << i + 1 << "_" << jj + 1 << k + 1 << h + 1;
        comps[key.str()] = berwald_components[c];
    }
    r["berwald_components"] = comps;
    j["residuals"] = r;
    j["verdict"] = catalog::to_string(verdict);
    j["riemannian"] = riemannian;
    j["metrizable"] = metrizable;
    J rows = J::array();
    for (const auto& s : samples) {
        J row{{"index", s.index}, {"x", s.x}, {"y", s.y}, {"F", s.F}, {"landsberg", s.landsberg},
              {"berwald", s.berwald}, {"metrizability", s.metrizability}, {"euler", s.euler},
              {"homogeneity", s.homogeneity}};
        if (spray_match) row["spray_match"] = s.spray_match;
        rows.push_back(std::move(row));
    }
    j["samples"] = rows;
    return j;
}

std::string ClassificationReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    const std::size_t n = samples.empty() ? 0 : samples.front().y.size();
    os << "index";
    for (std::size_t i = 0; i < n; ++i) os << ",x" << i + 1;
    for (std::size_t i = 0; i < n; ++i) os << ",y" << i + 1;
    os << ",F,landsberg,berwald,metrizability,euler,homogeneity,spray_match\n";
    for (const auto& s : samples) {
        os << s.index;
        for (double v : s.x) os << ',' << v;
        for (double v : s.y) os << ',' << v;
        os << ',' << s.F << ',' << s.landsberg << ',' << s.berwald << ',' << s.metrizability << ',' << s.euler << ','
           << s.homogeneity << ',' << s.spray_match << '\n';
    }
    return os.str();
}

MetrizabilitySummary check_metrizability(const FinslerField& F, const SprayField& S, const SamplePlan& plan) {
    MetrizabilitySummary out;
    for (const auto& smp : draw_samples(F.dim, both(F.domain_guard, S.domain_guard), plan)) {
        out.horizontal.update(relative_horizontal(F, S, smp.x, smp.y), smp.index);
        out.euler.update(relative_euler(F, smp.x, smp.y), smp.index);
    }
    return out;
}

LandsbergViaP landsberg_via_P(const catalog::ClosedFormSpray& cf, const FinslerField& F, const SamplePlan& plan) {
    LandsbergViaP out;
    const int n = F.dim;
    for (const auto& smp : draw_samples(n, both(both(F.domain_guard, cf.spray.domain_guard), nondegenerate_guard(F)), plan)) {
        const Jet g1 = cf.G1.expand(smp.x, smp.y, {0, 3});
        double g1_scale = std::abs(g1.value()), g1_third = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = j; k < n; ++k) g1_third = std::max(g1_third, std::abs(g1.dy({i, j, k})));
        if (g1_third > 1e-9 * std::max(1.0, g1_scale))
            throw InvalidParameter("spray is not of the special form: G1 is not quadratic in y");

        const Jet P = cf.P.expand(smp.x, smp.y, {0, 3});
        const Jet Fj = F.expand(smp.x, smp.y, {0, 1});
        const double Fv = Fj.value();
        std::vector<double> ell;
        for (int i = 0; i < n; ++i) ell.push_back(Fj.dy({i}));
        double ly = 0.0;
        for (int m = 1; m < n; ++m) ly += ell[static_cast<std::size_t>(m)] * smp.y.y[static_cast<std::size_t>(m)];

        const auto L = landsberg_tensor(F, cf.spray, smp.x, smp.y);
        const double bmax = berwald_tensor(cf.spray, smp.x, smp.y).max_abs();
        const double den = landsberg_scale(Fv, ell, bmax);
        double vp = 0.0, vg = 0.0, vd = 0.0;
        for (int l = 1; l < n; ++l)
            for (int v = 1; v < n; ++v)
                for (int g = 1; g < n; ++g) {
                    const double lp = -0.5 * Fv *
                                      (P.dy({l, v, g}) * ly + P.dy({l, v}) * ell[static_cast<std::size_t>(g)] +
                                       P.dy({v, g}) * ell[static_cast<std::size_t>(l)] +
                                       P.dy({g, l}) * ell[static_cast<std::size_t>(v)]);
                    const double lg = L(l, v, g);
                    vp = std::max(vp, std::abs(lp));
                    vg = std::max(vg, std::abs(lg));
                    vd = std::max(vd, std::abs(lp - lg));
                }
        out.via_p.update(vp / den, smp.index);
        out.general.update(vg / den, smp.index);
        out.difference.update(vd / den, smp.index);
    }
    return out;
}

catalog::ClosedFormSpray perturbed_P(const catalog::ClosedFormSpray& cf, double eps) {
    catalog::ClosedFormSpray out = cf;
    const auto P0 = cf.P.eval;
    const auto G1 = cf.G1.eval;
    auto P = [P0, eps](JetArgs x, JetArgs y) {
        Jet n2 = y[0] * y[0];
        for (std::size_t i = 1; i < y.size(); ++i) n2 += y[i] * y[i];
        return P0(x, y) + eps * y[1] * y[1] / jet::sqrt(n2);
    };
    out.P.eval = P;
    out.P.label = cf.P.label + " (perturbed)";
    out.spray = make_spray(
        cf.spray.dim,
        [G1, P](JetArgs x, JetArgs y) {
            std::vector<Jet> G{G1(x, y)};
            const Jet p = P(x, y);
            for (std::size_t m = 1; m < y.size(); ++m) G.push_back(p * y[m]);
            return G;
        },
        cf.spray.domain_guard, cf.spray.label + " (perturbed P)");
    return out;
}

DomainGuard nondegenerate_guard(const FinslerField& F) {
    return [F](std::span<const double> x, std::span<const double> y) {
        try {
            return !metric_tensor(F, ChartPoint({x.begin(), x.end()}), Direction({y.begin(), y.end()})).degenerate;
        } catch (const Error&) {
            return false;
        }
    };
}

ResidualMax compare_sprays(const SprayField& a, const SprayField& b, const SamplePlan& plan, const DomainGuard& extra) {
    if (a.dim != b.dim) throw ShapeError("compare_sprays: dimensions differ");
    ResidualMax out;
    for (const auto& smp : draw_samples(a.dim, both(both(a.domain_guard, b.domain_guard), extra), plan)) {
        const auto ga = a.values(smp.x, smp.y);
        const auto gb = b.values(smp.x, smp.y);
        double d = 0.0;
        for (std::size_t i = 0; i < ga.size(); ++i) d = std::max(d, std::abs(ga[i] - gb[i]));
        out.update(d / std::max(1.0, linalg::max_abs(gb)), smp.index);
    }
    return out;
}

}  // namespace finsler::verify
