#include "finsler/catalog.hpp"

#include "finsler/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace finsler::catalog {

using alphabeta::PhiFunction;
using alphabeta::RiemannSetup;
using alphabeta::UnivariateFn;

namespace {

constexpr double kMargin = 1e-2;
constexpr double kDiscriminantZero = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::berwald: return "Berwald";
        case Verdict::landsberg_non_berwald: return "Landsberg, non-Berwald";
        case Verdict::non_landsberg: return "non-Landsberg";
    }
    return "?";
}

Verdict parse_verdict(const std::string& s) {
    std::string k;
    for (char ch : s)
        if (std::isalnum(static_cast<unsigned char>(ch))) k += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (k == "berwald") return Verdict::berwald;
    if (k == "landsberg" || k == "landsbergnonberwald") return Verdict::landsberg_non_berwald;
    if (k == "nonlandsberg") return Verdict::non_landsberg;
    throw InvalidParameter("unknown verdict '" + s + "' (expected berwald, landsberg, non-landsberg)");
}

QuadraticForm quadratic_preset(const std::string& name) {
    if (name == "product") {
        linalg::Matrix c(2, 2);
        c(0, 1) = c(1, 0) = 0.5;
        return {name, c};
    }
    if (name == "euclid") return {name, linalg::Matrix::identity(2)};
    if (name == "mixed4") {
        linalg::Matrix c(3, 3);
        c(0, 1) = c(1, 0) = 0.5;
        c(2, 2) = 1.0;
        return {name, c};
    }
    throw InvalidParameter("unknown quadratic preset '" + name + "' (expected product, euclid, mixed4)");
}

QuadraticForm quadratic_from_list(const std::vector<double>& entries) {
    const auto m = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(entries.size()))));
    if (m == 0 || m * m != entries.size())
        throw InvalidParameter("quadratic form needs m*m entries, got " + std::to_string(entries.size()));
    linalg::Matrix c(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) c(i, j) = entries[i * m + j];
    return {"custom", c};
}

const std::vector<EntryInfo>& entries() {
    static const std::vector<EntryInfo> table{
        {"class1", {{"a", std::nullopt}}, "a≠0", "first class, exponential profile", Verdict::landsberg_non_berwald, "", true},
        {"class2", {{"a", std::nullopt}}, "a≠0,±1", "second class, power profile", Verdict::landsberg_non_berwald, "", true},
        {"class3", {{"a", std::nullopt}}, "a≠0", "third class, rational profile", Verdict::landsberg_non_berwald, "", true},
        {"class4", {{"p", std::nullopt}, {"q", std::nullopt}}, "p≠0, q≠-1", "fourth class, general profile",
         Verdict::landsberg_non_berwald, "", true},
        {"shen_eq8", {{"c1", std::nullopt}, {"c3", std::nullopt}, {"c4", 1.0}}, "c1≠0, 1+c3>0, c4>0, c1²<4+4c3",
         "Shen's family, arctan form", Verdict::landsberg_non_berwald, "", true},
        {"asanov_eq9", {{"g", std::nullopt}, {"c4", 1.0}}, "0<|g|<2, c4>0", "Asanov's family (c3=0)",
         Verdict::landsberg_non_berwald, "", true},
        {"example31", {}, "-", "Asanov g=1, phi=y2*y3", Verdict::landsberg_non_berwald, "product", true},
        {"example32", {}, "-", "Asanov g=1, phi=(y2)^2+(y3)^2", Verdict::landsberg_non_berwald, "euclid", true},
        {"example33", {}, "-", "Asanov g=1 in R^4, phi=y2*y3+(y4)^2", Verdict::landsberg_non_berwald, "mixed4", true},
        {"shen_r3_eq1", {}, "-", "Shen's conformally Berwald example on R^3", Verdict::landsberg_non_berwald, "euclid", false},
        {"alpha", {}, "-", "control: the Riemannian metric alpha", Verdict::berwald, "", true},
        {"randers_control", {{"eps", 0.5}}, "|eps|<1", "control: Randers metric alpha + eps*beta", Verdict::non_landsberg,
         "", false},
    };
    return table;
}

const EntryInfo& entry(const std::string& id) {
    for (const auto& e : entries())
        if (e.id == id) return e;
    std::string ids;
    for (const auto& e : entries()) ids += (ids.empty() ? "" : ", ") + e.id;
    throw InvalidParameter("unknown metric id '" + id + "' (known: " + ids + ")");
}

double MetricSpec::param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) throw InvalidParameter(id + " has no parameter '" + name + "'");
    return it->second;
}

std::string MetricSpec::describe() const {
    std::ostringstream os;
    os << id;
    for (const auto& [k, v] : params) os << ' ' << k << '=' << v;
    os << " [" << quadratic << ", f=" << setup.f_label() << ']';
    return os.str();
}

namespace {

void require(bool ok, const std::string& id, const std::string& what) {
    if (!ok) throw InvalidParameter(id + ": " + what);
}

void validate_params(const MetricSpec& s) {
    const auto& id = s.id;
    if (id == "class1") require(s.param("a") != 0.0, id, "a must be non-zero");
    if (id == "class2") require(s.param("a") != 0.0, id, "a must be non-zero");
    if (id == "class4") require(s.param("p") != 0.0, id, "p must be non-zero");
    if (id == "shen_eq8") {
        const double c1 = s.param("c1"), c3 = s.param("c3");
        require(c1 != 0.0, id, "c1 must be non-zero");
        require(1.0 + c3 > 0.0, id, "1 + c3 must be positive");
        require(s.param("c4") > 0.0, id, "c4 must be positive");
        require(c1 * c1 < 4.0 + 4.0 * c3, id, "the arctan form needs c1^2 < 4 + 4 c3");
    }
    if (id == "asanov_eq9") {
        const double g = s.param("g");
        require(g != 0.0 && std::abs(g) < 2.0, id, "g must satisfy 0 < |g| < 2");
        require(s.param("c4") > 0.0, id, "c4 must be positive");
    }
    if (id == "randers_control") require(std::abs(s.param("eps")) < 1.0, id, "|eps| must be below 1");
}

}  // namespace

MetricSpec make_spec(const std::string& id, std::map<std::string, double> params, std::optional<QuadraticForm> quadratic,
                     UnivariateFn f, std::string f_label, bool unchecked) {
    const auto& e = entry(id);
    for (const auto& [k, v] : params) {
        const bool known = std::any_of(e.params.begin(), e.params.end(), [&](const ParamInfo& p) { return p.name == k; });
        require(known, id, "unknown parameter '" + k + "'");
        require(std::isfinite(v), id, "parameter '" + k + "' must be finite");
    }
    for (const auto& p : e.params) {
        if (params.count(p.name)) continue;
        require(p.default_value.has_value(), id, "missing parameter '" + p.name + "'");
        params[p.name] = *p.default_value;
    }
    QuadraticForm q = quadratic ? *quadratic : quadratic_preset(e.fixed_quadratic.empty() ? "product" : e.fixed_quadratic);
    if (!e.fixed_quadratic.empty())
        require(q.name == e.fixed_quadratic, id, "requires the '" + e.fixed_quadratic + "' quadratic form");
    require(q.c.rows() >= 2, id, "dimension must be at least 3");
    if (!f) {
        f = [](const Jet& t) { return jet::exp(t); };
        f_label = "exp(x1)";
    }
    MetricSpec spec{id, std::move(params), RiemannSetup(std::move(f), q.c, std::move(f_label)), q.name, unchecked};
    validate_params(spec);
    return spec;
}

namespace {

struct Scalars {
    Jet f, alpha2, beta, root;
};

Scalars scalars(const RiemannSetup& setup, JetArgs x, JetArgs y) {
    Jet f = setup.f(x[0]);
    Jet a2 = setup.alpha2(x, y);
    Jet b = f * y[0];
    Jet root = jet::sqrt(a2 - b * b);
    return {std::move(f), std::move(a2), std::move(b), std::move(root)};
}

using Positives = std::function<std::vector<double>(double s, double r)>;

// Admissible: f > 0, phi > 0, the class-specific positives and the profile stay above kMargin
// (relative to the scale-free coordinates s = beta/|y|, r = sqrt(phi)/|y|).
DomainGuard cone_guard(const RiemannSetup& setup, Positives positives, UnivariateFn prof) {
    return [setup, positives, prof](std::span<const double> x, std::span<const double> y) {
        try {
            const auto p = jet::seed_point(x, y, {0, 0});
            if (!(setup.f(p.x[0]).value() > 0.0)) return false;
            const double ph = setup.phi_hat(p.y).value();
            if (!(ph > 0.0)) return false;
            const double n2 = y[0] * y[0] + ph;
            const double s = y[0] / std::sqrt(n2);
            const double r = std::sqrt(ph / n2);
            if (r < kMargin) return false;
            for (double v : positives(s, r))
                if (!(v > kMargin)) return false;
            return alphabeta::univariate_series(prof, s, 0)[0] > kMargin;
        } catch (const Error&) {
            return false;
        }
    };
}

double discriminant(double p, double q) { return p * p - 4.0 * q - 4.0; }

bool delegates_to_class1(const MetricSpec& s) {
    return s.id == "class4" && std::abs(discriminant(s.param("p"), s.param("q"))) <= kDiscriminantZero;
}

// Shen's psi numerator and denominator (first printed form, with sqrt((2+c3)^2 - r^2)).
std::pair<Jet, Jet> shen_psi(double c1, double c3, const Jet& s, const Jet& R) {
    const double rho = std::hypot(c1, c3);
    const double m = std::sqrt((2 + c3) * (2 + c3) - rho * rho);
    Jet num = (c3 * rho + (2 + c3) * (c1 + rho)) * s + (rho * (c1 + rho) - (2 + c3) * c3) * R;
    Jet den = m * (c3 * s + (c1 + rho) * R);
    return {std::move(num), std::move(den)};
}

std::pair<Jet, Jet> asanov_psi(double g, const Jet& s, const Jet& R) {
    const double m = std::sqrt(4 - g * g);
    if (g > 0) return {2.0 * s + g * R, m * R};
    return {-(g * s + 2.0 * R), m * s};
}

UnivariateFn profile(const MetricSpec& spec) {
    const auto& id = spec.id;
    if (id == "class1" || delegates_to_class1(spec)) {
        const double a = id == "class1" ? spec.param("a") : spec.param("p") / 2;
        return [a](const Jet& s) {
            const Jet d = a * s + jet::sqrt(1.0 - s * s);
            return d * jet::exp(a * s / d);
        };
    }
    if (id == "class2") {
        const double a = spec.param("a");
        return [a](const Jet& s) {
            const Jet R = jet::sqrt(1.0 - s * s);
            return jet::pow((a + 1) * s + R, (1 + a) / 2) * jet::pow((a - 1) * s + R, (1 - a) / 2);
        };
    }
    if (id == "class3") {
        const double a = spec.param("a");
        return [a](const Jet& s) { return a * s + (1.0 - s * s) / (a * s + 2.0 * jet::sqrt(1.0 - s * s)); };
    }
    if (id == "class4") {
        const double p = spec.param("p"), q = spec.param("q");
        const double D = discriminant(p, q);
        if (D > 0) {
            const double m = std::sqrt(D);
            return [p, q, m](const Jet& s) {
                const Jet R = jet::sqrt(1.0 - s * s);
                return jet::sqrt(1.0 + p * s * R + q * s * s) * jet::exp((p / m) * jet::atanh_ratio(p * s + 2.0 * R, m * s));
            };
        }
        const double m = std::sqrt(-D);
        return [p, q, m](const Jet& s) {
            const Jet R = jet::sqrt(1.0 - s * s);
            return jet::sqrt(1.0 + p * s * R + q * s * s) * jet::exp((p / m) * jet::atan2(m * s, p * s + 2.0 * R));
        };
    }
    if (id == "shen_eq8") {
        const double c1 = spec.param("c1"), c3 = spec.param("c3"), c4 = spec.param("c4");
        const double m = std::sqrt((2 + c3) * (2 + c3) - (c1 * c1 + c3 * c3));
        return [c1, c3, c4, m](const Jet& s) {
            const Jet R = jet::sqrt(1.0 - s * s);
            const auto [num, den] = shen_psi(c1, c3, s, R);
            return c4 * jet::sqrt(1.0 + s * (c1 * R + c3 * s)) * jet::exp(c1 * jet::atan_ratio(num, den) / m);
        };
    }
    if (id == "asanov_eq9" || id.rfind("example3", 0) == 0) {
        const double g = id == "asanov_eq9" ? spec.param("g") : 1.0;
        const double c4 = id == "asanov_eq9" ? spec.param("c4") : 1.0;
        return [g, c4](const Jet& s) {
            const Jet R = jet::sqrt(1.0 - s * s);
            const auto [num, den] = asanov_psi(g, s, R);
            return c4 * jet::sqrt(1.0 + g * s * R) * jet::exp(g * jet::atan_ratio(num, den) / std::sqrt(4 - g * g));
        };
    }
    if (id == "alpha") return [](const Jet& s) { return 0.0 * s + 1.0; };
    if (id == "randers_control") {
        const double eps = spec.param("eps");
        return [eps](const Jet& s) { return 1.0 + eps * s; };
    }
    throw Unavailable(id + " is not an (alpha,beta)-metric of the Riemannian setup");
}

Positives positives(const MetricSpec& spec) {
    const auto& id = spec.id;
    if (id == "class1" || delegates_to_class1(spec)) {
        const double a = id == "class1" ? spec.param("a") : spec.param("p") / 2;
        return [a](double s, double r) { return std::vector<double>{a * s + r}; };
    }
    if (id == "class2") {
        const double a = spec.param("a");
        return [a](double s, double r) { return std::vector<double>{(a + 1) * s + r, (a - 1) * s + r}; };
    }
    if (id == "class3") {
        const double a = spec.param("a");
        return [a](double s, double r) {
            const double d = a * s + 2 * r;
            return std::vector<double>{d, d > 0 ? a * s + r * r / d : -1.0};
        };
    }
    if (id == "class4") {
        const double p = spec.param("p"), q = spec.param("q");
        const double D = discriminant(p, q);
        return [p, q, D](double s, double r) {
            std::vector<double> v{1 + p * s * r + q * s * s};
            if (D > 0) v.push_back(std::abs(std::abs(p * s + 2 * r) - std::abs(s) * std::sqrt(D)));
            return v;
        };
    }
    if (id == "shen_eq8") {
        const double c1 = spec.param("c1"), c3 = spec.param("c3");
        return [c1, c3](double s, double r) { return std::vector<double>{1 + s * (c1 * r + c3 * s)}; };
    }
    if (id == "asanov_eq9" || id.rfind("example3", 0) == 0) {
        const double g = id == "asanov_eq9" ? spec.param("g") : 1.0;
        return [g](double s, double r) { return std::vector<double>{1 + g * s * r}; };
    }
    if (id == "randers_control") {
        const double eps = spec.param("eps");
        return [eps](double s, double) { return std::vector<double>{1 + eps * s}; };
    }
    return [](double, double) { return std::vector<double>{}; };
}

FinslerField shen_r3_field() {
    FinslerField F;
    F.dim = 3;
    F.label = "shen_r3_eq1";
    F.eval = [](JetArgs x, JetArgs y) {
        const Jet e2 = jet::exp(2.0 * x[0]);
        const Jet a2 = y[0] * y[0] + e2 * (y[1] * y[1] + y[2] * y[2]);
        const Jet& b = y[0];
        const Jet root = jet::sqrt(a2 - b * b);
        const double r3 = std::sqrt(3.0);
        return jet::sqrt(a2 + b * root) * jet::exp(jet::atan_ratio(2.0 * b + root, r3 * root) / r3);
    };
    F.domain_guard = [](std::span<const double> x, std::span<const double> y) {
        const double h = std::exp(2 * x[0]) * (y[1] * y[1] + y[2] * y[2]);
        const double n2 = y[0] * y[0] + h;
        if (!(h > 0)) return false;
        const double s = y[0] / std::sqrt(n2), r = std::sqrt(h / n2);
        return r > kMargin && 1 + s * r > kMargin;
    };
    return F;
}

bool collapse_candidate(const MetricSpec& s) {
    if (s.id == "class2") return std::abs(std::abs(s.param("a")) - 1.0) == 0.0;
    if (s.id == "class3") return s.param("a") == 0.0;
    if (s.id == "class4") return s.param("q") == -1.0;
    return false;
}

void probe_degeneracy(const MetricSpec& spec, const FinslerField& F) {
    const auto n = static_cast<std::size_t>(F.dim);
    const std::vector<std::vector<double>> candidates{{0.3, 1.0, 1.0, 1.0}, {-0.3, 1.0, 1.0, 1.0}, {0.2, 1.0, 0.5, 0.7},
                                                      {0.6, 0.4, 1.3, 0.2}, {-0.6, 1.2, 0.7, -0.5}};
    for (const auto& c : candidates) {
        ChartPoint x(std::vector<double>(n, 0.0));
        Direction y(std::vector<double>(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n)));
        if (!F.admissible(x, y)) continue;
        const auto m = metric_tensor(F, x, y);
        if (m.degenerate) {
            std::ostringstream os;
            os << "singular metric: det(g)=" << m.det << " for " << spec.describe();
            throw DegenerateMetric(os.str(), m.det);
        }
        return;
    }
}

}  // namespace

FinslerField build_finsler(const MetricSpec& spec) {
    const auto& id = spec.id;
    const RiemannSetup& setup = spec.setup;
    FinslerField F;
    F.dim = setup.dim();
    F.label = spec.describe();

    if (id == "shen_r3_eq1") {
        auto G = shen_r3_field();
        G.label = F.label;
        return G;
    }
    F.domain_guard = cone_guard(setup, positives(spec), profile(spec));

    if (id == "class1" || delegates_to_class1(spec)) {
        const double a = id == "class1" ? spec.param("a") : spec.param("p") / 2;
        F.eval = [setup, a](JetArgs x, JetArgs y) {
            const auto v = scalars(setup, x, y);
            const Jet d = a * v.beta + v.root;
            return d * jet::exp(a * v.beta / d);
        };
    } else if (id == "class2") {
        const double a = spec.param("a");
        F.eval = [setup, a](JetArgs x, JetArgs y) {
            const auto v = scalars(setup, x, y);
            return jet::pow((a + 1) * v.beta + v.root, (1 + a) / 2) * jet::pow((a - 1) * v.beta + v.root, (1 - a) / 2);
        };
    } else if (id == "class3") {
        const double a = spec.param("a");
        F.eval = [setup, a](JetArgs x, JetArgs y) {
            const auto v = scalars(setup, x, y);
            return a * v.beta + (v.alpha2 - v.beta * v.beta) / (a * v.beta + 2.0 * v.root);
        };
    } else if (id == "class4") {
        const double p = spec.param("p"), q = spec.param("q");
        const double D = discriminant(p, q);
        F.eval = [setup, p, q, D](JetArgs x, JetArgs y) {
            const auto v = scalars(setup, x, y);
            const Jet amp = jet::sqrt(v.alpha2 + p * v.beta * v.root + q * v.beta * v.beta);
            const Jet num = p * v.beta + 2.0 * v.root;
            if (D > 0) {
                const double m = std::sqrt(D);
                return amp * jet::exp((p / m) * jet::atanh_ratio(num, m * v.beta));
            }
            const double m = std::sqrt(-D);
            return amp * jet::exp((p / m) * jet::atan2(m * v.beta, num));
        };
    } else if (id.rfind("example3", 0) == 0) {
        F.eval = [setup](JetArgs x, JetArgs y) {
            const Jet ph = setup.phi_hat(y);
            const Jet rp = jet::sqrt(ph);
            const double r3 = std::sqrt(3.0);
            return setup.f(x[0]) * jet::sqrt(y[0] * y[0] + ph + y[0] * rp) *
                   jet::exp(jet::atan_ratio(2.0 * y[0] + rp, r3 * rp) / r3);
        };
    } else if (id == "alpha") {
        F.eval = [setup](JetArgs x, JetArgs y) { return jet::sqrt(setup.alpha2(x, y)); };
    } else if (id == "randers_control") {
        const double eps = spec.param("eps");
        F.eval = [setup, eps](JetArgs x, JetArgs y) {
            return jet::sqrt(setup.alpha2(x, y)) + eps * setup.beta(x, y);
        };
    } else {
        const auto phi = profile(spec);
        F.eval = [setup, phi](JetArgs x, JetArgs y) {
            const Jet alpha = jet::sqrt(setup.alpha2(x, y));
            return alpha * phi(setup.beta(x, y) / alpha);
        };
    }

    if (collapse_candidate(spec) && !spec.unchecked) probe_degeneracy(spec, F);
    return F;
}

ClosedFormSpray special_form_spray(const RiemannSetup& setup, double kg, double kp, std::string label) {
    ClosedFormSpray out;
    out.kg = kg;
    out.kp = kp;
    const int n = setup.dim();
    DomainGuard guard = [setup, kp](std::span<const double> x, std::span<const double> y) {
        const auto p = jet::seed_point(x, y, {0, 0});
        if (!(setup.f(p.x[0]).value() > 0.0)) return false;
        return kp == 0.0 || setup.phi_hat(p.y).value() > 0.0;
    };
    auto kf = [setup](const Jet& x1) {
        const auto [f, fp] = setup.f_and_derivative(x1);
        return fp / f;
    };
    auto G1 = [setup, kg, kf](JetArgs x, JetArgs y) {
        const Jet ph = setup.phi_hat(y);
        return (0.5 * (y[0] * y[0] - ph) + kg * ph) * kf(x[0]);
    };
    auto P = [setup, kp, kf](JetArgs x, JetArgs y) {
        if (kp == 0.0) return y[0] * kf(x[0]);
        return (y[0] + kp * jet::sqrt(setup.phi_hat(y))) * kf(x[0]);
    };
    out.G1 = FinslerField{n, G1, guard, label + " G1"};
    out.P = FinslerField{n, P, guard, label + " P"};
    out.spray = make_spray(
        n,
        [G1, P](JetArgs x, JetArgs y) {
            std::vector<Jet> G{G1(x, y)};
            const Jet p = P(x, y);
            for (std::size_t m = 1; m < y.size(); ++m) G.push_back(p * y[m]);
            return G;
        },
        guard, label + " closed-form spray");
    return out;
}

namespace {

std::pair<double, double> special_coefficients(const MetricSpec& spec) {
    const auto& id = spec.id;
    auto singular = [&](bool bad, const std::string& why) {
        if (bad) throw SingularParameter(spec.describe() + ": closed-form spray undefined (" + why + ")");
    };
    if (id == "class1" || delegates_to_class1(spec)) {
        const double a = id == "class1" ? spec.param("a") : spec.param("p") / 2;
        return {(a * a - 1) / (2 * a * a), 1 / a};
    }
    if (id == "class2") {
        const double a = spec.param("a");
        singular(a * a == 1.0, "a^2 = 1");
        return {(a * a - 2) / (2 * (a * a - 1)), a / (a * a - 1)};
    }
    if (id == "class3") {
        const double a = spec.param("a");
        singular(a == 0.0, "a = 0");
        return {(a * a - 2) / (2 * a * a), 3 / (2 * a)};
    }
    if (id == "class4") {
        const double p = spec.param("p"), q = spec.param("q");
        singular(q == -1.0, "1 + q = 0");
        return {q / (2 * (1 + q)), p / (2 * (1 + q))};
    }
    if (id == "shen_eq8") {
        const double c1 = spec.param("c1"), c3 = spec.param("c3");
        return {c3 / (2 * (1 + c3)), c1 / (2 * (1 + c3))};
    }
    if (id == "asanov_eq9") return {0.0, spec.param("g") / 2};
    if (id.rfind("example3", 0) == 0) return {0.0, 0.5};
    if (id == "alpha") return {0.0, 0.0};
    throw Unavailable(id + " has no closed-form spray");
}

}  // namespace

ClosedFormSpray closed_form_spray(const MetricSpec& spec) {
    const auto [kg, kp] = special_coefficients(spec);
    return special_form_spray(spec.setup, kg, kp, spec.describe());
}

SprayField reference_spray(const MetricSpec& spec) {
    if (entry(spec.id).closed_form) return closed_form_spray(spec).spray;
    if (spec.id == "randers_control") return alphabeta::ab_spray_field(*phi_function(spec), spec.setup);
    return geodesic_spray_field(build_finsler(spec));
}

std::optional<PhiFunction> phi_function(const MetricSpec& spec) {
    if (spec.id == "shen_r3_eq1") return std::nullopt;
    return PhiFunction{profile(spec), 1.0, spec.describe()};
}

double berwald_scale(const MetricSpec& spec, const ChartPoint& x) {
    if (spec.id == "shen_r3_eq1") return 1.0;
    const double x1 = x.x.at(0);
    return std::abs(spec.setup.f_prime(x1) / spec.setup.f(x1));
}

double expected_berwald_component(const MetricSpec& spec, const ChartPoint& x, const Direction& y) {
    if (spec.id == "alpha") return 0.0;
    const double kp = special_coefficients(spec).second;
    const double x1 = x.x.at(0);
    const double k = spec.setup.f_prime(x1) / spec.setup.f(x1);
    const double y2 = y.y.at(1), y3 = y.y.at(2);
    if (spec.quadratic == "product") return kp * (-3.0 / 8.0) * y3 / (y2 * std::sqrt(y2 * y3)) * k;
    if (spec.quadratic == "euclid") return 3.0 * kp * std::pow(y3, 4) / std::pow(std::hypot(y2, y3), 5) * k;
    if (spec.quadratic == "mixed4") {
        const double y4 = y.y.at(3);
        const double ph = y2 * y3 + y4 * y4;
        return kp * (-3.0 / 8.0) * y3 * y3 * (y2 * y3 + 2 * y4 * y4) / std::pow(ph, 2.5) * k;
    }
    throw Unavailable("no printed Berwald component for the '" + spec.quadratic + "' quadratic form");
}

std::vector<EquivalencePair> class_equivalence_pairs(const QuadraticForm& q) {
    std::vector<EquivalencePair> out;
    for (double a : {-2.0, 0.5, 2.0}) {
        out.push_back({make_spec("class1", {{"a", a}}, q), make_spec("class4", {{"p", 2 * a}, {"q", a * a - 1}}, q),
                       Relation::identical, "class1(a) = class4(2a, a^2-1), a=" + fmt(a)});
        out.push_back({make_spec("class2", {{"a", a}}, q), make_spec("class4", {{"p", 2 * a}, {"q", a * a - 2}}, q),
                       Relation::constant_ratio, "class2(a) ~ class4(2a, a^2-2), a=" + fmt(a)});
        out.push_back({make_spec("class3", {{"a", a}}, q),
                       make_spec("class4", {{"p", 1.5 * a}, {"q", (a * a - 2) / 2}}, q), Relation::constant_ratio,
                       "class3(a) ~ class4(3a/2, (a^2-2)/2), a=" + fmt(a)});
    }
    return out;
}

std::string list_catalog() {
    std::vector<std::array<std::string, 4>> rows{{"id", "parameters", "origin", "expected verdict"}};
    for (const auto& e : entries()) {
        std::string params;
        for (const auto& p : e.params) {
            params += (params.empty() ? "" : " ") + p.name;
            if (p.default_value) params += "=" + fmt(*p.default_value);
        }
        std::string cons = e.params.empty() ? "-" : params + "; " + e.constraints;
        rows.push_back({e.id, cons, e.origin, to_string(e.expected)});
    }
    std::array<std::size_t, 4> w{};
    auto width = [](const std::string& s) {
        std::size_t n = 0;
        for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
        return n;
    };
    for (const auto& r : rows)
        for (std::size_t i = 0; i < 4; ++i) w[i] = std::max(w[i], width(r[i]));
    std::ostringstream os;
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < 4; ++i) {
            os << r[i];
            if (i < 3) os << std::string(w[i] - width(r[i]), ' ') << " | ";
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace finsler::catalog
