#include "finsler/geometry.hpp"

#include "finsler/errors.hpp"

#include <cmath>
#include <sstream>

namespace finsler {

using jet::Caps;
using jet::Group;

ChartPoint::ChartPoint(std::vector<double> coords) : x(std::move(coords)) {
    for (double v : x)
        if (!std::isfinite(v)) throw DomainError("chart point has a non-finite coordinate");
}

Direction::Direction(std::vector<double> coords) : y(std::move(coords)) {
    bool nonzero = false;
    for (double v : y) {
        if (!std::isfinite(v)) throw DomainError("direction has a non-finite coordinate");
        nonzero = nonzero || v != 0.0;
    }
    if (!nonzero) throw DomainError("direction is the zero vector");
}

Direction Direction::scaled(double lambda) const {
    std::vector<double> v = y;
    for (double& c : v) c *= lambda;
    return Direction(std::move(v));
}

bool FinslerField::admissible(const ChartPoint& x, const Direction& y) const {
    return !domain_guard || domain_guard(x.x, y.y);
}

Jet FinslerField::expand(const ChartPoint& x, const Direction& y, Caps caps) const {
    if (static_cast<int>(x.dim()) != dim || static_cast<int>(y.dim()) != dim)
        throw ShapeError(label + ": point dimension does not match the field dimension");
    if (!admissible(x, y)) throw DomainError(label + ": (x, y) outside the admissible cone");
    const auto p = jet::seed_point(x.x, y.y, caps);
    return eval(p.x, p.y);
}

double FinslerField::value(const ChartPoint& x, const Direction& y) const { return expand(x, y, {0, 0}).value(); }

std::vector<double> SprayField::values(const ChartPoint& x, const Direction& y) const {
    const auto jets = expand(x, y, {0, 0});
    std::vector<double> v;
    v.reserve(jets.size());
    for (const auto& j : jets) v.push_back(j.value());
    return v;
}

SprayField make_spray(int dim, std::function<std::vector<Jet>(JetArgs, JetArgs)> components, DomainGuard guard,
                      std::string label) {
    SprayField s;
    s.dim = dim;
    s.domain_guard = guard;
    s.label = std::move(label);
    s.expand = [dim, components = std::move(components), guard, name = s.label](const ChartPoint& x, const Direction& y,
                                                                               Caps caps) {
        if (static_cast<int>(x.dim()) != dim || static_cast<int>(y.dim()) != dim)
            throw ShapeError(name + ": point dimension does not match the spray dimension");
        if (guard && !guard(x.x, y.y)) throw DomainError(name + ": (x, y) outside the admissible cone");
        const auto p = jet::seed_point(x.x, y.y, caps);
        return components(p.x, p.y);
    };
    return s;
}

SprayField flat_spray(int dim) {
    return make_spray(
        dim,
        [dim](JetArgs, JetArgs y) { return std::vector<Jet>(static_cast<std::size_t>(dim), Jet(y[0].layout(), 0.0)); },
        {}, "flat");
}

namespace {

MetricTensor metric_from_hessian(linalg::Matrix g) {
    MetricTensor m;
    const auto n = static_cast<double>(g.rows());
    m.det = linalg::determinant(g);
    m.scale = std::pow(linalg::frobenius_norm(g), n);
    m.degenerate = !(std::abs(m.det) > kDegenerateDetRatio * m.scale);
    m.g = std::move(g);
    return m;
}

}  // namespace

void require_nondegenerate(const MetricTensor& g, const std::string& label) {
    if (!g.degenerate) return;
    std::ostringstream os;
    os << "singular metric: det(g)=" << g.det << " (threshold " << kDegenerateDetRatio << " * " << g.scale << ")";
    if (!label.empty()) os << " for " << label;
    throw DegenerateMetric(os.str(), g.det);
}

MetricTensor metric_tensor(const FinslerField& f, const ChartPoint& x, const Direction& y) {
    const Jet F = f.expand(x, y, {0, 2});
    const Jet E = 0.5 * (F * F);
    const std::size_t n = static_cast<std::size_t>(f.dim);
    linalg::Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = E.dy({static_cast<int>(i), static_cast<int>(j)});
    return metric_from_hessian(std::move(g));
}

std::vector<std::vector<Jet>> invert(const std::vector<std::vector<Jet>>& a) {
    const std::size_t n = a.size();
    auto m = a;
    std::vector<std::vector<Jet>> inv;
    inv.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Jet> row;
        for (std::size_t j = 0; j < n; ++j) row.emplace_back(a[0][0].layout(), i == j ? 1.0 : 0.0);
        inv.push_back(std::move(row));
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col].value()) > std::abs(m[pivot][col].value())) pivot = r;
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        const Jet d = jet::reciprocal(m[col][col]);
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] *= d;
            inv[col][j] *= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Jet factor = m[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= factor * m[col][j];
                inv[r][j] -= factor * inv[col][j];
            }
        }
    }
    return inv;
}

SprayField geodesic_spray_field(const FinslerField& f) {
    SprayField s;
    s.dim = f.dim;
    s.domain_guard = f.domain_guard;
    s.label = "geodesic spray of " + f.label;
    s.expand = [f](const ChartPoint& x, const Direction& y, Caps caps) {
        const int n = f.dim;
        const Jet F = f.expand(x, y, {caps.x + 1, caps.y + 2});
        const Jet F2 = F * F;

        linalg::Matrix g_num(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g_num(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 0.5 * F2.dy({i, j});
        require_nondegenerate(metric_from_hessian(std::move(g_num)), f.label);

        const auto target = jet::seed_point(x.x, y.y, caps);
        std::vector<Jet> dF2_dy;
        for (int h = 0; h < n; ++h) dF2_dy.push_back(F2.differentiate(Group::y, h));

        std::vector<std::vector<Jet>> g;
        for (int i = 0; i < n; ++i) {
            std::vector<Jet> row;
            for (int j = 0; j < n; ++j)
                row.push_back((0.5 * dF2_dy[static_cast<std::size_t>(i)].differentiate(Group::y, j)).truncate(caps));
            g.push_back(std::move(row));
        }
        const auto g_inv = invert(g);

        std::vector<Jet> rhs;
        for (int h = 0; h < n; ++h) {
            Jet a = -F2.differentiate(Group::x, h).truncate(caps);
            for (int r = 0; r < n; ++r)
                a += target.y[static_cast<std::size_t>(r)] *
                     dF2_dy[static_cast<std::size_t>(h)].differentiate(Group::x, r).truncate(caps);
            rhs.push_back(std::move(a));
        }

        std::vector<Jet> G;
        for (int i = 0; i < n; ++i) {
            Jet gi(target.y[0].layout(), 0.0);
            for (int h = 0; h < n; ++h) gi += g_inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(h)] * rhs[static_cast<std::size_t>(h)];
            G.push_back(0.25 * gi);
        }
        return G;
    };
    return s;
}

std::vector<double> supporting_element(const FinslerField& f, const ChartPoint& x, const Direction& y) {
    const Jet F = f.expand(x, y, {0, 1});
    std::vector<double> ell;
    for (int i = 0; i < f.dim; ++i) ell.push_back(F.dy({i}));
    return ell;
}

std::vector<double> geodesic_spray(const FinslerField& f, const ChartPoint& x, const Direction& y) {
    return geodesic_spray_field(f).values(x, y);
}

linalg::Tensor4 berwald_tensor(const SprayField& s, const ChartPoint& x, const Direction& y) {
    const auto G = s.expand(x, y, {0, 3});
    const int n = s.dim;
    linalg::Tensor4 B(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int h = 0; h < n; ++h) B(i, j, k, h) = G[static_cast<std::size_t>(i)].dy({j, k, h});
    return B;
}

namespace {

linalg::Tensor3 contract_landsberg(double F, const std::vector<double>& ell, const linalg::Tensor4& B) {
    const std::size_t n = ell.size();
    linalg::Tensor3 L(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t h = 0; h < n; ++h) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += ell[i] * B(i, j, k, h);
                L(j, k, h) = -0.5 * F * acc;
            }
    return L;
}

}  // namespace

linalg::Tensor3 landsberg_tensor(const FinslerField& f, const SprayField& s, const ChartPoint& x, const Direction& y) {
    const Jet F = f.expand(x, y, {0, 1});
    std::vector<double> ell;
    for (int i = 0; i < f.dim; ++i) ell.push_back(F.dy({i}));
    return contract_landsberg(F.value(), ell, berwald_tensor(s, x, y));
}

std::vector<double> horizontal_differential(const FinslerField& f, const SprayField& s, const ChartPoint& x,
                                            const Direction& y) {
    const Jet F = f.expand(x, y, {1, 1});
    const auto G = s.expand(x, y, {0, 1});
    const int n = f.dim;
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double v = F.d({i}, {});
        for (int j = 0; j < n; ++j) v -= G[static_cast<std::size_t>(j)].dy({i}) * F.dy({j});
        out[static_cast<std::size_t>(i)] = v;
    }
    return out;
}

double euler_residual(const FinslerField& f, const ChartPoint& x, const Direction& y) {
    const Jet F = f.expand(x, y, {0, 1});
    double acc = 0.0;
    for (int i = 0; i < f.dim; ++i) acc += y.y[static_cast<std::size_t>(i)] * F.dy({i});
    return std::abs(acc - F.value());
}

PointTensors point_tensors(const FinslerField& f, const SprayField& s, const ChartPoint& x, const Direction& y) {
    const int n = f.dim;
    const auto un = static_cast<std::size_t>(n);
    const Jet F = f.expand(x, y, {0, 2});
    const Jet E = 0.5 * (F * F);

    PointTensors t;
    t.F = F.value();
    linalg::Matrix g(un, un);
    for (int i = 0; i < n; ++i) {
        t.ell.push_back(F.dy({i}));
        for (int j = 0; j < n; ++j) g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = E.dy({i, j});
    }
    const MetricTensor metric = metric_from_hessian(g);
    require_nondegenerate(metric, f.label);
    t.g = metric.g;
    t.det_g = metric.det;
    t.g_inv = linalg::inverse(t.g);

    const auto G = s.expand(x, y, {0, 3});
    t.Gij = linalg::Matrix(un, un);
    t.Gijk = linalg::Tensor3(un);
    t.Gijkh = linalg::Tensor4(un);
    for (int i = 0; i < n; ++i) {
        const Jet& gi = G[static_cast<std::size_t>(i)];
        t.G.push_back(gi.value());
        for (int j = 0; j < n; ++j) {
            t.Gij(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = gi.dy({j});
            for (int k = 0; k < n; ++k) {
                t.Gijk(i, j, k) = gi.dy({j, k});
                for (int h = 0; h < n; ++h) t.Gijkh(i, j, k, h) = gi.dy({j, k, h});
            }
        }
    }
    t.L = contract_landsberg(t.F, t.ell, t.Gijkh);
    return t;
}

}  // namespace finsler
