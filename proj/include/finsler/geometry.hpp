#pragma once

// Finsler tensor pipeline on top of the jet core: energy and metric tensor,
// geodesic spray, nonlinear connection, Berwald and Landsberg tensors, and the
// horizontal differential of the metrizability system.
//
// Index conventions: all indices are 0-based, so the usual y^1 is y[0]
// and the singular axis of the catalog metrics is (+-1, 0, ..., 0).

#include "finsler/jet.hpp"
#include "finsler/linalg.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace finsler {

using Jet = jet::TaylorValue;
using JetArgs = std::span<const Jet>;

/// Base coordinates x of a chart point.
struct ChartPoint {
    std::vector<double> x;

    ChartPoint() = default;
    explicit ChartPoint(std::vector<double> coords);
    std::size_t dim() const { return x.size(); }
};

/// Fiber coordinates y of a tangent vector; never the zero vector.
struct Direction {
    std::vector<double> y;

    Direction() = default;
    explicit Direction(std::vector<double> coords);
    std::size_t dim() const { return y.size(); }
    Direction scaled(double lambda) const;
};

using DomainGuard = std::function<bool(std::span<const double> x, std::span<const double> y)>;

/// A scalar function of (x, y) evaluable on jets. Used for F and for auxiliary
/// scalars such as P.
struct FinslerField {
    int dim = 0;
    std::function<Jet(JetArgs x, JetArgs y)> eval;
    DomainGuard domain_guard;  // empty: every point admissible
    std::string label;

    bool admissible(const ChartPoint& x, const Direction& y) const;
    /// Expansion at (x, y) with every coordinate seeded up to `caps`; throws DomainError
    /// when the guard rejects the point.
    Jet expand(const ChartPoint& x, const Direction& y, jet::Caps caps) const;
    double value(const ChartPoint& x, const Direction& y) const;
};

/// Spray coefficients G^i as jets at a point, for the requested caps.
struct SprayField {
    int dim = 0;
    std::function<std::vector<Jet>(const ChartPoint& x, const Direction& y, jet::Caps caps)> expand;
    DomainGuard domain_guard;
    std::string label;

    std::vector<double> values(const ChartPoint& x, const Direction& y) const;
};

/// Spray from jet-level component formulas (closed forms).
SprayField make_spray(int dim, std::function<std::vector<Jet>(JetArgs x, JetArgs y)> components,
                      DomainGuard guard, std::string label);
/// The zero spray G^i = 0.
SprayField flat_spray(int dim);
/// Geodesic spray of F from G^i = 1/4 g^{ih} (y^r d_r dot-d_h F^2 - d_h F^2), as jets.
/// Evaluating at caps c expands F^2 to caps (c.x + 1, c.y + 2).
SprayField geodesic_spray_field(const FinslerField& f);

/// Relative |det g| threshold (against ||g||_F^n) below which the metric is degenerate.
inline constexpr double kDegenerateDetRatio = 1e-10;

struct MetricTensor {
    linalg::Matrix g;
    double det = 0.0;
    double scale = 0.0;  // ||g||_F^n
    bool degenerate = false;
};

MetricTensor metric_tensor(const FinslerField& f, const ChartPoint& x, const Direction& y);
/// Throws DegenerateMetric when the metric is degenerate at (x, y).
void require_nondegenerate(const MetricTensor& g, const std::string& label);

/// Normalized supporting element l_i = dot-d_i F.
std::vector<double> supporting_element(const FinslerField& f, const ChartPoint& x, const Direction& y);

std::vector<double> geodesic_spray(const FinslerField& f, const ChartPoint& x, const Direction& y);
/// G^i_{jkh}: third y-derivatives of the spray coefficients.
linalg::Tensor4 berwald_tensor(const SprayField& s, const ChartPoint& x, const Direction& y);
/// L_{jkh} = -1/2 F l_i G^i_{jkh}.
linalg::Tensor3 landsberg_tensor(const FinslerField& f, const SprayField& s, const ChartPoint& x, const Direction& y);
/// delta F / delta x^i = d_i F - G^j_i dot-d_j F.
std::vector<double> horizontal_differential(const FinslerField& f, const SprayField& s, const ChartPoint& x,
                                            const Direction& y);
/// |y^i dot-d_i F - F|.
double euler_residual(const FinslerField& f, const ChartPoint& x, const Direction& y);

struct PointTensors {
    double F = 0.0;
    linalg::Matrix g;
    linalg::Matrix g_inv;
    double det_g = 0.0;
    std::vector<double> ell;
    std::vector<double> G;
    linalg::Matrix Gij;       // G^i_j
    linalg::Tensor3 Gijk;     // G^i_{jk}
    linalg::Tensor4 Gijkh;    // Berwald tensor
    linalg::Tensor3 L;        // Landsberg tensor
};

/// All point quantities for F and spray S; throws DegenerateMetric on a degenerate g.
PointTensors point_tensors(const FinslerField& f, const SprayField& s, const ChartPoint& x, const Direction& y);

/// Inverse of a symmetric matrix of jets (Gauss-Jordan, pivoting on constant terms).
std::vector<std::vector<Jet>> invert(const std::vector<std::vector<Jet>>& m);

}  // namespace finsler
