#pragma once

// Named metrics: explicit Finsler functions, closed-form sprays of the special form
// G^1 = ((y1)^2 - phi)/2 f'/f + kg phi f'/f,  G^m = P y^m,  P = (y1 + kp sqrt(phi)) f'/f,
// expected Berwald components, parameter rules and equivalences between classes.
// Here phi = c_{lm} y^l y^m is the quadratic form of the Riemannian setup.

#include "finsler/alphabeta.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace finsler::catalog {

enum class Verdict { berwald, landsberg_non_berwald, non_landsberg };

std::string to_string(Verdict v);
/// Accepts "berwald", "landsberg", "landsberg-non-berwald", "non-landsberg" and the display names.
Verdict parse_verdict(const std::string& s);

struct QuadraticForm {
    std::string name;  // "product", "euclid", "mixed4" or "custom"
    linalg::Matrix c;
};

/// product: y2 y3;  euclid: (y2)^2 + (y3)^2;  mixed4: y2 y3 + (y4)^2.
QuadraticForm quadratic_preset(const std::string& name);
/// Row-major symmetric matrix from a comma list of m*m entries.
QuadraticForm quadratic_from_list(const std::vector<double>& entries);

struct ParamInfo {
    std::string name;
    std::optional<double> default_value;
};

struct EntryInfo {
    std::string id;
    std::vector<ParamInfo> params;
    std::string constraints;
    std::string origin;
    Verdict expected;
    /// Fixed quadratic preset, or empty when any form is accepted.
    std::string fixed_quadratic;
    bool closed_form;
};

const std::vector<EntryInfo>& entries();
const EntryInfo& entry(const std::string& id);

struct MetricSpec {
    std::string id;
    std::map<std::string, double> params;
    alphabeta::RiemannSetup setup;
    std::string quadratic;
    /// Skip the degeneracy probe (the field is built even when its metric is singular).
    bool unchecked = false;

    double param(const std::string& name) const;
    std::string describe() const;
};

/// Validates id, parameter names and constraints; fills defaults. `f` defaults to exp(x1).
MetricSpec make_spec(const std::string& id, std::map<std::string, double> params,
                     std::optional<QuadraticForm> quadratic = std::nullopt, alphabeta::UnivariateFn f = {},
                     std::string f_label = "exp(x1)", bool unchecked = false);

/// The Finsler function of the entry. Parameter values at which the metric is known to collapse
/// (class2 a = +-1, class3 a = 0, class4 q = -1) are probed at a reference point and raise
/// DegenerateMetric unless the spec is unchecked.
FinslerField build_finsler(const MetricSpec& spec);

struct ClosedFormSpray {
    FinslerField G1;
    FinslerField P;
    SprayField spray;
    double kg = 0.0;
    double kp = 0.0;
};

/// Throws Unavailable for entries without a closed-form spray.
ClosedFormSpray closed_form_spray(const MetricSpec& spec);
ClosedFormSpray special_form_spray(const alphabeta::RiemannSetup& setup, double kg, double kp, std::string label);

/// Spray for classification: the closed form when there is one, otherwise the geodesic spray of F.
SprayField reference_spray(const MetricSpec& spec);

/// The (alpha, beta) profile phi(s) of the entry, when it is an (alpha, beta)-metric of the setup.
std::optional<alphabeta::PhiFunction> phi_function(const MetricSpec& spec);

/// Printed G^2_{222} (0-based component (1,1,1,1)) for the preset quadratic forms.
double expected_berwald_component(const MetricSpec& spec, const ChartPoint& x, const Direction& y);

/// |f'/f| at x1, the scale of every Berwald component of the catalog metrics.
double berwald_scale(const MetricSpec& spec, const ChartPoint& x);

enum class Relation { identical, constant_ratio };

struct EquivalencePair {
    MetricSpec a;
    MetricSpec b;
    Relation relation;
    std::string description;
};

/// class1(a) ~ class4(2a, a^2-1), class2(a) ~ class4(2a, a^2-2), class3(a) ~ class4(3a/2, (a^2-2)/2)
/// for a in {-2, 0.5, 2} (the class4 images must be non-degenerate), over the given quadratic form.
std::vector<EquivalencePair> class_equivalence_pairs(const QuadraticForm& q = quadratic_preset("product"));

/// Text table: id | parameters | origin | expected verdict.
std::string list_catalog();

}  // namespace finsler::catalog
