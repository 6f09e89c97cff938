#pragma once

// Sampling plans, residual aggregation and verdicts.

#include "finsler/catalog.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace finsler::verify {

struct Tolerances {
    double landsberg = 1e-9;
    double berwald_floor = 1e-6;
    double metrizability = 1e-9;
    double homogeneity = 1e-10;
    double spray_match = 1e-8;
};

/// "default", "strict" (tolerances / 10) or "loose" (tolerances * 100, floor unchanged).
Tolerances tolerance_profile(const std::string& name);

struct SamplePlan {
    int n_points = 50;
    std::uint64_t seed = 1;
    double x_lo = -0.5;
    double x_hi = 0.5;
    /// Minimal angle between a sampled direction and the singular axis (+-1, 0, ..., 0).
    double exclusion_angle = 0.15;
    int max_attempts = 400;
    std::string profile = "default";
    Tolerances tol;
    bool keep_samples = true;

    void validate() const;
};

struct Sample {
    int index = 0;
    ChartPoint x;
    Direction y;
};

/// Deterministic: sample i depends only on (seed, i). Throws SamplerStarvation when some sample
/// needs more than plan.max_attempts draws.
std::vector<Sample> draw_samples(int dim, const DomainGuard& guard, const SamplePlan& plan);

struct ResidualMax {
    double value = 0.0;
    int sample = -1;

    void update(double v, int index);
};

struct SampleRow {
    int index = 0;
    std::vector<double> x, y;
    double F = 0.0;
    double landsberg = 0.0;
    double berwald = 0.0;
    double metrizability = 0.0;
    double euler = 0.0;
    double homogeneity = 0.0;
    double spray_match = 0.0;
};

struct ClassificationReport {
    std::string metric;
    std::map<std::string, double> params;
    std::string quadratic;
    std::string f_label;
    std::string spray_source;
    SamplePlan plan;

    ResidualMax landsberg, berwald, metrizability, euler, homogeneity, riemann;
    std::optional<ResidualMax> spray_match;
    /// Largest relative value of each Berwald component G^i_{jkh} over the samples, flat (i, j, k, h).
    std::vector<double> berwald_components;

    catalog::Verdict verdict = catalog::Verdict::berwald;
    bool riemannian = false;
    bool metrizable = false;
    std::vector<SampleRow> samples;
    double wall_time_s = 0.0;  // not serialized

    nlohmann::ordered_json to_json() const;
    std::string to_csv() const;
};

using ScaleFn = std::function<double(const ChartPoint&)>;

/// Samples the plan, evaluates every residual and derives the verdict:
///   landsberg <= tol: Berwald when every Berwald residual <= floor, else "Landsberg, non-Berwald";
///   otherwise non-Landsberg.
/// Without S, the geodesic spray of F is used. `scale` normalizes the Berwald tensor (default 1).
ClassificationReport classify(const FinslerField& F, const std::optional<SprayField>& S, const SamplePlan& plan,
                              const ScaleFn& scale = {});

/// Catalog entry with its reference spray (or the geodesic spray when oracle_ad), labelled for reports.
ClassificationReport classify(const catalog::MetricSpec& spec, const SamplePlan& plan, bool oracle_ad = false);

struct MetrizabilitySummary {
    ResidualMax horizontal;
    ResidualMax euler;
};

/// Maxima of the relative horizontal differential of F along S and of the Euler residual.
MetrizabilitySummary check_metrizability(const FinslerField& F, const SprayField& S, const SamplePlan& plan);

struct LandsbergViaP {
    ResidualMax via_p;
    ResidualMax general;
    ResidualMax difference;
};

/// Landsberg tensor on the Greek indices from P alone,
///   L = -1/2 F (P_{lng} l_m y^m + P_{ln} l_g + P_{ng} l_l + P_{gl} l_n),
/// against the general definition with the spray (G1, P y^m). Throws InvalidParameter when G1 is not
/// quadratic in y at a sample.
LandsbergViaP landsberg_via_P(const catalog::ClosedFormSpray& cf, const FinslerField& F, const SamplePlan& plan);

/// The special-form spray with P replaced by P + eps (y2)^2 / |y|.
catalog::ClosedFormSpray perturbed_P(const catalog::ClosedFormSpray& cf, double eps);

/// Max over samples and components of |GA - GB| / max(1, max|GB|).
/// `extra` further restricts the sampled points, e.g. to where a third field is defined.
ResidualMax compare_sprays(const SprayField& a, const SprayField& b, const SamplePlan& plan, const DomainGuard& extra = {});

/// Admits (x, y) when the metric of F is non-degenerate there.
DomainGuard nondegenerate_guard(const FinslerField& F);

}  // namespace finsler::verify
