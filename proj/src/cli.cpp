#include "finsler/cli.hpp"

#include "finsler/errors.hpp"
#include "finsler/expr.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace finsler::cli {

namespace {

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw InvalidParameter("invalid number '" + s + "' in " + what);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        const auto b = cur.find_first_not_of(" \t");
        const auto e = cur.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    return out;
}

std::optional<catalog::QuadraticForm> quadratic_of(const RunConfig& c) {
    std::optional<catalog::QuadraticForm> q;
    if (!c.quadratic.empty()) {
        if (c.quadratic.find(',') == std::string::npos) {
            q = catalog::quadratic_preset(c.quadratic);
        } else {
            std::vector<double> v;
            for (const auto& t : split(c.quadratic, ',')) v.push_back(parse_double(t, "--quadratic"));
            q = catalog::quadratic_from_list(v);
        }
    } else if (c.dim) {
        if (*c.dim < 3) throw InvalidParameter("--dim must be at least 3");
        const auto m = static_cast<std::size_t>(*c.dim - 1);
        linalg::Matrix id(m, m);
        for (std::size_t i = 0; i < m; ++i) id(i, i) = 1.0;
        q = catalog::QuadraticForm{"custom", id};
    }
    if (q && c.dim && static_cast<int>(q->c.rows()) + 1 != *c.dim)
        throw InvalidParameter("--dim " + std::to_string(*c.dim) + " does not match the quadratic form (dimension " +
                               std::to_string(q->c.rows() + 1) + ")");
    return q;
}

void require_positive_f(const expr::NodePtr& f, const std::string& src, double lo, double hi) {
    const int steps = 200;
    for (int i = 0; i <= steps; ++i) {
        const double x = lo + (hi - lo) * i / steps;
        double v = 0.0;
        try {
            v = expr::evaluate(f, x);
        } catch (const Error& e) {
            throw InvalidParameter("f(x1) = " + src + " cannot be evaluated at x1=" + std::to_string(x) + ": " + e.what());
        }
        if (!(v > 0.0))
            throw InvalidParameter("f(x1) = " + src + " is not positive on the sampled range (f(" + std::to_string(x) +
                                   ") = " + std::to_string(v) + ")");
    }
}

}  // namespace

RunResult run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    RunResult result;
    try {
        config.plan.validate();
        const auto& entry = catalog::entry(config.metric);
        const auto f = expr::parse(config.f_expr);
        require_positive_f(f, config.f_expr, config.plan.x_lo, config.plan.x_hi);
        const auto spec = catalog::make_spec(config.metric, config.params, quadratic_of(config), expr::to_function(f),
                                             config.f_expr, config.unchecked);
        auto report = verify::classify(spec, config.plan, config.oracle_ad);
        report.f_label = expr::pretty(f);

        const auto expected = config.expect ? catalog::parse_verdict(*config.expect) : entry.expected;
        const std::string body = config.csv ? report.to_csv() : report.to_json().dump(2) + "\n";
        if (config.out.empty()) {
            out << body;
        } else {
            std::ofstream file(config.out, std::ios::binary);
            if (!file) throw InvalidParameter("cannot write '" + config.out + "'");
            file << body;
            out << spec.describe() << ": " << catalog::to_string(report.verdict) << "\n";
        }
        if (report.verdict == expected) {
            result.exit_code = kOk;
        } else {
            result.exit_code = kMismatch;
            result.message = "verdict mismatch: got '" + catalog::to_string(report.verdict) + "', expected '" +
                             catalog::to_string(expected) + "'";
            err << result.message << "\n";
        }
        result.report = std::move(report);
    } catch (const std::exception& e) {
        result.exit_code = kError;
        result.message = std::string("error: ") + e.what();
        err << result.message << "\n";
    }
    return result;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Landsberg/Berwald classification of catalog Finsler metrics"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::vector<std::string> params;
    std::string x_range;
    std::string profile = "default";
    std::uint64_t seed = cfg.plan.seed;
    int dim = 0;

    auto* classify = app.add_subcommand("classify", "sample a metric and report its Landsberg/Berwald verdict");
    classify->add_option("--metric", cfg.metric, "catalog id")->required();
    classify->add_option("--param", params, "parameter k=v (repeatable)");
    classify->add_option("--f", cfg.f_expr, "f(x1), e.g. \"exp(x1)\" or \"1 + x1^2/4\"");
    classify->add_option("--quadratic", cfg.quadratic, "product | euclid | mixed4 | row-major list");
    classify->add_option("--dim", dim, "manifold dimension");
    classify->add_option("--points", cfg.plan.n_points, "number of samples");
    classify->add_option("--seed", seed, "sampling seed");
    classify->add_option("--x-range", x_range, "lo,hi for every x coordinate");
    classify->add_option("--expect", cfg.expect, "berwald | landsberg | non-landsberg");
    classify->add_option("--out", cfg.out, "report path");
    classify->add_flag("--csv", cfg.csv, "emit the per-sample table as CSV instead of JSON");
    classify->add_flag("--oracle-ad", cfg.oracle_ad, "use the geodesic spray of F instead of the closed form");
    classify->add_option("--tol-profile", profile, "default | strict | loose");
    classify->add_flag("--unchecked", cfg.unchecked, "skip the degeneracy probe");

    auto* list = app.add_subcommand("list", "print the catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? kOk : kError;
    }

    if (list->parsed()) {
        out << catalog::list_catalog();
        return kOk;
    }

    try {
        for (const auto& p : params) {
            const auto eq = p.find('=');
            if (eq == std::string::npos || eq == 0) throw InvalidParameter("--param expects k=v, got '" + p + "'");
            cfg.params[p.substr(0, eq)] = parse_double(p.substr(eq + 1), "--param " + p);
        }
        if (!x_range.empty()) {
            const auto parts = split(x_range, ',');
            if (parts.size() != 2) throw InvalidParameter("--x-range expects lo,hi");
            cfg.plan.x_lo = parse_double(parts[0], "--x-range");
            cfg.plan.x_hi = parse_double(parts[1], "--x-range");
        }
        if (dim != 0) cfg.dim = dim;
        cfg.plan.seed = seed;
        cfg.plan.profile = profile;
        cfg.plan.tol = verify::tolerance_profile(profile);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
    return run(cfg, out, err).exit_code;
}

}  // namespace finsler::cli
