#include "talbot_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "talbot/contour.hpp"
#include "talbot/errors.hpp"
#include "talbot/params.hpp"
#include "talbot/problems.hpp"
#include "talbot/quadrature.hpp"
#include "talbot/roundoff.hpp"

namespace talbot::cli {

namespace {

std::string format(const char* fmt, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

// Scientific notation with 17 significant digits, '.' decimal separator.
std::string sci(double v) { return format("%.16e", v); }

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- problems --------------------------------------------------------------

struct ProblemOptions {
    std::string id;
    double lambda = 1.0;
    double c = 0.4;
    double r = 0.5;
    int m = kDefaultHeatGrid;
    std::uint64_t seed = kDefaultHeatSeed;
};

struct Problem {
    Transform transform;
    Eigen::VectorXd reference;
};

Eigen::VectorXd scalar_vector(double v) {
    Eigen::VectorXd out(1);
    out[0] = v;
    return out;
}

Problem make_problem(const ProblemOptions& o, double t) {
    if (o.id == "f1") {
        const double lambda = o.lambda;
        return {Transform::scalar([lambda](cdouble z) { return eval_F1(z, lambda); }),
                scalar_vector(reference_F1(t, lambda))};
    }
    if (o.id == "f2") {
        return {Transform::scalar([](cdouble z) { return eval_F2(z); }), scalar_vector(reference_F2(t))};
    }
    if (o.id == "f3") {
        const double c = o.c, r = o.r;
        return {Transform::scalar([c, r](cdouble z) { return eval_F3(z, c, r); }),
                scalar_vector(reference_F3(t, c, r))};
    }
    const HeatModel model = make_heat_model(o.m, o.seed);
    return {heat_as_transform(model), heat_reference(model, t)};
}

void add_problem_options(CLI::App* app, ProblemOptions& o) {
    app->add_option("problem", o.id, "f1 | f2 | f3 | heat")
        ->required()
        ->check(CLI::IsMember({"f1", "f2", "f3", "heat"}));
    app->add_option("--lambda", o.lambda, "F1 decay constant")->check(CLI::PositiveNumber);
    app->add_option("--c", o.c, "F3 parameter c")->check(CLI::PositiveNumber);
    app->add_option("--r", o.r, "F3 parameter r")->check(CLI::NonNegativeNumber);
    app->add_option("--m", o.m, "heat grid points per dimension")->check(CLI::Range(1, 400));
    app->add_option("--seed", o.seed, "heat initial-condition seed");
}

// --- contour and roundoff policy -------------------------------------------

ContourKind parse_kind(const std::string& s) {
    return s == "rational" ? ContourKind::Rational : ContourKind::Cotangent;
}

ContourParams base_params(ContourKind kind) {
    return kind == ContourKind::Cotangent ? modified_talbot() : modified_rational();
}

struct Policy {
    enum class Mode { Off, Fixed, Auto } mode = Mode::Fixed;
    double k0 = 1.0;
};

Policy parse_policy(const std::string& s) {
    if (s == "off") return {Policy::Mode::Off, 0.0};
    if (s == "auto") return {Policy::Mode::Auto, 0.0};
    if (s.rfind("k0=", 0) == 0) {
        std::size_t used = 0;
        double k0 = 0.0;
        try {
            k0 = std::stod(s.substr(3), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() - 3 || !(k0 > 0.0) || !std::isfinite(k0))
            throw UsageError("--roundoff-control: k0 must be a positive number, got '" + s + "'");
        return {Policy::Mode::Fixed, k0};
    }
    throw UsageError("--roundoff-control must be one of k0=<value>, auto, off; got '" + s + "'");
}

struct ResolvedPolicy {
    ParamSource source;
    std::string description;
};

RoundoffModel fixed_model(const ContourParams& base, double k0) {
    // Switch where roundoff first overtakes truncation: N = 24 for k0 = 1.
    const int n_star = int(std::ceil(critical_n(base, kUnitRoundoff, k0)));
    return RoundoffModel{kUnitRoundoff, k0, n_star, base};
}

RoundoffModel calibrated_model(const Problem& problem, const ContourParams& base, double t,
                               const NRange& range) {
    const auto uncontrolled = convergence_sweep(problem.transform, problem.reference, t, range, fixed_params(base));
    const auto samples = error_samples(uncontrolled);
    try {
        return calibrate_model(samples, base);
    } catch (const NoTurnDetected&) {
        // No regrowth inside the range: switch where convergence meets the floor.
        const RoundoffOnset onset = estimate_onset(samples);
        const int n_star = int(std::ceil(onset.n_cross));
        return RoundoffModel{kUnitRoundoff, estimate_k0(n_star, base, kUnitRoundoff), n_star, base};
    }
}

ResolvedPolicy resolve_policy(const Policy& policy, const ContourParams& base, const Problem& problem,
                              double t, const NRange& calibration_range) {
    switch (policy.mode) {
        case Policy::Mode::Off:
            return {fixed_params(base), "off"};
        case Policy::Mode::Fixed: {
            const RoundoffModel model = fixed_model(base, policy.k0);
            return {roundoff_controlled(model, model.n_star),
                    format("k0=%g from N=%d", model.k0, model.n_star)};
        }
        case Policy::Mode::Auto: {
            const RoundoffModel model = calibrated_model(problem, base, t, calibration_range);
            return {roundoff_controlled(model, model.n_star),
                    format("auto: k0=%.6e from N=%d", model.k0, model.n_star)};
        }
    }
    return {fixed_params(base), "off"};
}

// --- output ----------------------------------------------------------------

// Relative paths land in $TALBOT_OUTPUT_DIR when it is set. With no --output
// the report goes to `fallback`, or to <dir>/<default_name> if the variable is set.
class Sink {
public:
    Sink(const std::string& output, const std::string& default_name, std::ostream& fallback)
        : stream_(&fallback) {
        const char* dir = std::getenv("TALBOT_OUTPUT_DIR");
        std::filesystem::path path;
        if (!output.empty()) {
            path = output;
            if (path.is_relative() && dir && *dir) path = std::filesystem::path(dir) / path;
        } else if (dir && *dir) {
            path = std::filesystem::path(dir) / default_name;
        }
        if (!path.empty()) {
            if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw UsageError("cannot open output file " + path.string());
            stream_ = file_.get();
            path_ = path.string();
        }
    }

    std::ostream& stream() { return *stream_; }
    const std::string& path() const { return path_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
    std::string path_;
};

// --- derive-params ---------------------------------------------------------

struct Check {
    const char* name;
    double value;
    double published;
    double tol;
};

int report_checks(const std::vector<Check>& checks, std::ostream& out) {
    bool ok = true;
    for (const auto& c : checks) {
        const bool pass = std::abs(c.value - c.published) <= c.tol;
        ok = ok && pass;
        out << format("check %-6s %+.6f vs %+.4f (tol %.0e): %s\n", c.name, c.value, c.published, c.tol,
                      pass ? "ok" : "MISMATCH");
    }
    out << (ok ? "published values: match\n" : "published values: MISMATCH\n");
    return ok ? kExitSuccess : kExitNumeric;
}

int cmd_derive_params(const std::string& family, std::ostream& out) {
    if (family == "cotangent") {
        const SaddleSolution s = optimize_alpha();
        const CotangentCoeffs& k = s.params.cotangent_coeffs();
        out << "contour: cotangent\n";
        out << format("alpha = %.4f  (%.10f)\n", s.shape, s.shape);
        out << format("c = %.4f  (%.10f)\n", s.c, s.c);
        out << format("sigma = %.4f  (%.10f)\n", k.sigma, k.sigma);
        out << format("mu = %.4f  (%.10f)\n", k.mu, k.mu);
        out << format("nu = %.4f  (%.10f)\n", k.nu, k.nu);
        out << format("zeta(theta) = %.4f + %.4f theta cot(%.4f theta) + %.4f i theta\n", -k.sigma, k.mu,
                      k.alpha, k.nu);
        out << format("saddle = +/-%.4f %c %.4fi  (%.10f, %.10f)\n", s.x_s, s.y_s < 0 ? '-' : '+',
                      std::abs(s.y_s), s.x_s, s.y_s);
        out << format("predicted error = O(exp(-%.4f N))\n", s.c);
        return report_checks({{"alpha", s.shape, 0.6407, 5e-4},
                              {"c", s.c, 1.3580, 5e-4},
                              {"sigma", k.sigma, 0.6122, 1e-3},
                              {"mu", k.mu, 0.5017, 1e-3},
                              {"nu", k.nu, 0.2645, 1e-3},
                              {"x_s", s.x_s, 3.4208, 1e-3},
                              {"y_s", s.y_s, -2.3438, 1e-3}},
                             out);
    }
    const SaddleSolution s = derive_rational();
    const RationalCoeffs& k = s.params.rational_coeffs();
    out << "contour: rational\n";
    out << format("a = %.4f  (%.10f)\n", k.a, k.a);
    out << format("b = %.4f  (%.10f)\n", k.b, k.b);
    out << format("d = %.4f  (%.10f)\n", k.d, k.d);
    out << format("e = %.4f  (%.10f)\n", k.e, k.e);
    out << format("c = %.3f  (%.10f)\n", s.c, s.c);
    out << format("zeta(theta) = %.4f + %.4f theta^2 / (theta^2 - %.4f pi^2) + %.4f i theta\n", k.a, k.b, k.d,
                  k.e);
    out << format("saddle = +/-%.4f %c %.4fi  (%.10f, %.10f)\n", s.x_s, s.y_s < 0 ? '-' : '+', std::abs(s.y_s),
                  s.x_s, s.y_s);
    out << format("predicted error = O(exp(-%.3f N))\n", s.c);
    return report_checks({{"a", k.a, 0.1446, 5e-3},
                          {"b", k.b, 3.0232, 5e-3},
                          {"d", k.d, 3.0767, 5e-3},
                          {"e", k.e, 0.2339, 5e-3},
                          {"c", s.c, 1.311, 5e-3}},
                         out);
}

// --- invert ----------------------------------------------------------------

struct InvertOptions {
    double t = 1.0;
    int N = 0;
    std::string contour = "cotangent";
    std::string roundoff = "k0=1";
};

int cmd_invert(const ProblemOptions& po, const InvertOptions& o, std::ostream& out) {
    const Policy policy = parse_policy(o.roundoff);
    const Problem problem = make_problem(po, o.t);
    const ContourParams base = base_params(parse_kind(o.contour));
    const ResolvedPolicy resolved = resolve_policy(policy, base, problem, o.t, NRange{6, 60, 1});
    const ContourParams params = resolved.source(o.N);
    const InversionResult res = invert(problem.transform, params, o.N, o.t);

    out << "problem: " << po.id << "\n";
    out << "t: " << sci(o.t) << "\n";
    out << "N: " << o.N << "\n";
    out << "contour: " << o.contour << "\n";
    out << "roundoff_control: " << resolved.description << "\n";
    out << "c_used: " << sci(params.decay_rate().value_or(std::nan(""))) << "\n";
    out << "zeta0_used: " << sci(zeta_at_origin(params)) << "\n";
    if (problem.transform.is_scalar()) {
        out << "value: " << sci(res.scalar()) << "\n";
        out << "reference: " << sci(problem.reference[0]) << "\n";
    } else {
        out << "dimension: " << res.value.size() << "\n";
        out << "value_inf_norm: " << sci(res.value.cwiseAbs().maxCoeff()) << "\n";
        out << "reference_inf_norm: " << sci(problem.reference.cwiseAbs().maxCoeff()) << "\n";
    }
    out << "relative_error: " << sci(relative_error(res.value, problem.reference)) << "\n";
    return kExitSuccess;
}

// --- sweep -----------------------------------------------------------------

struct SweepConfig {
    double t = 1.0;
    int n_start = 6;
    int n_stop = 60;
    int n_step = 1;
    std::string contour = "cotangent";
    std::string roundoff = "k0=1";
    std::string output;
};

int cmd_sweep(const ProblemOptions& po, const SweepConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.n_stop < cfg.n_start) throw UsageError("sweep: --N-stop must not be below --N-start");
    const Policy policy = parse_policy(cfg.roundoff);
    const NRange range{cfg.n_start, cfg.n_stop, cfg.n_step};
    Sink sink(cfg.output, "sweep_" + po.id + ".csv", out);

    const Problem problem = make_problem(po, cfg.t);
    const ContourParams base = base_params(parse_kind(cfg.contour));
    const ResolvedPolicy resolved = resolve_policy(policy, base, problem, cfg.t, range);
    const auto sweep = convergence_sweep(problem.transform, problem.reference, cfg.t, range, resolved.source);

    std::ostream& csv = sink.stream();
    csv << "N,relative_error,c_used,zeta0_used\n";
    for (const auto& p : sweep) {
        csv << p.N << ',' << (p.ok() ? sci(p.relative_error) : std::string("nan")) << ',' << sci(p.c_used) << ','
            << sci(p.zeta0_used) << '\n';
        if (!p.ok()) err << "N=" << p.N << ": failed: " << *p.failure << "\n";
    }
    csv.flush();

    err << "roundoff_control: " << resolved.description << "\n";
    const auto best = std::min_element(sweep.begin(), sweep.end(), [](const SweepPoint& a, const SweepPoint& b) {
        if (!a.ok()) return false;
        if (!b.ok()) return true;
        return a.relative_error < b.relative_error;
    });
    if (best != sweep.end() && best->ok())
        err << format("minimum relative_error %.3e at N=%d\n", best->relative_error, best->N);
    if (policy.mode == Policy::Mode::Off) {
        try {
            const RoundoffOnset onset = estimate_onset(error_samples(sweep));
            err << format("roundoff onset near N=%.1f (slope %.4f, floor %.2e)\n", onset.n_cross, onset.slope,
                          onset.floor);
        } catch (const Error&) {
        }
    }
    if (!sink.path().empty()) err << "wrote " << sink.path() << "\n";
    return kExitSuccess;
}

// --- dump-contour ----------------------------------------------------------

struct DumpOptions {
    std::string contour = "cotangent";
    int N = 24;
    double t = 1.0;
    std::string output;
};

int cmd_dump_contour(const DumpOptions& o, std::ostream& out) {
    Sink sink(o.output, format("contour_%s_N%d.csv", o.contour.c_str(), o.N), out);
    const NodeSet ns = nodes(base_params(parse_kind(o.contour)), o.N, o.t);
    std::ostream& csv = sink.stream();
    csv << "theta,Re_z,Im_z,Re_dz,Im_dz\n";
    double ymax = 0.0;
    for (int j = 0; j < ns.N; ++j) {
        csv << sci(ns.thetas[j]) << ',' << sci(ns.z[j].real()) << ',' << sci(ns.z[j].imag()) << ','
            << sci(ns.dz[j].real()) << ',' << sci(ns.dz[j].imag()) << '\n';
        ymax = std::max(ymax, std::abs(ns.z[j].imag()));
    }
    // Left of Re(z t) = log(eps) the factor exp(z t) is below unit roundoff.
    csv << "\n# cutoff: Re(z t) = log(eps)\n";
    csv << "Re_z,Im_z\n";
    const double x = std::log(kUnitRoundoff) / o.t;
    constexpr int kCutoffPoints = 25;
    for (int i = 0; i < kCutoffPoints; ++i) {
        const double y = -ymax + 2.0 * ymax * i / (kCutoffPoints - 1);
        csv << sci(x) << ',' << sci(y) << '\n';
    }
    return kExitSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Laplace transform inversion on truncated Talbot contours", "talbot"};
    app.require_subcommand(1);

    std::string family;
    auto* derive = app.add_subcommand("derive-params", "derive optimal contour parameters");
    derive->add_option("kind", family, "cotangent | rational")
        ->required()
        ->check(CLI::IsMember({"cotangent", "rational"}));

    ProblemOptions invert_problem;
    InvertOptions invert_opts;
    auto* inv = app.add_subcommand("invert", "invert one transform at one (N, t)");
    add_problem_options(inv, invert_problem);
    inv->add_option("--t", invert_opts.t, "time")->check(CLI::PositiveNumber);
    inv->add_option("--N", invert_opts.N, "node count")->required()->check(CLI::Range(1, 100000));
    inv->add_option("--contour", invert_opts.contour)->check(CLI::IsMember({"cotangent", "rational"}));
    inv->add_option("--roundoff-control", invert_opts.roundoff, "k0=<value> | auto | off");

    ProblemOptions sweep_problem;
    SweepConfig sweep_cfg;
    auto* sw = app.add_subcommand("sweep", "relative error against N, as CSV");
    add_problem_options(sw, sweep_problem);
    sw->add_option("--t", sweep_cfg.t, "time")->check(CLI::PositiveNumber);
    sw->add_option("--N-start", sweep_cfg.n_start)->check(CLI::Range(1, 100000));
    sw->add_option("--N-stop", sweep_cfg.n_stop)->check(CLI::Range(1, 100000));
    sw->add_option("--N-step", sweep_cfg.n_step)->check(CLI::Range(1, 100000));
    sw->add_option("--contour", sweep_cfg.contour)->check(CLI::IsMember({"cotangent", "rational"}));
    sw->add_option("--roundoff-control", sweep_cfg.roundoff, "k0=<value> | auto | off");
    sw->add_option("--output", sweep_cfg.output, "CSV path (relative to $TALBOT_OUTPUT_DIR if set)");

    DumpOptions dump_opts;
    auto* dump = app.add_subcommand("dump-contour", "quadrature nodes as CSV");
    dump->add_option("kind", dump_opts.contour, "cotangent | rational")
        ->check(CLI::IsMember({"cotangent", "rational"}));
    dump->add_option("--N", dump_opts.N)->check(CLI::Range(1, 100000));
    dump->add_option("--t", dump_opts.t)->check(CLI::PositiveNumber);
    dump->add_option("--output", dump_opts.output, "CSV path (relative to $TALBOT_OUTPUT_DIR if set)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*derive) return cmd_derive_params(family, out);
        if (*inv) return cmd_invert(invert_problem, invert_opts, out);
        if (*sw) return cmd_sweep(sweep_problem, sweep_cfg, out, err);
        if (*dump) return cmd_dump_contour(dump_opts, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace talbot::cli
