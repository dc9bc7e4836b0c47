#include "talbot/roundoff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "numerics.hpp"
#include "talbot/errors.hpp"
#include "talbot/params.hpp"

namespace talbot {

namespace {

double decay_rate_of(const ContourParams& params) {
    if (!params.decay_rate()) throw DomainError("contour parameters do not carry a decay rate");
    return *params.decay_rate();
}

}  // namespace

std::vector<ErrorSample> error_samples(std::span<const SweepPoint> sweep) {
    std::vector<ErrorSample> out;
    out.reserve(sweep.size());
    for (const auto& p : sweep) out.push_back({p.N, p.relative_error});
    return out;
}

RoundoffModel default_roundoff_model() {
    return RoundoffModel{kUnitRoundoff, 1.0, kDefaultSwitchN, modified_talbot()};
}

double roundoff_balance(double c, double zeta0, double N, double epsilon, double k0) {
    return c + zeta0 + std::log(epsilon / k0) / N;
}

double critical_n(const ContourParams& params, double epsilon, double k0) {
    if (!(epsilon > 0.0 && k0 > 0.0)) throw DomainError("epsilon and k0 must be positive");
    const double rate = decay_rate_of(params) + zeta_at_origin(params);
    return std::log(k0 / epsilon) / rate;
}

double critical_n_for_precision(double digits, double k0) {
    if (!(digits >= 4.0)) throw DomainError("critical_n_for_precision needs at least 4 digits");
    return critical_n(modified_talbot(), std::pow(10.0, -digits), k0);
}

int detect_n_star(std::span<const ErrorSample> errors) {
    std::vector<ErrorSample> clean;
    for (const auto& e : errors) {
        if (std::isfinite(e.error)) clean.push_back(e);
    }
    if (clean.size() < 6) throw DomainError("detect_n_star needs at least 6 finite samples");
    for (std::size_t i = 1; i < clean.size(); ++i) {
        if (clean[i].N <= clean[i - 1].N) throw DomainError("detect_n_star needs samples sorted by N");
    }

    const std::size_t n = clean.size();
    std::vector<double> smooth(n);
    smooth[0] = clean[0].error;
    smooth[n - 1] = clean[n - 1].error;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double w[3] = {clean[i - 1].error, clean[i].error, clean[i + 1].error};
        std::sort(std::begin(w), std::end(w));
        smooth[i] = w[1];
    }

    const std::size_t imin = std::min_element(smooth.begin(), smooth.end()) - smooth.begin();
    for (std::size_t j = imin + 1; j + 1 < n; ++j) {
        if (smooth[j] > smooth[j - 1] && smooth[j + 1] > smooth[j]) return clean[imin].N;
    }
    throw NoTurnDetected("error curve does not turn upward after its minimum; extend the sweep");
}

double log_error_slope(std::span<const ErrorSample> errors, int lo, int hi) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& e : errors) {
        if (e.N < lo || e.N > hi || !(e.error > 0.0) || !std::isfinite(e.error)) continue;
        const double y = std::log(e.error);
        n += 1;
        sx += e.N;
        sy += y;
        sxx += double(e.N) * e.N;
        sxy += e.N * y;
    }
    const double den = n * sxx - sx * sx;
    if (n < 2 || den == 0.0) throw DomainError("log_error_slope needs two usable samples with distinct N");
    return (n * sxy - sx * sy) / den;
}

RoundoffOnset estimate_onset(std::span<const ErrorSample> errors, int window, int tail) {
    std::vector<ErrorSample> clean;
    for (const auto& e : errors) {
        if (std::isfinite(e.error)) clean.push_back(e);
    }
    if (window < 2 || tail < 1 || clean.size() < std::size_t(window + tail))
        throw DomainError("estimate_onset needs at least window + tail finite samples");

    std::vector<double> last(tail);
    std::transform(clean.end() - tail, clean.end(), last.begin(), [](const ErrorSample& e) { return e.error; });
    std::nth_element(last.begin(), last.begin() + tail / 2, last.end());
    const double floor = std::max(last[tail / 2], 0.01 * kUnitRoundoff);

    auto above = std::find_if(clean.rbegin(), clean.rend(), [&](const ErrorSample& e) { return e.error > 100.0 * floor; });
    if (above == clean.rend()) throw NoTurnDetected("no sample lies above the roundoff floor");
    const std::size_t end = clean.rend() - above;  // one past last_converging
    if (end < std::size_t(window)) throw NoTurnDetected("too few converging samples before the floor");

    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = end - window; i < end; ++i) {
        if (!(clean[i].error > 0.0)) continue;
        const double y = std::log(clean[i].error);
        n += 1;
        sx += clean[i].N;
        sy += y;
        sxx += double(clean[i].N) * clean[i].N;
        sxy += clean[i].N * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    if (!(slope < 0.0)) throw NoTurnDetected("error is not decreasing before the floor");
    return RoundoffOnset{floor, clean[end - 1].N, slope, (std::log(floor) - intercept) / slope};
}

double estimate_k0(int n_star, const ContourParams& params, double epsilon) {
    const double rate = decay_rate_of(params) + zeta_at_origin(params);
    return epsilon * std::exp(n_star * rate);
}

ContourParams stabilized_params(int N, const RoundoffModel& model) {
    if (N < 1) throw DomainError("node count must be positive");
    const ContourKind kind = model.base.kind();
    const double shape = model.base.shape();
    const double c_base = decay_rate_of(model.base);

    auto balance = [&](double c) {
        const ContourParams p = params_from_constraints(kind, shape, c);
        return roundoff_balance(c, zeta_at_origin(p), N, model.epsilon, model.k0);
    };

    const double lo = 1e-6 * c_base;
    // At N = N* the root sits on the bracket end; rounding may put it just outside.
    if (std::abs(balance(c_base)) <= 64.0 * kUnitRoundoff * c_base) return params_from_constraints(kind, shape, c_base);
    try {
        const double c = detail::bracketed_root(balance, lo, c_base, 4.0 * kUnitRoundoff * c_base);
        return params_from_constraints(kind, shape, c);
    } catch (const OutOfRange&) {
        std::ostringstream os;
        os.precision(10);
        os << "stabilized_params: no decay rate in [" << lo << ", " << c_base
           << "] balances roundoff at N = " << N << " (k0 = " << model.k0 << ")";
        throw OutOfRange(os.str());
    }
}

ParamSource roundoff_controlled(const RoundoffModel& model, int switch_n) {
    return [model, switch_n](int N) {
        return N < switch_n ? model.base : stabilized_params(N, model);
    };
}

RoundoffModel calibrate_model(std::span<const ErrorSample> uncontrolled, const ContourParams& base,
                              double epsilon) {
    const int n_star = detect_n_star(uncontrolled);
    return RoundoffModel{epsilon, estimate_k0(n_star, base, epsilon), n_star, base};
}

}  // namespace talbot
