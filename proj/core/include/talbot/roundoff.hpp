#pragma once

#include <limits>
#include <span>
#include <vector>

#include "talbot/contour.hpp"
#include "talbot/quadrature.hpp"

namespace talbot {

/// Unit roundoff of binary64, about 2.2e-16.
inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon();

/// Node count from which roundoff-controlled parameters are used by default.
inline constexpr int kDefaultSwitchN = 24;

struct ErrorSample {
    int N;
    double error;
};

std::vector<ErrorSample> error_samples(std::span<const SweepPoint> sweep);

/// Roundoff model R = O(eps exp(N zeta(0))) set against truncation error
/// k1 exp(-c N), with k0 = k1 / k2.
///
/// `base` supplies the family, the frozen shape parameter (alpha or d) and the
/// unmodified parameters used below N*.
struct RoundoffModel {
    double epsilon = kUnitRoundoff;
    double k0 = 1.0;
    int n_star = kDefaultSwitchN;
    ContourParams base;
};

/// The setup used for reported results: k0 = 1, N* = 24, modified Talbot contour.
RoundoffModel default_roundoff_model();

/// Left side of c + zeta(0) + log(eps / k0) / N = 0.
double roundoff_balance(double c, double zeta0, double N, double epsilon, double k0);

/// Real N solving the balance for `params` (which must carry their decay rate).
double critical_n(const ContourParams& params, double epsilon, double k0);

/// critical_n for the optimal cotangent contour at eps = 10^-digits.
double critical_n_for_precision(double digits, double k0);

/// N at the minimum of the 3-point median-smoothed error curve.
///
/// Requires at least 6 samples sorted by N. The minimum must be followed by
/// two consecutive increases of the smoothed curve; otherwise NoTurnDetected.
/// Failed (NaN) samples are dropped.
int detect_n_star(std::span<const ErrorSample> errors);

/// Least-squares slope of log(error) against N over samples with lo <= N <= hi.
/// Zero and failed samples are skipped; fewer than two usable samples is a DomainError.
double log_error_slope(std::span<const ErrorSample> errors, int lo, int hi);

/// Where the geometric convergence of a sweep runs into its roundoff floor.
struct RoundoffOnset {
    double floor;         // median error over the tail of the sweep
    int last_converging;  // last N whose error is above 100 * floor
    double slope;         // log-error slope over the window ending at last_converging
    double n_cross;       // N where that line meets the floor
};

/// Fits the last `window` samples above 100 * floor, then intersects the fit
/// with the floor. The floor is the median of the final `tail` samples,
/// bounded below by eps / 100 so exact hits do not drag it to zero.
RoundoffOnset estimate_onset(std::span<const ErrorSample> errors, int window = 12, int tail = 15);

/// k0 = eps exp(N* (c + zeta(0))).
double estimate_k0(int n_star, const ContourParams& params, double epsilon);

/// Parameters at node count N with the shape frozen and c solved from the
/// roundoff balance. Throws OutOfRange if no c in (0, c_base] balances,
/// which happens when N is below critical_n(base).
ContourParams stabilized_params(int N, const RoundoffModel& model);

/// Unmodified parameters below `switch_n`, stabilized parameters from `switch_n` on.
ParamSource roundoff_controlled(const RoundoffModel& model, int switch_n);

/// Calibrates N* and k0 from an uncontrolled sweep of a transform.
RoundoffModel calibrate_model(std::span<const ErrorSample> uncontrolled,
                              const ContourParams& base, double epsilon = kUnitRoundoff);

}  // namespace talbot
