#pragma once

#include <array>
#include <optional>

#include "talbot/contour.hpp"

namespace talbot {

/// Published optimum of the cotangent family, to four decimals.
inline constexpr double kOptimalAlpha = 0.6407;
inline constexpr double kOptimalDecayRate = 1.3580;

/// Optimum of the rational family; d to four decimals, c rounded from 1.31117.
inline constexpr double kOptimalRationalD = 3.0767;
inline constexpr double kOptimalRationalDecayRate = 1.3112;

/// alpha window accepted by solve_saddle.
inline constexpr double kMinSaddleAlpha = 0.45;
inline constexpr double kMaxSaddleAlpha = 0.90;

/// Cotangent coefficients (sigma, mu, nu) that put a double zero of zeta at
/// theta = i c and make Re zeta(pi) = -c.
///
/// Throws SingularConfiguration when the common denominator vanishes.
ContourParams closed_form_smn(double alpha, double c);

/// Rational coefficients (a, b, e) satisfying the same three upper-half-plane
/// conditions for a given pole parameter d. The conditions are linear in
/// (a, b, e), so this is a 3x3 solve.
ContourParams rational_from_constraints(double d, double c);

/// Coefficients for `kind` with shape parameter (alpha or d) and decay rate c.
ContourParams params_from_constraints(ContourKind kind, double shape, double c);

/// The optimal modified Talbot contour, closed_form_smn(0.6407, 1.3580).
ContourParams modified_talbot();

/// The optimal rational contour, rational_from_constraints(3.0767, 1.3112).
ContourParams modified_rational();

/// Residuals of the lower-half-plane saddle conditions at theta_s = x_s + i y_s:
///   r1 = Re zeta'(theta_s), r2 = Im zeta'(theta_s) - 1, r3 = Re zeta(theta_s) + y_s + c
std::array<double, 3> saddle_residual(ContourKind kind, double shape, double c, double x_s,
                                      double y_s);

/// Cotangent-family residuals.
inline std::array<double, 3> saddle_residual(double alpha, double c, double x_s, double y_s) {
    return saddle_residual(ContourKind::Cotangent, alpha, c, x_s, y_s);
}

struct SaddleGuess {
    double x_s;
    double y_s;
    double c;
};

struct SaddleSolution {
    ContourKind kind;
    double shape;  ///< alpha (cotangent) or d (rational)
    double c;      ///< decay rate: the quadrature error is O(exp(-c N))
    double x_s;
    double y_s;
    ContourParams params;
    int iterations;
};

/// Solves the saddle system for (x_s, y_s, c) at fixed alpha, on the x_s > 0 branch.
///
/// Starts Newton from (3.4, -2.3, 1.3) or `guess`; if that fails it continues
/// from the centre of the search window towards the target. Throws OutOfRange outside
/// [kMinSaddleAlpha, kMaxSaddleAlpha] and NoConvergence when continuation stalls.
SaddleSolution solve_saddle(double alpha, std::optional<SaddleGuess> guess = std::nullopt);

/// Rational-family counterpart of solve_saddle at fixed d.
SaddleSolution solve_rational_saddle(double d, std::optional<SaddleGuess> guess = std::nullopt);

/// Maximizes c(alpha) over [0.51, 0.82] by golden-section search.
SaddleSolution optimize_alpha();

/// Maximizes c(d) for the rational family.
SaddleSolution derive_rational();

}  // namespace talbot
