#include "talbot/params.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "numerics.hpp"
#include "talbot/errors.hpp"

namespace talbot {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kNewtonTolerance = 1e-12;
constexpr int kNewtonMaxIterations = 50;
constexpr double kJacobianStep = 1e-7;

constexpr SaddleGuess kCotangentGuess{3.4, -2.3, 1.3};
constexpr SaddleGuess kRationalGuess{3.0, -2.0, 1.3};

constexpr double kAlphaSearchLo = 0.51;
constexpr double kAlphaSearchHi = 0.82;
constexpr double kRationalSearchLo = 2.0;
constexpr double kRationalSearchHi = 5.0;
// Continuation anchors: centres of the search windows.
constexpr double kCotangentAnchor = 0.5 * (kAlphaSearchLo + kAlphaSearchHi);
constexpr double kRationalAnchor = 0.5 * (kRationalSearchLo + kRationalSearchHi);
constexpr double kSearchWidth = 1e-6;
constexpr double kParabolaStep = 1e-3;

using Vec3 = Eigen::Vector3d;

std::string describe(double shape, double c) {
    std::ostringstream os;
    os.precision(17);
    os << "(shape = " << shape << ", c = " << c << ")";
    return os.str();
}

Vec3 residual_vector(ContourKind kind, double shape, const Vec3& v) {
    const auto r = saddle_residual(kind, shape, v[2], v[0], v[1]);
    return Vec3(r[0], r[1], r[2]);
}

// The saddle pair +-x_s + i y_s must be distinct (x_s bounded away from the
// imaginary axis), lie in the lower half-plane, and sit inside the strip
// bounded by the nearest real pole of the contour formula.
constexpr double kMinSaddleSeparation = 1e-3;

bool admissible(ContourKind kind, double shape, const Vec3& v) {
    const double pole = kind == ContourKind::Cotangent ? kPi / shape : kPi * std::sqrt(shape);
    return v[0] > kMinSaddleSeparation && v[0] < pole && v[1] < 0.0 && v[2] > 0.0;
}

struct NewtonResult {
    Vec3 x;
    int iterations;
};

// Damped Newton with a central-difference Jacobian. Steps that leave the
// admissible region or fail to evaluate are halved.
NewtonResult newton_saddle(ContourKind kind, double shape, Vec3 x) {
    if (!admissible(kind, shape, x)) throw OutOfRange("initial saddle guess is not admissible");
    Vec3 r = residual_vector(kind, shape, x);
    for (int it = 0; it < kNewtonMaxIterations; ++it) {
        const double norm = r.cwiseAbs().maxCoeff();
        if (norm <= kNewtonTolerance) return {x, it};

        Eigen::Matrix3d jac;
        for (int j = 0; j < 3; ++j) {
            Vec3 xp = x;
            Vec3 xm = x;
            xp[j] += kJacobianStep;
            xm[j] -= kJacobianStep;
            jac.col(j) = (residual_vector(kind, shape, xp) - residual_vector(kind, shape, xm)) /
                         (2.0 * kJacobianStep);
        }
        const Vec3 step = jac.fullPivLu().solve(-r);
        if (!step.allFinite()) throw NoConvergence("singular saddle Jacobian " + describe(shape, x[2]));

        bool accepted = false;
        for (double lambda = 1.0; lambda > 1e-6; lambda *= 0.5) {
            const Vec3 trial = x + lambda * step;
            if (!admissible(kind, shape, trial)) continue;
            Vec3 rt;
            try {
                rt = residual_vector(kind, shape, trial);
            } catch (const Error&) {
                continue;
            }
            if (rt.allFinite() && rt.cwiseAbs().maxCoeff() < norm) {
                x = trial;
                r = rt;
                accepted = true;
                break;
            }
        }
        if (!accepted) throw NoConvergence("saddle Newton stalled " + describe(shape, x[2]));
    }
    if (r.cwiseAbs().maxCoeff() <= kNewtonTolerance) return {x, kNewtonMaxIterations};
    throw NoConvergence("saddle Newton hit the iteration cap " + describe(shape, x[2]));
}

SaddleSolution make_solution(ContourKind kind, double shape, const NewtonResult& nr) {
    return SaddleSolution{kind,     shape,    nr.x[2],
                          nr.x[0],  nr.x[1],  params_from_constraints(kind, shape, nr.x[2]),
                          nr.iterations};
}

Vec3 to_vec(const SaddleGuess& g) { return Vec3(g.x_s, g.y_s, g.c); }

SaddleGuess to_guess(const SaddleSolution& s) { return {s.x_s, s.y_s, s.c}; }

// Direct Newton, falling back to natural-parameter continuation from
// `anchor` where the default guess is known to converge.
SaddleSolution solve_family(ContourKind kind, double shape, std::optional<SaddleGuess> guess,
                            const SaddleGuess& default_guess, double anchor) {
    try {
        return make_solution(kind, shape, newton_saddle(kind, shape, to_vec(guess.value_or(default_guess))));
    } catch (const Error&) {
    }

    NewtonResult current = newton_saddle(kind, anchor, to_vec(default_guess));
    double at = anchor;
    double step = std::copysign(0.005, shape - anchor);
    while (at != shape) {
        const double next = std::abs(shape - at) <= std::abs(step) ? shape : at + step;
        try {
            current = newton_saddle(kind, next, current.x);
            at = next;
        } catch (const Error&) {
            step *= 0.5;
            if (std::abs(step) < 1e-4) {
                std::ostringstream os;
                os.precision(6);
                os << "saddle continuation stalled at shape = " << at << " on the way to " << shape;
                throw NoConvergence(os.str());
            }
        }
    }
    return make_solution(kind, shape, current);
}

// Golden-section search on c(shape), warm-starting each probe from the most
// recent converged solution, then a three-point parabolic refinement.
template <class Solver>
SaddleSolution maximize_decay(Solver&& solve, double lo, double hi) {
    std::optional<SaddleSolution> last;
    auto probe = [&](double shape) {
        SaddleSolution s = [&] {
            if (last) {
                try {
                    return solve(shape, to_guess(*last));
                } catch (const Error&) {
                }
            }
            return solve(shape, std::nullopt);
        }();
        last = s;
        return s;
    };

    const auto [a, b] = detail::golden_maximize([&](double s) { return probe(s).c; }, lo, hi, kSearchWidth);
    SaddleSolution best = probe(0.5 * (a + b));

    const double h = kParabolaStep;
    if (best.shape - h > lo && best.shape + h < hi) {
        const double cm = probe(best.shape - h).c;
        const double cp = probe(best.shape + h).c;
        const double c0 = best.c;
        const double curvature = cp - 2.0 * c0 + cm;
        if (curvature < 0.0) {
            const double vertex = best.shape - 0.5 * h * (cp - cm) / curvature;
            if (std::abs(vertex - best.shape) < h) {
                SaddleSolution refined = probe(vertex);
                if (refined.c >= best.c) best = refined;
            }
        }
    }
    return best;
}

}  // namespace

ContourParams closed_form_smn(double alpha, double c) {
    const double s2 = std::pow(std::sin(alpha * kPi), 2);
    const double sh2 = std::pow(std::sinh(alpha * c), 2);
    const double lhs = 2.0 * alpha * c * c * s2;
    const double rhs = kPi * std::sin(2.0 * alpha * kPi) * sh2;
    const double den = lhs - rhs;
    if (!(std::abs(den) > 1e-14 * (std::abs(lhs) + std::abs(rhs))) || !std::isfinite(den)) {
        throw SingularConfiguration("closed-form parameter map is singular at " + describe(alpha, c),
                                    alpha, c);
    }
    const double B = c * s2 / den;
    return ContourParams::cotangent(2.0 * alpha * c * c * B, 2.0 * sh2 * B,
                                    (std::sinh(2.0 * alpha * c) - 2.0 * alpha * c) * B, alpha, c);
}

ContourParams rational_from_constraints(double d, double c) {
    // zeta(ic) = 0:        a + b c^2 / (c^2 + d pi^2) - e c = 0
    // zeta'(ic) = 0:       2 b d pi^2 c / (c^2 + d pi^2)^2 - e = 0
    // Re zeta(pi) = -c:    a + b / (1 - d) = -c
    if (!(d > 1.0)) throw DomainError("rational contour needs d > 1");
    const double p = d * kPi * kPi;
    const double q = c * c + p;
    Eigen::Matrix3d m;
    m << 1.0, c * c / q, -c,
         0.0, 2.0 * p * c / (q * q), -1.0,
         1.0, 1.0 / (1.0 - d), 0.0;
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
    if (!lu.isInvertible()) {
        throw SingularConfiguration("rational constraint system is singular at " + describe(d, c), d, c);
    }
    const Vec3 abe = lu.solve(Vec3(0.0, 0.0, -c));
    return ContourParams::rational(abe[0], abe[1], d, abe[2], c);
}

ContourParams params_from_constraints(ContourKind kind, double shape, double c) {
    return kind == ContourKind::Cotangent ? closed_form_smn(shape, c)
                                          : rational_from_constraints(shape, c);
}

ContourParams modified_talbot() { return closed_form_smn(kOptimalAlpha, kOptimalDecayRate); }

ContourParams modified_rational() {
    return rational_from_constraints(kOptimalRationalD, kOptimalRationalDecayRate);
}

std::array<double, 3> saddle_residual(ContourKind kind, double shape, double c, double x_s,
                                      double y_s) {
    const ContourParams p = params_from_constraints(kind, shape, c);
    const cdouble theta(x_s, y_s);
    const cdouble dz = zeta_prime(p, theta);
    const cdouble z = zeta(p, theta);
    return {dz.real(), dz.imag() - 1.0, z.real() + y_s + c};
}

SaddleSolution solve_saddle(double alpha, std::optional<SaddleGuess> guess) {
    if (!(alpha >= kMinSaddleAlpha && alpha <= kMaxSaddleAlpha)) {
        std::ostringstream os;
        os << "alpha = " << alpha << " is outside the saddle window [" << kMinSaddleAlpha << ", "
           << kMaxSaddleAlpha << "]";
        throw OutOfRange(os.str());
    }
    return solve_family(ContourKind::Cotangent, alpha, guess, kCotangentGuess, kCotangentAnchor);
}

SaddleSolution solve_rational_saddle(double d, std::optional<SaddleGuess> guess) {
    if (!(d > 1.0)) throw OutOfRange("rational saddle needs d > 1");
    return solve_family(ContourKind::Rational, d, guess, kRationalGuess, kRationalAnchor);
}

SaddleSolution optimize_alpha() {
    return maximize_decay([](double a, std::optional<SaddleGuess> g) { return solve_saddle(a, g); },
                          kAlphaSearchLo, kAlphaSearchHi);
}

SaddleSolution derive_rational() {
    return maximize_decay(
        [](double d, std::optional<SaddleGuess> g) { return solve_rational_saddle(d, g); },
        kRationalSearchLo, kRationalSearchHi);
}

}  // namespace talbot
