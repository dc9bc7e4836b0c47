#include "talbot/contour.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "talbot/errors.hpp"

namespace talbot {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this |alpha * theta| the cotangent terms use their Taylor series.
constexpr double kSeriesThreshold = 0.1;

// Coefficients of u cot(u) = sum_n kCotSeries[n] u^(2n), through u^10.
constexpr double kCotSeries[] = {
    1.0,
    -1.0 / 3.0,
    -1.0 / 45.0,
    -2.0 / 945.0,
    -1.0 / 4725.0,
    -2.0 / 93555.0,
};

// theta * cot(alpha * theta)
cdouble theta_cot(double alpha, cdouble theta) {
    const cdouble u = alpha * theta;
    if (std::abs(u) < kSeriesThreshold) {
        const cdouble u2 = u * u;
        cdouble sum = 0.0;
        for (int n = std::size(kCotSeries) - 1; n >= 0; --n) {
            sum = sum * u2 + kCotSeries[n];
        }
        return sum / alpha;
    }
    return theta * std::cos(u) / std::sin(u);
}

// d/dtheta [theta * cot(alpha * theta)]
cdouble theta_cot_prime(double alpha, cdouble theta) {
    const cdouble u = alpha * theta;
    if (std::abs(u) < kSeriesThreshold) {
        // d/dtheta sum c_n alpha^(2n-1) theta^(2n) = sum 2n c_n u^(2n-1)
        const cdouble u2 = u * u;
        cdouble sum = 0.0;
        for (int n = std::size(kCotSeries) - 1; n >= 1; --n) {
            sum = sum * u2 + 2.0 * n * kCotSeries[n];
        }
        return sum * u;
    }
    const cdouble s = std::sin(u);
    return std::cos(u) / s - u / (s * s);
}

[[noreturn]] void throw_pole(const char* family, cdouble theta) {
    std::ostringstream os;
    os.precision(17);
    os << family << " contour has a pole at theta = " << theta;
    throw DomainError(os.str());
}

void check_cotangent_pole(const CotangentCoeffs& k, cdouble theta) {
    const cdouble u = k.alpha * theta;
    const double m = std::round(u.real() / kPi);
    if (m == 0.0) return;
    if (std::abs(u - m * kPi) <= 1e-14 * std::abs(m * kPi)) throw_pole("cotangent", theta);
}

void check_rational_pole(const RationalCoeffs& k, cdouble theta) {
    const double pole = k.d * kPi * kPi;
    if (std::abs(theta * theta - pole) <= 1e-14 * pole) throw_pole("rational", theta);
}

struct ZetaVisitor {
    cdouble theta;

    cdouble operator()(const CotangentCoeffs& k) const {
        check_cotangent_pole(k, theta);
        return -k.sigma + k.mu * theta_cot(k.alpha, theta) + cdouble(0.0, k.nu) * theta;
    }
    cdouble operator()(const RationalCoeffs& k) const {
        check_rational_pole(k, theta);
        const cdouble th2 = theta * theta;
        return k.a + k.b * th2 / (th2 - k.d * kPi * kPi) + cdouble(0.0, k.e) * theta;
    }
};

struct ZetaPrimeVisitor {
    cdouble theta;

    cdouble operator()(const CotangentCoeffs& k) const {
        check_cotangent_pole(k, theta);
        return k.mu * theta_cot_prime(k.alpha, theta) + cdouble(0.0, k.nu);
    }
    cdouble operator()(const RationalCoeffs& k) const {
        check_rational_pole(k, theta);
        const double p = k.d * kPi * kPi;
        const cdouble den = theta * theta - p;
        return -2.0 * k.b * p * theta / (den * den) + cdouble(0.0, k.e);
    }
};

}  // namespace

ContourParams ContourParams::cotangent(double sigma, double mu, double nu, double alpha,
                                       std::optional<double> decay_rate) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("cotangent contour needs 0 < alpha <= 1");
    if (!(mu > 0.0 && nu > 0.0)) throw DomainError("cotangent contour needs mu > 0 and nu > 0");
    return ContourParams(CotangentCoeffs{sigma, mu, nu, alpha}, decay_rate);
}

ContourParams ContourParams::rational(double a, double b, double d, double e,
                                      std::optional<double> decay_rate) {
    if (!(d > 1.0)) throw DomainError("rational contour needs d > 1");
    return ContourParams(RationalCoeffs{a, b, d, e}, decay_rate);
}

ContourKind ContourParams::kind() const noexcept {
    return std::holds_alternative<CotangentCoeffs>(coeffs_) ? ContourKind::Cotangent
                                                             : ContourKind::Rational;
}

const CotangentCoeffs& ContourParams::cotangent_coeffs() const {
    if (const auto* k = std::get_if<CotangentCoeffs>(&coeffs_)) return *k;
    throw DomainError("contour is not of cotangent kind");
}

const RationalCoeffs& ContourParams::rational_coeffs() const {
    if (const auto* k = std::get_if<RationalCoeffs>(&coeffs_)) return *k;
    throw DomainError("contour is not of rational kind");
}

double ContourParams::shape() const noexcept {
    if (const auto* k = std::get_if<CotangentCoeffs>(&coeffs_)) return k->alpha;
    return std::get<RationalCoeffs>(coeffs_).d;
}

cdouble zeta(const ContourParams& params, cdouble theta) {
    return std::visit(ZetaVisitor{theta}, params.coeffs());
}

cdouble zeta_prime(const ContourParams& params, cdouble theta) {
    return std::visit(ZetaPrimeVisitor{theta}, params.coeffs());
}

double zeta_at_origin(const ContourParams& params) {
    if (params.kind() == ContourKind::Cotangent) {
        const auto& k = params.cotangent_coeffs();
        return -k.sigma + k.mu / k.alpha;
    }
    return params.rational_coeffs().a;
}

NodeSet nodes(const ContourParams& params, int N, double t) {
    if (N < 1) throw DomainError("node count must be positive");
    if (!(t > 0.0)) throw DomainError("t must be positive");

    NodeSet set;
    set.N = N;
    set.t = t;
    set.thetas.resize(N);
    set.z.resize(N);
    set.dz.resize(N);

    const double h = 2.0 * kPi / N;
    const double scale = N / t;
    // Upper half (theta > 0) plus the centre node for odd N; the rest by mirroring.
    for (int j = N / 2; j < N; ++j) {
        const int mirror = N - 1 - j;
        const double theta = (j == mirror) ? 0.0 : -kPi + (j + 0.5) * h;
        const cdouble z = scale * zeta(params, theta);
        const cdouble dz = scale * zeta_prime(params, theta);
        set.thetas[j] = theta;
        set.z[j] = z;
        set.dz[j] = dz;
        if (mirror != j) {
            set.thetas[mirror] = -theta;
            set.z[mirror] = std::conj(z);
            set.dz[mirror] = -std::conj(dz);
        }
    }
    return set;
}

}  // namespace talbot
