#pragma once

#include <complex>
#include <optional>
#include <variant>
#include <vector>

namespace talbot {

using cdouble = std::complex<double>;

enum class ContourKind { Cotangent, Rational };

/// zeta(theta) = -sigma + mu * theta * cot(alpha * theta) + i * nu * theta
struct CotangentCoeffs {
    double sigma;
    double mu;
    double nu;
    double alpha;
};

/// zeta(theta) = a + b * theta^2 / (theta^2 - d * pi^2) + i * e * theta
struct RationalCoeffs {
    double a;
    double b;
    double d;
    double e;
};

/// Coefficients of a contour in the normalized theta-plane.
///
/// The N/t scaling is not part of the parameters; it is applied when nodes
/// are generated. The decay rate c the coefficients were derived from is
/// carried along when known, since the roundoff model needs it.
class ContourParams {
public:
    static ContourParams cotangent(double sigma, double mu, double nu, double alpha,
                                   std::optional<double> decay_rate = std::nullopt);
    static ContourParams rational(double a, double b, double d, double e,
                                  std::optional<double> decay_rate = std::nullopt);

    ContourKind kind() const noexcept;
    const CotangentCoeffs& cotangent_coeffs() const;
    const RationalCoeffs& rational_coeffs() const;

    /// alpha for the cotangent family, d for the rational family.
    double shape() const noexcept;

    std::optional<double> decay_rate() const noexcept { return decay_rate_; }

    const std::variant<CotangentCoeffs, RationalCoeffs>& coeffs() const noexcept {
        return coeffs_;
    }

private:
    ContourParams(std::variant<CotangentCoeffs, RationalCoeffs> coeffs,
                  std::optional<double> decay_rate)
        : coeffs_(coeffs), decay_rate_(decay_rate) {}

    std::variant<CotangentCoeffs, RationalCoeffs> coeffs_;
    std::optional<double> decay_rate_;
};

/// Contour point zeta(theta). theta = 0 returns the removable-singularity limit.
/// Throws DomainError on a pole of the contour formula.
cdouble zeta(const ContourParams& params, cdouble theta);

/// Analytic derivative zeta'(theta).
cdouble zeta_prime(const ContourParams& params, cdouble theta);

/// zeta(0), the apex of the contour on the real axis.
double zeta_at_origin(const ContourParams& params);

/// Midpoint nodes theta_k = -pi + (k - 1/2) 2 pi / N with z = (N/t) zeta,
/// dz = (N/t) zeta'. Index j holds node k = j + 1.
///
/// Mirror nodes satisfy thetas[N-1-j] == -thetas[j], z[N-1-j] == conj(z[j])
/// and dz[N-1-j] == -conj(dz[j]) exactly. For odd N the middle node is
/// theta = 0.
struct NodeSet {
    int N = 0;
    double t = 0.0;
    std::vector<double> thetas;
    std::vector<cdouble> z;
    std::vector<cdouble> dz;
};

NodeSet nodes(const ContourParams& params, int N, double t);

}  // namespace talbot
