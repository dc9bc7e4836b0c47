#include "talbot/problems.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <limits>
#include <sstream>

#include "talbot/errors.hpp"
#include "talbot/params.hpp"

namespace talbot {

namespace {

constexpr double kPi = std::numbers::pi;

bool on_negative_axis(cdouble z) { return z.imag() == 0.0 && z.real() <= 0.0; }

std::string at(const char* what, cdouble z) {
    std::ostringstream os;
    os.precision(17);
    os << what << " at z = " << z;
    return os.str();
}

// Power series sum_k (z / scale)^k / (2k + offset)! for |z| small.
cdouble even_odd_series(cdouble z, double scale, int offset) {
    const cdouble u = z / scale;
    cdouble term = 1.0;
    for (int j = 2; j <= offset; ++j) term /= static_cast<double>(j);
    cdouble sum = term;
    for (int k = 1; k < 6; ++k) {
        term *= u / static_cast<double>((2 * k + offset - 1) * (2 * k + offset));
        sum += term;
    }
    return sum;
}

}  // namespace

cdouble eval_F1(cdouble z, double lambda) {
    const cdouble den = z + lambda;
    if (den == 0.0) throw DomainError(at("F1 pole", z));
    return 1.0 / den;
}

cdouble eval_F2_from_root(cdouble z, cdouble w) {
    if (z == 0.0) throw DomainError(at("F2 pole", z));
    const cdouble den = z * (z * std::sinh(w) + w * std::cosh(w));
    if (den == 0.0) throw DomainError(at("F2 pole", z));
    return (100.0 * z - 1.0) * std::sinh(0.5 * w) / den;
}

cdouble eval_F2(cdouble z) {
    if (z == 0.0) throw DomainError(at("F2 pole", z));
    cdouble value;
    if (std::abs(z) < 1e-4) {
        // sinh(w/2) = (w/2) P(z),  z sinh w + w cosh w = w (z S(z) + C(z))
        const cdouble P = even_odd_series(z, 4.0, 1);
        const cdouble S = even_odd_series(z, 1.0, 1);
        const cdouble C = even_odd_series(z, 1.0, 0);
        const cdouble den = 2.0 * z * (z * S + C);
        if (den == 0.0) throw DomainError(at("F2 pole", z));
        value = (100.0 * z - 1.0) * P / den;
    } else {
        // Divide through by exp(w) with Re w >= 0.
        const cdouble w = std::sqrt(z);
        const cdouble E = std::exp(-w);
        const cdouble E2 = E * E;
        const cdouble den = z * (z * (1.0 - E2) + w * (1.0 + E2));
        if (den == 0.0) throw DomainError(at("F2 pole", z));
        value = (100.0 * z - 1.0) * std::exp(-0.5 * w) * (1.0 - E) / den;
    }
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw DomainError(at("F2 is not finite", z));
    }
    return value;
}

cdouble eval_F3(cdouble z, double c, double r) {
    if (on_negative_axis(z)) throw DomainError(at("F3 branch cut", z));
    const cdouble root = std::sqrt(z) * std::sqrt(1.0 + z) / std::sqrt(1.0 + c * z);
    return std::exp(-r * root) / z;
}

double reference_F1(double t, double lambda) { return std::exp(-lambda * t); }

namespace {

// Positive roots of cos x - x sin x on (n pi, n pi + pi/2).
double f2_pole_root(int n) {
    double lo = n * kPi;
    double hi = lo + 0.5 * kPi;
    auto g = [](double x) { return std::cos(x) - x * std::sin(x); };
    double glo = g(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    // One Newton step: g'(x) = -2 sin x - x cos x.
    double x = 0.5 * (lo + hi);
    const double dg = -2.0 * std::sin(x) - x * std::cos(x);
    if (dg != 0.0) {
        const double xn = x - g(x) / dg;
        if (xn > n * kPi && xn < n * kPi + 0.5 * kPi) x = xn;
    }
    return x;
}

// Residue of exp(z t) F2(z) at a simple pole by the trapezoidal rule on a circle.
// The radius is capped at 1/t so exp(z t) varies by at most e^2 around it.
double f2_residue(double t, double pole, double radius) {
    constexpr int M = 64;
    radius = std::min(radius, 1.0 / t);
    cdouble sum = 0.0;
    for (int j = 0; j < M; ++j) {
        const cdouble e = std::polar(1.0, 2.0 * kPi * (j + 0.5) / M);
        const cdouble z = pole + radius * e;
        sum += e * std::exp(z * t) * eval_F2(z);
    }
    return (radius * sum / static_cast<double>(M)).real();
}

std::vector<double> f2_poles(int count) {
    std::vector<double> poles{0.0};
    for (int n = 0; n < count; ++n) {
        const double x = f2_pole_root(n);
        poles.push_back(-x * x);
    }
    return poles;
}

// Sum of residues at poles[0..used], each from a circle of a quarter of the
// distance to the nearest neighbouring pole.
double f2_series_from(const std::vector<double>& poles, double t, int used) {
    double sum = 0.0;
    for (int i = 0; i <= used; ++i) {
        double gap = std::numeric_limits<double>::infinity();
        if (i > 0) gap = std::min(gap, poles[i - 1] - poles[i]);
        if (i + 1 < static_cast<int>(poles.size())) gap = std::min(gap, poles[i] - poles[i + 1]);
        sum += f2_residue(t, poles[i], 0.25 * gap);
    }
    return sum;
}

}  // namespace

double f2_residue_series(double t, int pole_count) {
    if (!(t > 0.0)) throw DomainError("reference_F2 needs t > 0");
    if (pole_count < 0) throw DomainError("pole_count must be non-negative");
    // One extra pole so the last circle radius sees both neighbours.
    const std::vector<double> poles = f2_poles(pole_count + 1);
    return f2_series_from(poles, t, pole_count);
}

double reference_F2(double t) {
    if (!(t > 0.0)) throw DomainError("reference_F2 needs t > 0");
    constexpr int kMaxPoles = 5000;
    constexpr int kExtraPoles = 5;

    std::vector<double> poles = f2_poles(kMaxPoles + kExtraPoles + 1);
    double sum = 0.0;
    int negligible = 0;
    int used = -1;
    for (int i = 0; i <= kMaxPoles; ++i) {
        const double gap = std::min(i > 0 ? poles[i - 1] - poles[i] : std::numeric_limits<double>::infinity(),
                                    poles[i] - poles[i + 1]);
        const double term = f2_residue(t, poles[i], 0.25 * gap);
        sum += term;
        negligible = std::abs(term) < 1e-17 * std::abs(sum) ? negligible + 1 : 0;
        if (negligible >= 3) {
            used = i;
            break;
        }
    }
    if (used < 0) {
        std::ostringstream os;
        os << "reference_F2: residue series does not converge for t = " << t
           << "; minimum usable t is about " << 40.0 / (-poles[kMaxPoles]);
        throw NoConvergence(os.str());
    }
    const double check = f2_series_from(poles, t, used + kExtraPoles);
    if (std::abs(sum - check) > 1e-13 * std::abs(check)) {
        throw NoConvergence("reference_F2: residue series failed its truncation check");
    }
    return check;
}

namespace {

using ldouble = long double;
using cldouble = std::complex<long double>;

ldouble pi_ld() { return std::acos(ldouble(-1)); }

cldouble eval_F3_ld(cldouble z, ldouble c, ldouble r) {
    const cldouble one(1);
    const cldouble root = std::sqrt(z) * std::sqrt(one + z) / std::sqrt(one + c * z);
    return std::exp(-r * root) / z;
}

}  // namespace

long double invert_F3_extended(double t, double c, double r, int N) {
    if (N < 1 || !(t > 0.0)) throw DomainError("invert_F3_extended needs N >= 1 and t > 0");
    const RationalCoeffs k = modified_rational().rational_coeffs();
    const ldouble pi = pi_ld();
    const ldouble a = k.a, b = k.b, d = k.d, e = k.e;
    const ldouble p = d * pi * pi;
    const ldouble scale = ldouble(N) / ldouble(t);
    const ldouble h = 2 * pi / N;

    std::vector<std::pair<ldouble, ldouble>> terms;  // (|Re z|, weighted Im term)
    for (int j = N / 2; j < N; ++j) {
        const bool centre = (N - 1 - j) == j;
        const ldouble th = centre ? ldouble(0) : -pi + (ldouble(j) + ldouble(0.5)) * h;
        const cldouble theta(th, 0);
        const cldouble th2 = theta * theta;
        const cldouble zeta = a + b * th2 / (th2 - p) + cldouble(0, e) * theta;
        const cldouble den = th2 - p;
        const cldouble dzeta = -2 * b * p * theta / (den * den) + cldouble(0, e);
        const cldouble z = scale * zeta;
        const cldouble dz = scale * dzeta;
        const cldouble term = std::exp(z * ldouble(t)) * eval_F3_ld(z, c, r) * dz;
        terms.emplace_back(std::abs(z.real()), (centre ? ldouble(0.5) : ldouble(1)) * term.imag());
    }
    std::sort(terms.begin(), terms.end());
    ldouble sum = 0;
    for (const auto& [key, v] : terms) sum += v;
    return 2 * sum / N;
}

double reference_F3(double t, double c, double r) {
    if (!(t > 0.0)) throw DomainError("reference_F3 needs t > 0");
    constexpr int kExtendedN = 44;
    constexpr int kCheckN = 30;
    const double value = static_cast<double>(invert_F3_extended(t, c, r, kExtendedN));
    const Transform f3 = Transform::scalar([c, r](cdouble z) { return eval_F3(z, c, r); });
    const double check = invert(f3, modified_talbot(), kCheckN, t).scalar();
    if (!(std::abs(value - check) <= 1e-10 * std::abs(value))) {
        std::ostringstream os;
        os.precision(17);
        os << "reference_F3: rational and cotangent contours disagree at t = " << t << " (" << value
           << " vs " << check << ")";
        throw CertificationError(os.str());
    }
    return value;
}

ScalarSuiteEntry f1_entry(double lambda) {
    if (!(lambda > 0.0)) throw DomainError("F1 needs lambda > 0");
    return {"f1", [lambda](cdouble z) { return eval_F1(z, lambda); },
            [lambda](double t) { return reference_F1(t, lambda); },
            {0.1, 1.0, 4.0, 10.0}};
}

ScalarSuiteEntry f2_entry() {
    return {"f2", [](cdouble z) { return eval_F2(z); }, [](double t) { return reference_F2(t); },
            {1.0, 4.0}};
}

ScalarSuiteEntry f3_entry(double c, double r) {
    if (!(c > 0.0) || r < 0.0) throw DomainError("F3 needs c > 0 and r >= 0");
    return {"f3", [c, r](cdouble z) { return eval_F3(z, c, r); },
            [c, r](double t) { return reference_F3(t, c, r); },
            {1.0, 4.0}};
}

HeatModel make_heat_model(int m, std::uint64_t seed, double kappa) {
    if (m < 1) throw DomainError("heat model needs m >= 1");
    if (!(kappa > 0.0)) throw DomainError("heat model needs kappa > 0");
    const double h = 1.0 / (m + 1);
    const double s = kappa / (h * h);
    const Eigen::Index J = static_cast<Eigen::Index>(m) * m;

    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(5 * J);
    auto idx = [m](int p, int q) { return static_cast<Eigen::Index>(q) * m + p; };
    for (int q = 0; q < m; ++q) {
        for (int p = 0; p < m; ++p) {
            const Eigen::Index i = idx(p, q);
            entries.emplace_back(i, i, 4.0 * s);
            if (p > 0) entries.emplace_back(i, idx(p - 1, q), -s);
            if (p + 1 < m) entries.emplace_back(i, idx(p + 1, q), -s);
            if (q > 0) entries.emplace_back(i, idx(p, q - 1), -s);
            if (q + 1 < m) entries.emplace_back(i, idx(p, q + 1), -s);
        }
    }
    HeatModel model{m, kappa, seed, Eigen::SparseMatrix<double>(J, J), Eigen::VectorXd(J)};
    model.A.setFromTriplets(entries.begin(), entries.end());
    model.A.makeCompressed();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (Eigen::Index i = 0; i < J; ++i) model.u0[i] = uniform(rng);
    return model;
}

Eigen::VectorXd heat_eigenvalues(const HeatModel& model) {
    const int m = model.m;
    const double h = 1.0 / (m + 1);
    Eigen::VectorXd lam(model.dimension());
    for (int k = 1; k <= m; ++k) {
        for (int j = 1; j <= m; ++j) {
            const double sj = std::sin(j * kPi * h / 2.0);
            const double sk = std::sin(k * kPi * h / 2.0);
            lam[static_cast<Eigen::Index>(k - 1) * m + (j - 1)] =
                model.kappa * (4.0 / (h * h)) * (sj * sj + sk * sk);
        }
    }
    return lam;
}

Eigen::VectorXcd heat_transform(const HeatModel& model, cdouble z) {
    const Eigen::Index J = model.dimension();
    const Eigen::VectorXcd rhs = model.u0.cast<cdouble>();
    Eigen::VectorXcd x;

    if (J <= 100) {
        Eigen::MatrixXcd M = Eigen::MatrixXd(model.A).cast<cdouble>();
        M.diagonal().array() += z;
        x = M.partialPivLu().solve(rhs);
    } else {
        Eigen::SparseMatrix<cdouble> M = model.A.cast<cdouble>();
        for (Eigen::Index i = 0; i < J; ++i) M.coeffRef(i, i) += z;
        M.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<cdouble>, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(M);
        if (lu.info() != Eigen::Success) throw EvaluationError(at("heat solve: factorization failed", z), -1, z);
        x = lu.solve(rhs);
        if (lu.info() != Eigen::Success) throw EvaluationError(at("heat solve: back-substitution failed", z), -1, z);
    }

    const Eigen::VectorXcd res = model.A.cast<cdouble>() * x + z * x - rhs;
    const double bound = 1e-12 * model.u0.cwiseAbs().maxCoeff();
    if (!x.allFinite() || res.cwiseAbs().maxCoeff() > bound) {
        throw EvaluationError(at("heat solve: residual above 1e-12 ||u0||", z), -1, z);
    }
    return x;
}

Eigen::VectorXd heat_reference(const HeatModel& model, double t) {
    if (t < 0.0) throw DomainError("heat_reference needs t >= 0");
    const int m = model.m;
    if (t == 0.0) return model.u0;

    // Orthonormal, symmetric sine transform S_{jp} = sqrt(2/(m+1)) sin(j p pi/(m+1)).
    Eigen::MatrixXd S(m, m);
    const double norm = std::sqrt(2.0 / (m + 1));
    for (int j = 1; j <= m; ++j) {
        for (int p = 1; p <= m; ++p) S(j - 1, p - 1) = norm * std::sin(j * p * kPi / (m + 1));
    }
    // Grid value at (p, q) is u0[q m + p]: column-major m x m map.
    const Eigen::Map<const Eigen::MatrixXd> U0(model.u0.data(), m, m);
    Eigen::MatrixXd coeff = S * U0 * S;
    const Eigen::VectorXd lam = heat_eigenvalues(model);
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < m; ++j) coeff(j, k) *= std::exp(-lam[static_cast<Eigen::Index>(k) * m + j] * t);
    }
    const Eigen::MatrixXd U = S * coeff * S;
    return Eigen::Map<const Eigen::VectorXd>(U.data(), model.dimension());
}

Transform heat_as_transform(const HeatModel& model) {
    auto shared = std::make_shared<const HeatModel>(model);
    return Transform::vector(model.dimension(),
                             [shared](cdouble z) { return heat_transform(*shared, z); });
}

}  // namespace talbot
