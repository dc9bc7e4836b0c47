#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "talbot/contour.hpp"
#include "talbot/quadrature.hpp"

namespace talbot {

// Scalar test transforms. Every singularity lies on the closed negative real axis.

/// F1(z; lambda) = 1 / (z + lambda); inverse exp(-lambda t).
cdouble eval_F1(cdouble z, double lambda);

/// F2(z) = (100 z - 1) sinh(sqrt(z)/2) / (z (z sinh(sqrt z) + sqrt(z) cosh(sqrt z))).
///
/// Single-valued in z. Uses an overflow-free form for large |z| and a power
/// series in z for |z| < 1e-4.
cdouble eval_F2(cdouble z);

/// F2 evaluated literally from a caller-chosen square root w of z (w or -w).
cdouble eval_F2_from_root(cdouble z, cdouble w);

/// F3(z; c, r) = exp(-r sqrt(z (1 + z) / (1 + c z))) / z, with the root taken
/// as sqrt(z) sqrt(1 + z) / sqrt(1 + c z) in principal branches.
/// Throws DomainError on the cut (-inf, 0].
cdouble eval_F3(cdouble z, double c, double r);

/// exp(-lambda t).
double reference_F1(double t, double lambda);

/// Residue series of exp(z t) F2(z) over the pole at 0 and the first
/// `pole_count` poles -x_n^2 (x_n tan x_n = 1).
double f2_residue_series(double t, int pole_count);

/// Inverse of F2 from the residue series, truncated once terms fall below
/// 1e-17 relative and certified against five extra poles.
double reference_F2(double t);

/// Inverse of F3, computed on the rational contour in extended precision and
/// certified against the double-precision cotangent contour at N = 30.
/// Throws CertificationError if the two disagree beyond 1e-10 relative.
double reference_F3(double t, double c, double r);

/// Rational-contour inversion of F3 in long double.
long double invert_F3_extended(double t, double c, double r, int N);

struct ScalarSuiteEntry {
    std::string id;
    ScalarFunction transform;
    std::function<double(double)> reference;
    std::vector<double> admissible_t;
};

ScalarSuiteEntry f1_entry(double lambda);
ScalarSuiteEntry f2_entry();
ScalarSuiteEntry f3_entry(double c, double r);

// Semi-discrete heat equation u_t + A u = 0 on the unit square with
// homogeneous Dirichlet conditions and the 5-point Laplacian.

inline constexpr std::uint64_t kDefaultHeatSeed = 20160;
inline constexpr double kDefaultDiffusivity = 0.01;
inline constexpr int kDefaultHeatGrid = 20;

struct HeatModel {
    int m;         ///< interior points per dimension; J = m^2
    double kappa;  ///< diffusivity
    std::uint64_t seed;
    Eigen::SparseMatrix<double> A;  ///< kappa * (negative 5-point Laplacian)
    Eigen::VectorXd u0;             ///< uniform [0, 1) entries, std::mt19937_64(seed)

    Eigen::Index dimension() const { return static_cast<Eigen::Index>(m) * m; }
};

HeatModel make_heat_model(int m = kDefaultHeatGrid, std::uint64_t seed = kDefaultHeatSeed,
                          double kappa = kDefaultDiffusivity);

/// Closed-form eigenvalues kappa (4/h^2)(sin^2(j pi h/2) + sin^2(k pi h/2)),
/// ordered with j fastest.
Eigen::VectorXd heat_eigenvalues(const HeatModel& model);

/// Solves (z I + A) x = u0. Direct sparse LU, dense LU for J <= 100.
/// Throws EvaluationError (node -1) if the solve fails or its residual
/// exceeds 1e-12 ||u0||_inf.
Eigen::VectorXcd heat_transform(const HeatModel& model, cdouble z);

/// exp(-A t) u0 from the sine-mode eigendecomposition.
Eigen::VectorXd heat_reference(const HeatModel& model, double t);

Transform heat_as_transform(const HeatModel& model);

}  // namespace talbot
