#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "talbot/contour.hpp"

namespace talbot {

using ScalarFunction = std::function<cdouble(cdouble)>;
using VectorFunction = std::function<Eigen::VectorXcd(cdouble)>;

/// F(z), either scalar or the solution of a shifted linear problem.
///
/// Evaluators must be reentrant and satisfy F(conj z) = conj F(z).
class Transform {
public:
    static Transform scalar(ScalarFunction f);
    static Transform vector(Eigen::Index dimension, VectorFunction f);

    bool is_scalar() const noexcept { return static_cast<bool>(scalar_); }
    Eigen::Index dimension() const noexcept { return dimension_; }

    /// Evaluates F(z) as a vector of length dimension().
    Eigen::VectorXcd operator()(cdouble z) const;

private:
    Transform() = default;

    ScalarFunction scalar_;
    VectorFunction vector_;
    Eigen::Index dimension_ = 1;
};

struct InversionResult {
    Eigen::VectorXd value;  ///< f(t); length 1 for scalar transforms
    int N;
    double t;
    ContourParams contour;

    double scalar() const { return value[0]; }
};

/// Midpoint approximation of the inverse transform using conjugate symmetry:
///   f(t) ~ (2/N) sum_{theta_k > 0} Im(exp(z_k t) F(z_k) z'_k)  (+ centre node at weight 1/2 for odd N)
///
/// Terms are accumulated in ascending |Re z_k| with compensated summation.
/// Throws EvaluationError (with node index and z_k) if the transform fails,
/// returns a non-finite value, or exp(z_k t) would overflow.
InversionResult invert(const Transform& transform, const ContourParams& params, int N, double t);

/// The same approximation summed over all N nodes, without the symmetry saving.
InversionResult invert_full_sum(const Transform& transform, const ContourParams& params, int N,
                                double t);

/// Relative error in the infinity norm.
double relative_error(const Eigen::VectorXd& approx, const Eigen::VectorXd& reference);

/// Contour parameters to use at a given node count.
using ParamSource = std::function<ContourParams(int N)>;

ParamSource fixed_params(ContourParams params);

struct NRange {
    int start;
    int stop;  ///< inclusive
    int step = 1;

    std::vector<int> values() const;
};

struct SweepPoint {
    int N;
    double relative_error;  ///< NaN on failure
    double c_used;          ///< decay rate of the contour used (NaN if unknown)
    double zeta0_used;
    std::optional<std::string> failure;

    bool ok() const noexcept { return !failure.has_value(); }
};

/// Inverts at every N in `range`, building parameters per N from `source`.
/// Failures at one N are recorded in that row; the sweep continues.
std::vector<SweepPoint> convergence_sweep(const Transform& transform,
                                          const Eigen::VectorXd& reference, double t,
                                          const NRange& range, const ParamSource& source);

}  // namespace talbot
