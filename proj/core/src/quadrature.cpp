#include "talbot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "talbot/errors.hpp"

namespace talbot {

namespace {

const double kLogRealMax = std::log(std::numeric_limits<double>::max());

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

std::string node_message(const std::string& what, int k, cdouble z) {
    std::ostringstream os;
    os.precision(17);
    os << what << " at node " << k << " (z = " << z << ")";
    return os.str();
}

// exp(z t) F(z) z' for node index j (0-based); k = j + 1 in messages.
Eigen::VectorXcd node_term(const Transform& transform, const NodeSet& set, int j) {
    const cdouble z = set.z[j];
    const int k = j + 1;
    if (z.real() * set.t >= kLogRealMax) {
        throw EvaluationError(node_message("exp(z t) overflows", k, z), k, z);
    }
    Eigen::VectorXcd f;
    try {
        f = transform(z);
    } catch (const EvaluationError&) {
        throw;
    } catch (const Error& e) {
        throw EvaluationError(node_message(e.what(), k, z), k, z);
    }
    if (f.size() != transform.dimension()) {
        throw EvaluationError(node_message("transform returned a vector of the wrong length", k, z), k, z);
    }
    if (!f.allFinite()) {
        throw EvaluationError(node_message("transform value is not finite", k, z), k, z);
    }
    return (std::exp(z * set.t) * set.dz[j]) * f;
}

std::vector<int> order_by_abs_real(const NodeSet& set, std::vector<int> idx) {
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return std::abs(set.z[a].real()) < std::abs(set.z[b].real());
    });
    return idx;
}

void check_args(int N, double t) {
    if (N < 1) throw DomainError("node count must be positive");
    if (!(t > 0.0)) throw DomainError("t must be positive");
}

}  // namespace

Transform Transform::scalar(ScalarFunction f) {
    Transform tr;
    tr.scalar_ = std::move(f);
    tr.dimension_ = 1;
    return tr;
}

Transform Transform::vector(Eigen::Index dimension, VectorFunction f) {
    if (dimension < 1) throw DomainError("vector transform needs a positive dimension");
    Transform tr;
    tr.vector_ = std::move(f);
    tr.dimension_ = dimension;
    return tr;
}

Eigen::VectorXcd Transform::operator()(cdouble z) const {
    if (scalar_) {
        Eigen::VectorXcd v(1);
        v[0] = scalar_(z);
        return v;
    }
    return vector_(z);
}

InversionResult invert(const Transform& transform, const ContourParams& params, int N, double t) {
    check_args(N, t);
    const NodeSet set = nodes(params, N, t);

    std::vector<int> upper;
    for (int j = N / 2; j < N; ++j) upper.push_back(j);
    upper = order_by_abs_real(set, std::move(upper));

    const Eigen::Index J = transform.dimension();
    std::vector<CompensatedSum> acc(J);
    for (int j : upper) {
        const Eigen::VectorXcd term = node_term(transform, set, j);
        const double weight = (set.thetas[j] == 0.0) ? 0.5 : 1.0;
        for (Eigen::Index i = 0; i < J; ++i) acc[i].add(weight * term[i].imag());
    }

    Eigen::VectorXd value(J);
    for (Eigen::Index i = 0; i < J; ++i) value[i] = 2.0 * acc[i].value() / N;
    return InversionResult{std::move(value), N, t, params};
}

InversionResult invert_full_sum(const Transform& transform, const ContourParams& params, int N,
                                double t) {
    check_args(N, t);
    const NodeSet set = nodes(params, N, t);

    std::vector<int> all(N);
    std::iota(all.begin(), all.end(), 0);
    all = order_by_abs_real(set, std::move(all));

    const Eigen::Index J = transform.dimension();
    // (1 / (N i)) sum T_k has real part Im(sum T_k) / N.
    std::vector<CompensatedSum> acc(J);
    for (int j : all) {
        const Eigen::VectorXcd term = node_term(transform, set, j);
        for (Eigen::Index i = 0; i < J; ++i) acc[i].add(term[i].imag());
    }

    Eigen::VectorXd value(J);
    for (Eigen::Index i = 0; i < J; ++i) value[i] = acc[i].value() / N;
    return InversionResult{std::move(value), N, t, params};
}

double relative_error(const Eigen::VectorXd& approx, const Eigen::VectorXd& reference) {
    if (approx.size() != reference.size()) throw DomainError("relative_error: size mismatch");
    const double scale = reference.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw DomainError("relative_error: reference must be finite and nonzero");
    }
    return (approx - reference).cwiseAbs().maxCoeff() / scale;
}

ParamSource fixed_params(ContourParams params) {
    return [params](int) { return params; };
}

std::vector<int> NRange::values() const {
    if (step < 1) throw DomainError("N range step must be at least 1");
    if (start < 1 || stop < start) throw DomainError("N range must be nonempty with start >= 1");
    std::vector<int> out;
    for (int n = start; n <= stop; n += step) out.push_back(n);
    return out;
}

std::vector<SweepPoint> convergence_sweep(const Transform& transform,
                                          const Eigen::VectorXd& reference, double t,
                                          const NRange& range, const ParamSource& source) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (reference.size() != transform.dimension()) {
        throw DomainError("convergence_sweep: reference has the wrong length");
    }
    const double scale = reference.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || !reference.allFinite()) {
        throw DomainError("convergence_sweep: reference must be finite and nonzero");
    }

    std::vector<SweepPoint> out;
    for (int N : range.values()) {
        SweepPoint point{N, nan, nan, nan, std::nullopt};
        try {
            const ContourParams params = source(N);
            point.c_used = params.decay_rate().value_or(nan);
            point.zeta0_used = zeta_at_origin(params);
            const InversionResult res = invert(transform, params, N, t);
            point.relative_error = relative_error(res.value, reference);
        } catch (const Error& e) {
            point.failure = e.what();
        }
        out.push_back(std::move(point));
    }
    return out;
}

}  // namespace talbot
