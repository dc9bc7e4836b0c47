#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "talbot/contour.hpp"
#include "talbot/errors.hpp"
#include "talbot/params.hpp"

using namespace talbot;
using std::numbers::pi;

namespace {

// Four-decimal coefficients as printed for the optimal contour.
ContourParams printed() { return ContourParams::cotangent(0.6122, 0.5017, 0.2645, 0.6407, 1.3580); }

ContourParams printed_rational() { return ContourParams::rational(0.1446, 3.0232, 3.0767, 0.2339, 1.311); }

}  // namespace

TEST(ContourParams, RejectsInvalidCoefficients) {
    EXPECT_THROW(ContourParams::cotangent(0.6, 0.5, 0.26, 0.0), DomainError);
    EXPECT_THROW(ContourParams::cotangent(0.6, 0.5, 0.26, 1.2), DomainError);
    EXPECT_THROW(ContourParams::cotangent(0.6, -0.5, 0.26, 0.6), DomainError);
    EXPECT_THROW(ContourParams::cotangent(0.6, 0.5, 0.0, 0.6), DomainError);
    EXPECT_THROW(ContourParams::rational(0.1, 3.0, 1.0, 0.2), DomainError);
    EXPECT_NO_THROW(ContourParams::cotangent(0.6, 0.5, 0.26, 1.0));
}

TEST(ContourParams, AccessorsMatchKind) {
    const auto p = printed();
    EXPECT_EQ(p.kind(), ContourKind::Cotangent);
    EXPECT_DOUBLE_EQ(p.shape(), 0.6407);
    EXPECT_THROW(p.rational_coeffs(), DomainError);
    const auto r = printed_rational();
    EXPECT_EQ(r.kind(), ContourKind::Rational);
    EXPECT_DOUBLE_EQ(r.shape(), 3.0767);
    EXPECT_DOUBLE_EQ(*r.decay_rate(), 1.311);
}

TEST(Zeta, ApexOfPrintedContour) {
    EXPECT_NEAR(zeta(printed(), 0.0).real(), 0.17085, 1e-4);
    EXPECT_EQ(zeta(printed(), 0.0).imag(), 0.0);
    EXPECT_NEAR(zeta_at_origin(printed()), -0.6122 + 0.5017 / 0.6407, 1e-15);
    EXPECT_DOUBLE_EQ(zeta_at_origin(printed_rational()), 0.1446);
}

TEST(Zeta, EndpointOfPrintedContour) {
    const cdouble z = zeta(printed(), pi);
    EXPECT_NEAR(z.real(), -1.358, 2e-3);
    EXPECT_NEAR(z.imag(), 0.2645 * pi, 1e-4);
}

TEST(Zeta, AgreesWithDirectFormulaAwayFromOrigin) {
    const auto p = printed();
    const auto& k = p.cotangent_coeffs();
    for (cdouble th : {cdouble(0.7, 0.0), cdouble(2.5, -0.4), cdouble(-1.1, 0.9), cdouble(0.2, 0.05)}) {
        const cdouble want = oracle::cotangent_zeta(k.sigma, k.mu, k.nu, k.alpha, th);
        EXPECT_LT(std::abs(zeta(printed(), th) - want), 1e-14 * std::abs(want)) << th;
    }
}

TEST(Zeta, ConjugateSymmetryOnRealAxis) {
    for (const auto& p : {printed(), printed_rational()}) {
        for (double th : {0.01, 0.3, 1.0, 2.2, 3.1}) {
            const cdouble a = zeta(p, -th);
            const cdouble b = std::conj(zeta(p, th));
            EXPECT_EQ(a.real(), b.real());
            EXPECT_EQ(a.imag(), b.imag());
        }
    }
}

TEST(Zeta, RemovableSingularity) {
    // The imaginary part is linear in theta, so only the remainder after that term is O(h^2).
    for (const auto& p : {printed(), printed_rational()}) {
        const double slope = p.kind() == ContourKind::Cotangent ? p.cotangent_coeffs().nu : p.rational_coeffs().e;
        for (cdouble h : {cdouble(1e-5, 0), cdouble(-1e-5, 0), cdouble(0, 1e-5), cdouble(7e-6, -7e-6)}) {
            const cdouble d = zeta(p, h) - zeta(p, 0.0);
            EXPECT_LE(std::abs(d), 1e-5) << h;
            EXPECT_LE(std::abs(d - cdouble(0, slope) * h), 1e-8) << h;
        }
    }
}

TEST(Zeta, SeriesBranchIsContinuousAtThreshold) {
    // |alpha theta| = 0.1 separates the Taylor and direct branches.
    const auto p = printed();
    const double edge = 0.1 / p.shape();
    for (double s : {1.0 - 1e-9, 1.0 + 1e-9}) {
        const cdouble th = edge * s;
        const auto& k = p.cotangent_coeffs();
        const cdouble want = oracle::cotangent_zeta(k.sigma, k.mu, k.nu, k.alpha, th);
        EXPECT_LT(std::abs(zeta(p, th) - want), 1e-14);
    }
}

TEST(Zeta, PolesRaiseDomainError) {
    EXPECT_THROW(zeta(printed(), pi / 0.6407), DomainError);
    EXPECT_THROW(zeta_prime(printed(), -2.0 * pi / 0.6407), DomainError);
    EXPECT_THROW(zeta(printed_rational(), pi * std::sqrt(3.0767)), DomainError);
    EXPECT_NO_THROW(zeta(printed(), pi));
}

TEST(ZetaPrime, AtOrigin) {
    const cdouble d = zeta_prime(printed(), 0.0);
    EXPECT_NEAR(d.real(), 0.0, 1e-15);
    EXPECT_NEAR(d.imag(), 0.2645, 1e-6);
    EXPECT_NEAR(zeta_prime(printed_rational(), 0.0).imag(), 0.2339, 1e-15);
}

TEST(ZetaPrime, PurelyImaginaryOnImaginaryAxis) {
    const cdouble d = zeta_prime(printed(), cdouble(0.0, 1.3580));
    EXPECT_LE(std::abs(d.real()), 1e-10);
}

TEST(ZetaPrime, CentralDifferenceAtSpecPoint) {
    const auto p = printed();
    const cdouble th(1.0, 0.5);
    const cdouble fd = oracle::central_difference([&](cdouble x) { return zeta(p, x); }, th, 1e-5);
    EXPECT_LE(std::abs(zeta_prime(p, th) - fd), 1e-7);
}

TEST(ZetaPrime, CentralDifferenceOnGrid) {
    for (const auto& p : {printed(), printed_rational()}) {
        for (double x : {-3.0, -1.7, -0.04, 0.0, 0.3, 1.2, 2.9}) {
            for (double y : {-2.3, -0.5, 0.0, 0.4, 1.3}) {
                const cdouble th(x, y);
                const auto f = [&](cdouble s) { return zeta(p, s); };
                const cdouble fd = oracle::central_difference(f, th, 1e-4);
                const cdouble fd2 = oracle::central_difference(f, th, 5e-5);
                // Richardson-extrapolated difference is O(h^4).
                const cdouble rich = (4.0 * fd2 - fd) / 3.0;
                EXPECT_LE(std::abs(zeta_prime(p, th) - rich), 1e-8 * (1.0 + std::abs(rich))) << th;
            }
        }
    }
}

TEST(Nodes, TwoNodes) {
    const auto ns = nodes(printed(), 2, 1.0);
    ASSERT_EQ(ns.thetas.size(), 2u);
    EXPECT_DOUBLE_EQ(ns.thetas[0], -pi / 2);
    EXPECT_DOUBLE_EQ(ns.thetas[1], pi / 2);
}

TEST(Nodes, MidpointGridAndPairing) {
    for (int N : {1, 5, 16, 17, 24, 61}) {
        const auto ns = nodes(modified_talbot(), N, 1.7);
        ASSERT_EQ(int(ns.z.size()), N);
        for (int j = 0; j < N; ++j) {
            EXPECT_NEAR(ns.thetas[j], -pi + (j + 0.5) * 2.0 * pi / N, 1e-15);
            EXPECT_NE(std::abs(ns.thetas[j]), pi);
            const int m = N - 1 - j;
            EXPECT_EQ(ns.thetas[m], -ns.thetas[j]);
            EXPECT_EQ(ns.z[m], std::conj(ns.z[j]));
            EXPECT_EQ(ns.dz[m], -std::conj(ns.dz[j]));
        }
        if (N % 2 == 0) {
            for (double th : ns.thetas) EXPECT_NE(th, 0.0);
        } else {
            EXPECT_EQ(ns.thetas[N / 2], 0.0);
        }
    }
}

TEST(Nodes, ScaledByNOverT) {
    const auto p = printed();
    const auto ns = nodes(p, 24, 1.0);
    for (int j = 0; j < 24; ++j) {
        EXPECT_LT(std::abs(ns.z[j] - 24.0 * zeta(p, ns.thetas[j])), 1e-13 * std::abs(ns.z[j]));
        EXPECT_LT(std::abs(ns.dz[j] - 24.0 * zeta_prime(p, ns.thetas[j])), 1e-13 * std::abs(ns.dz[j]));
    }
}

TEST(Nodes, ApexNodeAtTwentyFour) {
    const auto ns = nodes(printed(), 24, 1.0);
    EXPECT_NEAR(ns.thetas[12], pi / 24, 1e-15);
    EXPECT_NEAR(ns.z[12].real(), 24 * 0.1706, 0.05);
    EXPECT_NEAR(ns.z[11].real(), 24 * 0.1706, 0.05);
}

TEST(Nodes, TimeScaling) {
    const auto a = nodes(printed(), 24, 1.0);
    const auto b = nodes(printed(), 24, 2.0);
    const auto c = nodes(printed(), 24, 0.3);
    for (int j = 0; j < 24; ++j) {
        EXPECT_EQ(b.z[j], 0.5 * a.z[j]);
        EXPECT_LT(std::abs(c.z[j] - (2.0 / 0.3) * b.z[j]), 1e-14 * std::abs(c.z[j]));
    }
}

TEST(Nodes, RejectsBadArguments) {
    EXPECT_THROW(nodes(printed(), 0, 1.0), DomainError);
    EXPECT_THROW(nodes(printed(), 4, 0.0), DomainError);
    EXPECT_THROW(nodes(printed(), 4, -1.0), DomainError);
}
