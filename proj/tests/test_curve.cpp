#include "fubm/curve.hpp"
#include "fubm/errors.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fubm;

namespace {

double const kTimes[] = {0.05, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 3.7, 3.78, 3.9, 3.99};

// Sum of f dz over the closed curve from the stored upper half.
template <class F>
Complex closed_integral(SpectralCurve const& curve, F f)
{
    Complex sum(0.0, 0.0);
    for (auto const& s : curve.samples) {
        sum += f(s.z) * s.contour_weight - f(std::conj(s.z)) * std::conj(s.contour_weight);
    }
    return sum;
}

} // namespace

TEST_CASE("x_t against bisection, monotone in t")
{
    double previous = 0.0;
    for (double t = 0.05; t < 4.0; t += 0.05) {
        double const x = solve_xt(Time(t));
        CHECK(x == doctest::Approx(oracle::x_t(t)).epsilon(1e-14));
        CHECK(x > previous);
        CHECK(x < 1.0);
        CHECK(std::abs(k_cartesian(x, Time(t)).value - 1.0) < 1e-13);
        previous = x;
    }
}

TEST_CASE("x_t lies above 3 - sqrt(5) only for larger t")
{
    double const bound = 3.0 - std::sqrt(5.0);
    for (double t : {3.0, 3.25, 3.5, 3.75, 3.99}) {
        CHECK(solve_xt(Time(t)) > bound);
    }
    // The crossing moves towards 0 with t; at t = 1 it sits well below.
    CHECK(solve_xt(Time(1.0)) < bound);
    CHECK(solve_xt(Time(1e-3)) < 0.05);
}

TEST_CASE("outer radius: landmarks and domain")
{
    for (double t : kTimes) {
        Time const tt(t);
        double const theta_t = oracle::theta_t(t);
        CHECK(radius_outer(theta_t, tt) == doctest::Approx(std::sqrt(t)).epsilon(1e-15));
        CHECK(radius_outer(std::numbers::pi / 2, tt) == doctest::Approx(std::sqrt(std::expm1(t))).epsilon(1e-13));
        CHECK(radius_outer(std::numbers::pi, tt) == doctest::Approx(oracle::radius_at_pi(t)).epsilon(1e-13));
        CHECK_THROWS_AS(radius_outer(0.5 * theta_t, tt), DomainError);
        CHECK_THROWS_AS(radius_outer(3.2, tt), DomainError);
    }
}

TEST_CASE("inner arc endpoints and level-set membership")
{
    for (double t : {0.25, 1.0, 2.0, 3.0, 3.7}) {
        Time const tt(t);
        double const theta_t = oracle::theta_t(t);
        CHECK(std::abs(inner_point_polar(0.0, tt) - solve_xt(tt)) < 1e-14);
        CHECK(std::abs(inner_point_polar(theta_t, tt) - std::polar(std::sqrt(t), theta_t)) < 1e-15);
        for (int j = 1; j < 20; ++j) {
            Complex const z = inner_point_polar(theta_t * j / 20.0, tt);
            CHECK(std::abs(std::abs(oracle::h(z, t)) - 1.0) < 1e-12);
            CHECK(std::abs(z - 1.0) <= 1.0 + 1e-12);
            CHECK(std::abs(inner_branch_point(theta_t * j / 20.0, tt) - z) == 0.0);
        }
        CHECK_THROWS_AS(inner_point_polar(theta_t + 0.1, tt), DomainError);
    }
    Time const tt(3.9);
    double const x_t = solve_xt(tt);
    CHECK(std::abs(inner_point_cartesian(x_t, tt) - x_t) == 0.0);
    for (int j = 1; j <= 20; ++j) {
        double const x = x_t + (1.95 - x_t) * j / 20.0;
        Complex const z = inner_point_cartesian(x, tt);
        CHECK(std::abs(std::abs(oracle::h(z, 3.9)) - 1.0) < 1e-12);
        CHECK(z.imag() > 0.0);
        CHECK(inner_branch_point(x, tt) == z);
    }
    CHECK_THROWS_AS(inner_point_cartesian(1.96, tt), DomainError);
    CHECK_THROWS_AS(inner_point_cartesian(0.5 * x_t, tt), DomainError);
}

TEST_CASE("polar and Cartesian descriptions agree around the regime threshold")
{
    for (double t : {kCartesianThreshold - 0.05, kCartesianThreshold - 0.01}) {
        Time const tt(t);
        double const x_t = solve_xt(tt);
        for (int j = 1; j < 20; ++j) {
            double const x = x_t + (t / 2 - x_t) * j / 20.0;
            Complex const zc = inner_point_cartesian(x, tt);
            Complex const zp = inner_point_polar(std::arg(zc), tt);
            CHECK(std::abs(zc - zp) < 1e-12);
        }
    }
    // Just above the threshold the polar solve still works next to theta_t.
    Time const above(kCartesianThreshold + 0.05);
    double const theta_t = oracle::theta_t(above.value());
    Complex const zp = inner_point_polar(0.999 * theta_t, above);
    CHECK(std::abs(std::abs(oracle::h(zp, above.value())) - 1.0) < 1e-12);
}

TEST_CASE("build_curve: level set, landmarks and layout")
{
    for (double t : kTimes) {
        CAPTURE(t);
        Time const tt(t);
        SpectralCurve const c = build_curve(tt, 4096);
        REQUIRE(c.samples.size() == 4096);
        CHECK(max_modulus_error(c) < 1e-13);
        CHECK(c.x_t == doctest::Approx(oracle::x_t(t)).epsilon(1e-14));
        CHECK(c.beta == doctest::Approx(oracle::beta(t)).epsilon(1e-15));
        CHECK(c.inner_regime() == (t > kCartesianThreshold ? Regime::cartesian_inner : Regime::polar_inner));

        auto const& s = c.samples;
        CHECK(s.front().z == Complex(c.x_t, 0.0));
        CHECK(s.back().z.imag() == 0.0);
        CHECK(-s.back().z.real() == doctest::Approx(oracle::radius_at_pi(t)).epsilon(1e-13));
        CHECK(std::abs(s[c.split_index].z - std::polar(std::sqrt(t), c.theta_t)) < 1e-15);
        CHECK(std::abs(s[c.quarter_index].z - Complex(0.0, std::sqrt(std::expm1(t)))) < 1e-15 * std::exp(t));

        for (std::size_t j = 0; j < s.size(); ++j) {
            CHECK(s[j].z.imag() >= 0.0);
            CHECK_FALSE((s[j].z.imag() == 0.0 && s[j].z.real() >= 1.0));
            CHECK(s[j].residual <= 1e-12 * std::exp(t));
            bool const outer = s[j].regime == Regime::polar_outer;
            CHECK(outer == (j > c.split_index));
            if (s[j].regime == Regime::cartesian_inner) {
                CHECK(std::isnan(s[j].r_prime));
            } else {
                CHECK(std::isfinite(s[j].r_prime));
            }
            if (j == 0) {
                continue;
            }
            if (s[j].regime == Regime::cartesian_inner) {
                // Above the threshold the inner arc doubles back in angle but
                // stays a graph over x.
                CHECK(s[j].z.real() > s[j - 1].z.real());
            } else {
                CHECK(std::arg(s[j].z) > std::arg(s[j - 1].z));
            }
        }
    }
    CHECK_THROWS_AS(build_curve(Time(1.0), 63), DomainError);
}

TEST_CASE("contour weights reproduce Cauchy's theorem")
{
    Complex const two_pi_i(0.0, 2.0 * std::numbers::pi);
    for (double t : kTimes) {
        CAPTURE(t);
        SpectralCurve const c = build_curve(Time(t), 4096);
        CHECK(std::abs(closed_integral(c, [](Complex) { return Complex(1.0, 0.0); })) < 1e-12);
        CHECK(std::abs(closed_integral(c, [](Complex z) { return z * z; })) < 1e-11);
        CHECK(std::abs(closed_integral(c, [](Complex z) { return 1.0 / z; }) - two_pi_i) < 1e-12);
        // Pole inside near x_t / 2, pole outside beyond the crossing of the negative axis.
        Complex const inside(0.5 * c.x_t, 0.0);
        CHECK(std::abs(closed_integral(c, [&](Complex z) { return 1.0 / (z - inside); }) - two_pi_i) < 1e-10);
        Complex const outside(-1.5 * oracle::radius_at_pi(t), 0.0);
        CHECK(std::abs(closed_integral(c, [&](Complex z) { return 1.0 / (z - outside); })) < 1e-10);
        // Enclosed area from (1/2i) \oint conj(z) dz is positive.
        double const area = (closed_integral(c, [](Complex z) { return std::conj(z); }) / Complex(0.0, 2.0)).real();
        CHECK(area > 0.0);
    }
}

TEST_CASE("contour integrals converge under refinement")
{
    for (double t : {1.0, 3.9}) {
        auto value = [&](std::size_t n) {
            SpectralCurve const c = build_curve(Time(t), n);
            return closed_integral(c, [](Complex z) { return std::exp(z) / z; });
        };
        Complex const fine = value(8192);
        CHECK(std::abs(fine - Complex(0.0, 2.0 * std::numbers::pi)) < 1e-12);
        CHECK(std::abs(value(2048) - fine) < 1e-12);
    }
}

TEST_CASE("small t: curve hugs the circle |z - 1| = 1 away from the origin")
{
    double const t = 0.05;
    SpectralCurve const c = build_curve(Time(t), 4096);
    double worst = 0.0;
    for (auto const& s : c.samples) {
        if (std::abs(s.z) > 0.5) {
            worst = std::max(worst, std::abs(std::abs(s.z - 1.0) - 1.0));
        }
    }
    CHECK(worst < 0.1);
    CHECK(2.0 * c.beta == doctest::Approx(4.0 * std::sqrt(t)).epsilon(0.01));
}

TEST_CASE("critical point and branch split")
{
    for (double t : kTimes) {
        CAPTURE(t);
        SpectralCurve const c = build_curve(Time(t), 4096);
        CriticalPoint const cp = critical_points(c);
        CHECK(cp.minimum_at_split);
        CHECK(cp.arg_plus == -c.beta);
        CHECK(std::abs(cp.z_plus - std::polar(std::sqrt(t), c.theta_t)) < 1e-15);
        CHECK(std::abs(c.samples[c.split_index].phi + c.beta) < 1e-12);
        // h_t' vanishes there: -1/(1 - z) = t / z^2.
        Complex const z = cp.z_plus;
        CHECK(std::abs(1.0 / (1.0 - z) + t / (z * z)) < 1e-12);

        BranchSplit const split = split_curve(c);
        CHECK(split.gamma1.first == 0);
        CHECK(split.gamma1.last == c.split_index);
        CHECK(split.gamma2.first == c.split_index);
        CHECK(split.gamma2.last == c.samples.size() - 1);
        CHECK(c.samples.front().phi == 0.0);
        CHECK(std::abs(c.samples.back().phi) < 1e-12);
    }
}

TEST_CASE("split_curve rejects a corrupted curve")
{
    SpectralCurve c = build_curve(Time(2.0), 256);
    std::swap(c.samples[10].phi, c.samples[11].phi);
    CHECK_THROWS_AS(split_curve(c), NumericalError);
    SpectralCurve d = build_curve(Time(2.0), 256);
    d.samples[d.split_index + 5].z = Complex(1.0, 0.5);
    CHECK_THROWS_AS(split_curve(d), NumericalError);
}

TEST_CASE("involution pairs the two branches")
{
    auto gen = oracle::rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        Complex const z(4.0 * unit(gen) - 2.0, 4.0 * unit(gen) - 2.0);
        if (std::abs(z - 1.0) < 1e-3) {
            continue;
        }
        Complex const w = involution(z);
        CHECK(std::abs(involution(w) - z) < 1e-12 * (1.0 + std::abs(z)));
        // Inside and outside of |z - 1| = 1 are exchanged.
        CHECK((std::abs(z - 1.0) - 1.0) * (std::abs(w - 1.0) - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(involution(Complex(1.0, 0.0)), DomainError);

    for (double t : {0.5, 2.0, 3.9}) {
        SpectralCurve const c = build_curve(Time(t), 1024);
        for (std::size_t j = 0; j <= c.split_index; j += 7) {
            Complex const z = c.samples[j].z;
            Complex const w = involution(z);
            CHECK(std::abs(std::abs(oracle::h(w, t)) - 1.0) < 1e-12);
            CHECK(std::abs(std::remainder(std::arg(oracle::h(w, t)) - c.samples[j].phi, 2.0 * std::numbers::pi)) < 1e-12);
            CHECK(std::abs(w - 1.0) >= 1.0 - 1e-12);
        }
    }
}
