#pragma once

// Reference computations kept independent of the library: plain bisection,
// naive sums and textbook closed forms.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

// Bisection to the last bit. f(lo) and f(hi) must differ in sign.
inline double bisect(std::function<double(double)> const& f, double lo, double hi)
{
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        double const mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        double const fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Crossing of the positive axis: (x - 1)^2 e^{t (2/x - 1)} = 1 on (0, 1).
inline double x_t(double t)
{
    return bisect([t](double x) { return 2.0 * std::log(1.0 - x) + t * (2.0 / x - 1.0); }, 1e-9,
                  1.0 - 1e-15);
}

// Outer radius on the negative axis: (1 + r)^2 e^{-2t/r} = e^t.
inline double radius_at_pi(double t)
{
    return bisect([t](double r) { return 2.0 * std::log1p(r) - 2.0 * t / r - t; }, 1e-6, 1e6);
}

inline double beta(double t)
{
    return 0.5 * std::sqrt(t * (4.0 - t)) + std::acos(1.0 - t / 2.0);
}

inline double theta_t(double t) { return std::acos(std::sqrt(t) / 2.0); }

inline std::complex<double> h(std::complex<double> z, double t)
{
    return (1.0 - z) * std::exp(t * (1.0 / z - 0.5));
}

// Moments by the alternating sum in long double; trustworthy only while the
// cancellation is mild (small n t).
inline double moment_naive(int n, double t)
{
    long double sum = 0.0L;
    long double coeff = 1.0L; // (-t)^k / k!
    for (int k = 0; k < n; ++k) {
        long double binom = 1.0L; // C(n, k+1)
        for (int j = 1; j <= k + 1; ++j) {
            binom = binom * (n - j + 1) / j;
        }
        sum += coeff * std::pow(static_cast<long double>(n), k - 1) * binom;
        coeff *= -static_cast<long double>(t) / (k + 1);
    }
    return static_cast<double>(std::exp(-0.5L * n * t) * sum);
}

// Closed forms for the first few moments.
inline double m2(double t) { return std::exp(-t) * (1.0 - t); }
inline double m3(double t) { return std::exp(-1.5 * t) * (1.0 - 3.0 * t + 1.5 * t * t); }

// sum_{n=1}^{N} m_n w^n by Horner.
inline std::complex<double> series(std::vector<double> const& moments, std::complex<double> w)
{
    std::complex<double> acc = 0.0;
    for (auto it = moments.rbegin(); it != moments.rend(); ++it) {
        acc = (acc + *it) * w;
    }
    return acc;
}

// Poisson kernel on the circle, normalized so that it integrates to 2 pi.
inline double poisson(double r, double angle)
{
    return (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(angle) + r * r);
}

inline double central_difference(std::function<double(double)> const& f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline std::mt19937_64 rng(unsigned seed = 20240601u) { return std::mt19937_64(seed); }

} // namespace oracle
