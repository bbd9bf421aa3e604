#pragma once

#include "fubm/curve.hpp"
#include "fubm/kernel.hpp"
#include "fubm/spectrum.hpp"

#include <cstddef>
#include <vector>

namespace fubm {

/// Default cap on n for the alternating sum.
inline constexpr int kDefaultMomentLimit = 64;

/// m_n(t) = e^{-nt/2} sum_{k=0}^{n-1} (-t)^k/k! n^{k-1} C(n, k+1).
///
/// The sum cancels catastrophically (terms near 1e40 at n = 64, t ~ 4, result
/// below 1), so the integer factors are exact and the accumulation runs in
/// MPFR with at least 128 bits, widened to cover the largest term. Throws
/// DomainError for n < 1 or n > n_max.
double moment_sum(int n, Time t, int n_max = kDefaultMomentLimit);

/// m_1..m_{n_last} via moment_sum (n_max = n_last).
std::vector<double> moment_sum_series(int n_last, Time t);

inline constexpr double kDefaultContourRadius = 0.5;

/// Node count used when 0 is passed: max(256, 16 n, ceil(2 e n t / r)), even.
std::size_t default_contour_nodes(int n, Time t, double radius);

/// m_n(t) = (1 / (2 pi i n)) \oint_{|z| = radius} h_t(z)^n dz / (t (1 - z)),
/// equispaced trapezoid. The integrand can exceed the result by hundreds of
/// orders of magnitude (|h_t| is large near the positive axis inside the
/// curve), so it is evaluated in MPFR with precision taken from a bound on
/// the integrand over the nodes. Requires 0 < radius < 1 and nodes >= 64
/// (or 0 for the default).
Complex moment_contour(int n, Time t, double radius = kDefaultContourRadius,
                       std::size_t nodes = 0);

/// m_1..m_{n_last} from one sweep over the circle.
std::vector<Complex> moment_contour_series(int n_last, Time t,
                                           double radius = kDefaultContourRadius,
                                           std::size_t nodes = 0);

/// Integral of e^{i n theta} rho_t(theta) using the table's weights. Any
/// integer n; m_{-n} = conj(m_n).
Complex moment_density(int n, DensityTable const& table);

/// M_t(w) = sum_{n>=1} m_n(t) w^n via the contour integral over gamma_t of
///     w h_t'(z) / (1 - w h_t(z)) log(1 - z) dz / (2 pi i t).
/// Requires |w| < 1.
Complex mgf_contour(Complex w, SpectralCurve const& curve);

struct MomentReport {
    int n;
    double t;
    double m_sum;
    Complex m_contour;
    Complex m_density;
    double max_discrepancy; ///< largest pairwise gap between the three real parts
};

/// Reports for n = 1..n_last. Contour route uses one sweep at `radius`.
std::vector<MomentReport> moment_reports(int n_last, DensityTable const& table,
                                         double radius = kDefaultContourRadius,
                                         std::size_t nodes = 0);

} // namespace fubm
