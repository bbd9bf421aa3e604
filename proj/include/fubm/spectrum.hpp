#pragma once

#include "fubm/curve.hpp"
#include "fubm/kernel.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fubm {

enum class Branch { inner, outer };

/// The unique z on the requested branch of gamma_t with arg h_t(z) = phi.
/// phi <= 0 is served by the stored upper half, phi > 0 by its conjugate.
/// Values within a few ulps of +-beta map to the critical point itself.
/// Throws DomainError for |phi| > beta(t).
Complex invert_h(double phi, Branch branch, SpectralCurve const& curve);

/// Spectral density with respect to d(theta):
///     rho_t(theta) = log|z_out(theta) - 1| / (pi t)
/// on [-beta, beta], zero outside and exactly zero at the endpoints.
double density_at(double theta, SpectralCurve const& curve);

/// Density on theta_j = beta sin(psi_j), psi_j equispaced on [-pi/2, pi/2].
/// The nodes cluster like a square root at +-beta and include 0 and +-beta.
struct DensityTable {
    Time t;
    double beta;
    double x_t;
    std::vector<double> thetas;
    std::vector<double> rho;
    /// Trapezoid weights in psi mapped to theta. sum_j weights[j] f(theta_j) rho[j]
    /// integrates f against the density; the integrand extends smoothly and
    /// evenly through psi = +-pi/2, so the rule converges spectrally.
    std::vector<double> weights;
    /// Total mass from adaptive quadrature of density_at.
    double normalization;
};

/// n_grid must be odd and >= 32.
DensityTable density_table(SpectralCurve const& curve, std::size_t n_grid);

/// Re tau_t(r e^{i theta}) = 1 + 2 sum_{n=1}^{n_terms} m_n(t) r^n cos(n theta),
/// with the moments from moment_sum. Requires 0 <= r < 1.
double herglotz_re(double r, double theta, Time t, std::size_t n_terms);

/// Same series from precomputed moments m_1..m_N.
double herglotz_re(double r, double theta, std::span<double const> moments);

} // namespace fubm
