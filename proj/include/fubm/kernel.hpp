#pragma once

#include <complex>
#include <optional>
#include <utility>

namespace fubm {

using Complex = std::complex<double>;

/// Diffusion time of the free unitary Brownian motion. Only 0 < t < 4 is
/// representable: the curve construction breaks down at t = 4.
class Time {
public:
    explicit Time(double t);

    double value() const noexcept { return t_; }

private:
    double t_;
};

/// Above this time the inner arc is no longer a polar graph and is built in
/// Cartesian coordinates.
inline constexpr double kCartesianThreshold = 3.7320508075688772; // 2 + sqrt(3)

/// h_t(z) = (1 - z) exp(t (1/z - 1/2)). Throws DomainError at z = 0.
Complex h_eval(Complex z, Time t);

/// h_t'(z) / h_t(z) = -1/(1 - z) - t/z^2.
Complex h_log_derivative(Complex z, Time t);

/// arg(1 - z) + t Im(1/z), principal arg. Continuous off {0} U [1, inf).
double arg_h_continuous(Complex z, Time t);

struct PolarConstraint {
    double value;
    double d_r;
    double d_theta;
};

/// g(r, theta) = (1 + r^2 - 2 r cos theta) exp(2 t cos theta / r) and its
/// partial derivatives. |h_t(r e^{i theta})| = 1 iff g = e^t.
PolarConstraint g_polar(double r, double theta, Time t);

struct CartesianConstraint {
    double value;
    /// Roots (in y^2) of the quartic factor of dg/dy, ordered (minus, plus);
    /// empty when the discriminant 4 t x (2 + (t - 4) x) is negative.
    std::optional<std::pair<double, double>> w_roots;
};

CartesianConstraint g_cartesian(double x, double y, Time t);

struct KValue {
    double value;
    double d_x;
};

/// k_t(x) = (x - 1)^2 exp(t (2/x - 1)), the real-axis trace of g / e^t.
KValue k_cartesian(double x, Time t);

struct SupportParams {
    double theta_t; ///< arccos(sqrt(t)/2), angle of the critical point
    double beta;    ///< half-width of the spectral support
};

/// Accepts 0 < t <= 4 (beta extends continuously to t = 4).
SupportParams support_params(double t);

/// log1p(s)/s, continuous through s = 0. Requires s > -1.
double log1p_ratio(double s);
double log1p_ratio_derivative(double s);

/// The constraint with the trivial root |z - 1| = 1 divided out. With
/// s = |z - 1|^2 - 1 one has log g - t = s * Q where
///     Q = log1p(s)/s - t/|z|^2,
/// so the non-trivial branch of |h_t| = 1 is exactly Q = 0.
struct DeflatedConstraint {
    double value;
    double d_first;  ///< d/dr (polar) or d/dx (Cartesian)
    double d_second; ///< d/dtheta (polar) or d/d(y^2) (Cartesian)
};

/// Polar form, scaled by r: r * Q(r e^{i theta}).
DeflatedConstraint deflated_polar(double r, double theta, Time t);

/// Cartesian form Q(x + i y); the second derivative slot is d/d(y^2).
DeflatedConstraint deflated_cartesian(double x, double y, Time t);

} // namespace fubm
