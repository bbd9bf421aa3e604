#pragma once

#include "fubm/kernel.hpp"

#include <cstddef>
#include <vector>

namespace fubm {

enum class Regime { polar_outer, polar_inner, cartesian_inner };

char const* to_string(Regime regime);

/// One point of the upper half of the level curve |h_t| = 1.
struct CurveSample {
    double param;   ///< polar angle, or abscissa on the Cartesian arc
    Complex z;
    Regime regime;
    double residual; ///< |g - e^t|
    double phi;      ///< continuous arg h_t(z)
    double r_prime;  ///< dr/dtheta on polar arcs, NaN on the Cartesian arc
    /// Quadrature weight times dz/ds for the sample's arc variable s, summed
    /// over the arcs that share the sample. Sum of f(z_j) * contour_weight_j
    /// approximates the integral of f dz along the stored half curve.
    Complex contour_weight;
};

/// The sampled Jordan curve gamma_t. Only the closed upper half is stored,
/// ordered counter-clockwise from (x_t, 0) to the crossing of the negative
/// real axis; the lower half is its conjugate.
struct SpectralCurve {
    Time t;
    double x_t;
    double theta_t;
    double beta;
    std::vector<CurveSample> samples;
    std::size_t split_index; ///< sample at sqrt(t) e^{i theta_t}
    std::size_t quarter_index; ///< sample at theta = pi/2

    Regime inner_regime() const { return samples.front().regime; }
};

/// Root of k_t(x) = 1 in (0, 1).
double solve_xt(Time t);

/// Radius of the outer arc at angle theta in [theta_t, pi].
double radius_outer(double theta, Time t);

/// Point on the inner arc: s is the polar angle in [0, theta_t] when
/// t <= 2 + sqrt(3), the abscissa in [x_t, t/2] otherwise.
Complex inner_branch_point(double s, Time t);

/// Inner arc in polar form, theta in [0, theta_t]. Valid for t <= 2 + sqrt(3)
/// and near theta_t slightly above it.
Complex inner_point_polar(double theta, Time t);

/// Inner arc as the graph y(x), x in [x_t, t/2].
Complex inner_point_cartesian(double x, Time t);

SpectralCurve build_curve(Time t, std::size_t n_samples);

struct CriticalPoint {
    Complex z_plus;   ///< sqrt(t) e^{i theta_t}
    double arg_plus;  ///< -beta(t)
    bool minimum_at_split; ///< stored phi is minimal at split_index
};

CriticalPoint critical_points(SpectralCurve const& curve);

/// Inclusive index range [first, last] into curve.samples.
struct SampleRange {
    std::size_t first;
    std::size_t last;
};

struct BranchSplit {
    SampleRange gamma1; ///< inner branch, |z - 1| <= 1
    SampleRange gamma2; ///< outer branch, |z - 1| >= 1
};

/// Throws NumericalError if phi is not strictly monotone on either branch or a
/// sample sits on the wrong side of |z - 1| = 1.
BranchSplit split_curve(SpectralCurve const& curve);

/// z -> conj(z) / (conj(z) - 1); exchanges the two preimages of a point of
/// the unit circle under h_t.
Complex involution(Complex z);

/// Largest ||h_t(z)| - 1| over the stored samples and their conjugates.
double max_modulus_error(SpectralCurve const& curve);

namespace detail {

// Unchecked arc evaluators shared with the spectrum module. `param` is the
// sample parameter of the given regime.
Complex arc_point(Regime regime, double param, Time t);

} // namespace detail

} // namespace fubm
