#include "fubm/curve.hpp"

#include "fubm/errors.hpp"
#include "fubm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fubm {

namespace {

constexpr double kRootTol = 1e-16;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Fraction of [x_t, t/2] covered by the first Cartesian panel.
constexpr double kCartesianSplit = 0.25;

double polar_root_function(double r, double theta, Time t)
{
    return deflated_polar(r, theta, t).value;
}

double polar_inner_radius(double theta, Time t)
{
    double const hi = 2.0 * std::cos(theta);
    auto q = [&](double r) { return polar_root_function(r, theta, t); };
    if (q(hi) <= 0.0) {
        // At theta_t both roots coincide on the circle r = 2 cos theta.
        return hi;
    }
    Bracket const b = contract_lower(q, 0.5 * hi, hi);
    return find_root(q, b, kRootTol);
}

double polar_outer_radius(double theta, Time t)
{
    double const c = std::cos(theta);
    double const lo = c > 0.0 ? 2.0 * c : std::sqrt(t.value());
    auto q = [&](double r) { return polar_root_function(r, theta, t); };
    if (q(lo) >= 0.0) {
        return lo;
    }
    Bracket const b = expand_upper(q, lo, 2.0 * std::max(lo, 1.0));
    return find_root(q, b, kRootTol);
}

double cartesian_height(double x, Time t)
{
    double const hi = std::sqrt(x * (2.0 - x));
    auto q = [&](double y) { return deflated_cartesian(x, y, t).value; };
    double const f_lo = q(0.0);
    if (f_lo <= 0.0) {
        return 0.0;
    }
    double const f_hi = q(hi);
    if (f_hi >= 0.0) {
        return hi;
    }
    return find_root(q, Bracket{0.0, hi, f_lo, f_hi}, kRootTol);
}

// Abscissa of the Cartesian arc at height y, for points between (x_t, 0)
// and the panel split x_hi.
double cartesian_abscissa(double y, double x_t, double x_hi, Time t)
{
    auto q = [&](double x) { return deflated_cartesian(x, y, t).value; };
    double const f_lo = q(x_t);
    if (f_lo >= 0.0) {
        return x_t;
    }
    double const f_hi = q(x_hi);
    if (f_hi <= 0.0) {
        return x_hi;
    }
    return find_root(q, Bracket{x_t, x_hi, f_lo, f_hi}, kRootTol);
}

double polar_r_prime(double r, double theta, Time t)
{
    DeflatedConstraint const q = deflated_polar(r, theta, t);
    return -q.d_second / q.d_first;
}

Complex polar_tangent(double r, double theta, Time t)
{
    double const rp = polar_r_prime(r, theta, t);
    return Complex(rp, r) * std::polar(1.0, theta);
}

// Exact e^{i theta} at the axis crossings keeps those samples real.
Complex polar_point(double r, double theta)
{
    if (theta == 0.0) {
        return {r, 0.0};
    }
    if (theta == std::numbers::pi) {
        return {-r, 0.0};
    }
    return std::polar(r, theta);
}

double residual_of(Complex z, Time t)
{
    return std::abs(g_cartesian(z.real(), z.imag(), t).value - std::exp(t.value()));
}

// Chebyshev-Lobatto position in [0, 1], clustered at both ends.
double lobatto(std::size_t j, std::size_t m)
{
    if (j == 0) {
        return 0.0;
    }
    if (j == m) {
        return 1.0;
    }
    return 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(m)));
}

[[noreturn]] void construction_failure(Regime regime, double param, Time t, char const* what)
{
    throw NumericalError(std::string("curve construction failed in regime ") + to_string(regime) +
                         " at parameter " + std::to_string(param) + " (t = " +
                         std::to_string(t.value()) + "): " + what);
}

} // namespace

char const* to_string(Regime regime)
{
    switch (regime) {
    case Regime::polar_outer: return "polar-outer";
    case Regime::polar_inner: return "polar-inner";
    case Regime::cartesian_inner: return "cartesian-inner";
    }
    return "unknown";
}

double solve_xt(Time t)
{
    // log k_t(x) = 2 log(1 - x) + t (2/x - 1): +inf at 0+, -inf at 1-.
    double const tv = t.value();
    auto f = [tv](double x) { return 2.0 * std::log1p(-x) + tv * (2.0 / x - 1.0); };
    double const hi = 1.0 - std::numeric_limits<double>::epsilon();
    Bracket const b = contract_lower(f, 3.0 - std::sqrt(5.0), hi);
    return find_root(f, b, kRootTol);
}

double radius_outer(double theta, Time t)
{
    double const theta_t = support_params(t.value()).theta_t;
    if (theta < theta_t || theta > std::numbers::pi) {
        throw DomainError("radius_outer needs theta in [theta_t, pi] (theta_t = " +
                          std::to_string(theta_t) + ", got " + std::to_string(theta) + ")");
    }
    if (theta == theta_t) {
        return std::sqrt(t.value());
    }
    return polar_outer_radius(theta, t);
}

Complex inner_point_polar(double theta, Time t)
{
    double const theta_t = support_params(t.value()).theta_t;
    if (theta < 0.0 || theta > theta_t) {
        throw DomainError("polar inner arc needs theta in [0, theta_t]");
    }
    if (theta == theta_t) {
        return std::polar(std::sqrt(t.value()), theta_t);
    }
    return polar_point(polar_inner_radius(theta, t), theta);
}

Complex inner_point_cartesian(double x, Time t)
{
    double const x_t = solve_xt(t);
    double const x_end = t.value() / 2.0;
    if (x < x_t || x > x_end) {
        throw DomainError("Cartesian inner arc needs x in [x_t, t/2] = [" + std::to_string(x_t) +
                          ", " + std::to_string(x_end) + "]");
    }
    if (x == x_t) {
        return {x_t, 0.0};
    }
    return {x, cartesian_height(x, t)};
}

Complex inner_branch_point(double s, Time t)
{
    if (t.value() <= kCartesianThreshold) {
        return inner_point_polar(s, t);
    }
    return inner_point_cartesian(s, t);
}

Complex involution(Complex z)
{
    if (z == Complex(1.0, 0.0)) {
        throw DomainError("involution undefined at z = 1");
    }
    Complex const zb = std::conj(z);
    return zb / (zb - 1.0);
}

namespace detail {

Complex arc_point(Regime regime, double param, Time t)
{
    switch (regime) {
    case Regime::polar_outer: return polar_point(polar_outer_radius(param, t), param);
    case Regime::polar_inner: return polar_point(polar_inner_radius(param, t), param);
    case Regime::cartesian_inner: return {param, cartesian_height(param, t)};
    }
    throw DomainError("unknown regime");
}

} // namespace detail

SpectralCurve build_curve(Time t, std::size_t n_samples)
{
    if (n_samples < 64) {
        throw DomainError("build_curve needs at least 64 samples");
    }
    double const tv = t.value();
    auto const [theta_t, beta] = support_params(tv);
    double const x_t = solve_xt(t);
    double const half_pi = std::numbers::pi / 2.0;
    bool const cartesian = tv > kCartesianThreshold;
    Regime const inner_regime = cartesian ? Regime::cartesian_inner : Regime::polar_inner;

    // Interval budget: half on the inner arc, the rest on the two outer
    // panels [theta_t, pi/2] and [pi/2, pi] in proportion to their phi travel.
    std::size_t const intervals = n_samples - 1;
    std::size_t const m_in = intervals / 2;
    std::size_t const m_out = intervals - m_in;
    double const r_quarter = std::sqrt(std::expm1(tv));
    double const phi_quarter = arg_h_continuous(Complex(0.0, r_quarter), t);
    constexpr std::size_t kMinPanel = 8;
    auto const m_right = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(static_cast<double>(m_out) * (phi_quarter + beta) / beta)),
        kMinPanel, m_out - kMinPanel);
    std::size_t const m_left = m_out - m_right;

    SpectralCurve curve{t, x_t, theta_t, beta, {}, m_in, m_in + m_right};
    curve.samples.reserve(n_samples);
    Complex const z_crit = std::polar(std::sqrt(tv), theta_t);

    // Inner arc.
    if (!cartesian) {
        std::vector<double> const w = clenshaw_curtis_weights(m_in);
        for (std::size_t j = 0; j <= m_in; ++j) {
            double const theta = theta_t * lobatto(j, m_in);
            CurveSample s{};
            s.regime = inner_regime;
            s.param = theta;
            try {
                double const r = j == 0 ? x_t
                               : j == m_in ? std::sqrt(tv)
                                           : polar_inner_radius(theta, t);
                s.z = j == m_in ? z_crit : polar_point(r, theta);
                s.r_prime = polar_r_prime(r, theta, t);
                s.contour_weight = 0.5 * theta_t * w[j] * polar_tangent(r, theta, t);
            } catch (NumericalError const& e) {
                construction_failure(inner_regime, s.param, t, e.what());
            }
            curve.samples.push_back(s);
        }
    } else {
        // Two panels. Next to (x_t, 0) the tangent is vertical and y(x) is
        // ill-conditioned, so the first panel runs in y and solves for x; the
        // second runs in x up to the critical point.
        double const x_split = x_t + kCartesianSplit * (tv / 2.0 - x_t);
        double y_split = 0.0;
        try {
            y_split = cartesian_height(x_split, t);
        } catch (NumericalError const& e) {
            construction_failure(inner_regime, x_split, t, e.what());
        }
        std::size_t const m_low = m_in / 2;
        std::size_t const m_high = m_in - m_low;

        std::vector<double> const w_low = clenshaw_curtis_weights(m_low);
        for (std::size_t j = 0; j <= m_low; ++j) {
            double const y = y_split * lobatto(j, m_low);
            CurveSample s{};
            s.regime = inner_regime;
            s.r_prime = kNaN;
            try {
                double const x = j == 0 ? x_t : j == m_low ? x_split : cartesian_abscissa(y, x_t, x_split, t);
                s.param = x;
                s.z = Complex(x, y);
                DeflatedConstraint const q = deflated_cartesian(x, y, t);
                Complex const tangent(-2.0 * y * q.d_second / q.d_first, 1.0);
                s.contour_weight = 0.5 * y_split * w_low[j] * tangent;
            } catch (NumericalError const& e) {
                construction_failure(inner_regime, y, t, e.what());
            }
            curve.samples.push_back(s);
        }

        std::vector<double> const w_high = clenshaw_curtis_weights(m_high);
        double const span = tv / 2.0 - x_split;
        for (std::size_t j = 0; j <= m_high; ++j) {
            double const x = j == 0 ? x_split : j == m_high ? tv / 2.0 : x_split + span * lobatto(j, m_high);
            Complex z;
            Complex weight;
            try {
                z = j == 0 ? curve.samples.back().z : j == m_high ? z_crit : Complex(x, cartesian_height(x, t));
                DeflatedConstraint const q = deflated_cartesian(z.real(), z.imag(), t);
                Complex const tangent(1.0, -q.d_first / (2.0 * z.imag() * q.d_second));
                weight = 0.5 * span * w_high[j] * tangent;
            } catch (NumericalError const& e) {
                construction_failure(inner_regime, x, t, e.what());
            }
            if (j == 0) {
                curve.samples.back().contour_weight += weight;
                continue;
            }
            CurveSample s{};
            s.regime = inner_regime;
            s.param = x;
            s.z = z;
            s.r_prime = kNaN;
            s.contour_weight = weight;
            curve.samples.push_back(s);
        }
    }

    // Outer arc: two panels sharing the sample at pi/2.
    auto add_panel = [&](double a, double b, std::size_t m) {
        std::vector<double> const w = clenshaw_curtis_weights(m);
        double const half_len = 0.5 * (b - a);
        for (std::size_t j = 0; j <= m; ++j) {
            double const theta = j == 0 ? a : j == m ? b : a + (b - a) * lobatto(j, m);
            double r = 0.0;
            try {
                r = theta == theta_t ? std::sqrt(tv) : theta == half_pi ? r_quarter
                                                                        : polar_outer_radius(theta, t);
            } catch (NumericalError const& e) {
                construction_failure(Regime::polar_outer, theta, t, e.what());
            }
            Complex const weight = half_len * w[j] * polar_tangent(r, theta, t);
            if (j == 0) {
                // Shared with the previous panel.
                curve.samples.back().contour_weight += weight;
                continue;
            }
            CurveSample s{};
            s.regime = Regime::polar_outer;
            s.param = theta;
            s.z = theta == half_pi ? Complex(0.0, r) : polar_point(r, theta);
            s.r_prime = polar_r_prime(r, theta, t);
            s.contour_weight = weight;
            curve.samples.push_back(s);
        }
    };
    add_panel(theta_t, half_pi, m_right);
    add_panel(half_pi, std::numbers::pi, m_left);

    double previous = 0.0;
    for (std::size_t j = 0; j < curve.samples.size(); ++j) {
        CurveSample& s = curve.samples[j];
        s.residual = residual_of(s.z, t);
        double phi = arg_h_continuous(s.z, t);
        if (j > 0) {
            phi -= 2.0 * std::numbers::pi * std::round((phi - previous) / (2.0 * std::numbers::pi));
        }
        s.phi = phi;
        previous = phi;
    }
    return curve;
}

CriticalPoint critical_points(SpectralCurve const& curve)
{
    double const tv = curve.t.value();
    CriticalPoint out{std::polar(std::sqrt(tv), curve.theta_t), -curve.beta, false};
    auto const it = std::min_element(curve.samples.begin(), curve.samples.end(),
                                      [](auto const& a, auto const& b) { return a.phi < b.phi; });
    out.minimum_at_split =
        static_cast<std::size_t>(std::distance(curve.samples.begin(), it)) == curve.split_index;
    return out;
}

BranchSplit split_curve(SpectralCurve const& curve)
{
    auto const& s = curve.samples;
    std::size_t const k = curve.split_index;
    // Points within this distance of the unit circle around 1 are accepted on
    // either side.
    constexpr double kCircleSlack = 1e-12;
    for (std::size_t j = 0; j < k; ++j) {
        if (!(s[j + 1].phi < s[j].phi)) {
            throw NumericalError("phi not strictly decreasing on the inner branch at sample " +
                                 std::to_string(j) + "; curve under-resolved");
        }
        if (std::abs(s[j].z - 1.0) > 1.0 + kCircleSlack) {
            throw NumericalError("inner-branch sample " + std::to_string(j) + " outside |z - 1| <= 1");
        }
    }
    for (std::size_t j = k; j + 1 < s.size(); ++j) {
        if (!(s[j + 1].phi > s[j].phi)) {
            throw NumericalError("phi not strictly increasing on the outer branch at sample " +
                                 std::to_string(j) + "; curve under-resolved");
        }
        if (std::abs(s[j + 1].z - 1.0) < 1.0 - kCircleSlack) {
            throw NumericalError("outer-branch sample " + std::to_string(j + 1) +
                                 " inside |z - 1| < 1");
        }
    }
    return {{0, k}, {k, s.size() - 1}};
}

double max_modulus_error(SpectralCurve const& curve)
{
    double worst = 0.0;
    for (auto const& s : curve.samples) {
        worst = std::max(worst, std::abs(std::abs(h_eval(s.z, curve.t)) - 1.0));
        worst = std::max(worst, std::abs(std::abs(h_eval(std::conj(s.z), curve.t)) - 1.0));
    }
    return worst;
}

} // namespace fubm
