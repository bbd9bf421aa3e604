#include "fubm/spectrum.hpp"

#include "fubm/errors.hpp"
#include "fubm/moments.hpp"
#include "fubm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fubm {

namespace {

// log h_t(z) with the principal log(1 - z); its imaginary part is
// arg_h_continuous(z).
Complex log_h(Complex z, Time t)
{
    double const tv = t.value();
    return std::log(1.0 - z) + tv / z - tv / 2.0;
}

// One Newton step on log h_t(z) = i phi, kept only if it lowers the residual
// without crossing the circle |z - 1| = 1 that separates the branches.
Complex polish(Complex z, double phi, Time t)
{
    Complex const target(0.0, phi);
    Complex const slope = h_log_derivative(z, t);
    if (slope == Complex(0.0, 0.0)) {
        return z;
    }
    Complex const next = z - (log_h(z, t) - target) / slope;
    bool const same_side = (std::abs(next - 1.0) >= 1.0) == (std::abs(z - 1.0) >= 1.0);
    if (same_side && next.imag() >= 0.0 &&
        std::abs(log_h(next, t) - target) < std::abs(log_h(z, t) - target)) {
        return next;
    }
    return z;
}

} // namespace

Complex invert_h(double phi, Branch branch, SpectralCurve const& curve)
{
    double const beta = curve.beta;
    double const slack = 4.0 * std::numeric_limits<double>::epsilon() * beta;
    if (!(std::abs(phi) <= beta + slack)) {
        throw DomainError("invert_h needs |phi| <= beta(t) = " + std::to_string(beta));
    }
    Time const t = curve.t;
    bool const lower = phi > 0.0;
    double const target = std::abs(phi) >= beta - slack ? -beta : -std::abs(phi);
    auto finish = [lower](Complex z) { return lower ? std::conj(z) : z; };

    if (target == -beta) {
        // Both branches end at the critical point 1 + e^{2 i theta_t}.
        return finish(std::polar(std::sqrt(t.value()), curve.theta_t));
    }

    auto const& s = curve.samples;
    std::size_t const k = curve.split_index;
    // Locate the bracketing pair by bisection on the monotone stored phi.
    std::size_t lo = 0;
    std::size_t hi = 0;
    if (branch == Branch::inner) {
        // phi decreases on [0, k].
        auto const it = std::lower_bound(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k) + 1,
                                         target, [](CurveSample const& a, double v) { return a.phi > v; });
        hi = static_cast<std::size_t>(std::distance(s.begin(), it));
        hi = std::clamp<std::size_t>(hi, 1, k);
        lo = hi - 1;
    } else {
        // phi increases on [k, end].
        auto const it = std::lower_bound(s.begin() + static_cast<std::ptrdiff_t>(k), s.end(), target,
                                         [](CurveSample const& a, double v) { return a.phi < v; });
        hi = static_cast<std::size_t>(std::distance(s.begin(), it));
        hi = std::clamp<std::size_t>(hi, k + 1, s.size() - 1);
        lo = hi - 1;
    }
    if (s[lo].phi == target) {
        return finish(s[lo].z);
    }
    if (s[hi].phi == target) {
        return finish(s[hi].z);
    }

    Regime const regime = branch == Branch::inner ? curve.inner_regime() : Regime::polar_outer;
    // The critical sample carries the inner arc's parameter; on the outer
    // arc it sits at theta_t.
    double const p_lo = (branch == Branch::outer && lo == k) ? curve.theta_t : s[lo].param;
    double const p_hi = s[hi].param;
    auto residual = [&](double p) {
        return arg_h_continuous(detail::arc_point(regime, p, t), t) - target;
    };
    double const f_lo = s[lo].phi - target;
    double const f_hi = s[hi].phi - target;
    double p_star = 0.0;
    try {
        p_star = find_root(residual, Bracket{p_lo, p_hi, f_lo, f_hi}, 1e-16);
    } catch (NumericalError const& e) {
        throw NumericalError(std::string("invert_h failed in regime ") + to_string(regime) +
                             " for phi = " + std::to_string(phi) + ": " + e.what());
    }
    Complex const z = detail::arc_point(regime, p_star, t);
    return finish(polish(z, target, t));
}

double density_at(double theta, SpectralCurve const& curve)
{
    if (!(std::abs(theta) < curve.beta)) {
        return 0.0;
    }
    Complex const z = invert_h(theta, Branch::outer, curve);
    // |z - 1|^2 - 1 formed directly avoids cancellation next to the circle.
    double const s = std::norm(z) - 2.0 * z.real();
    return 0.5 * std::log1p(s) / (std::numbers::pi * curve.t.value());
}

DensityTable density_table(SpectralCurve const& curve, std::size_t n_grid)
{
    if (n_grid < 32 || n_grid % 2 == 0) {
        throw DomainError("density grid size must be odd and >= 32");
    }
    double const beta = curve.beta;
    double const half_pi = std::numbers::pi / 2.0;
    double const step = std::numbers::pi / static_cast<double>(n_grid - 1);
    std::size_t const mid = n_grid / 2;

    DensityTable table{curve.t, beta, curve.x_t, {}, {}, {}, 0.0};
    table.thetas.resize(n_grid);
    table.rho.resize(n_grid);
    table.weights.resize(n_grid);
    for (std::size_t j = 0; j < n_grid; ++j) {
        double const psi = -half_pi + step * static_cast<double>(j);
        double theta = beta * std::sin(psi);
        double weight = step * beta * std::cos(psi);
        if (j == 0 || j + 1 == n_grid) {
            theta = j == 0 ? -beta : beta;
            weight = 0.0; // cos(+-pi/2) = 0
        } else if (j == mid) {
            theta = 0.0;
        }
        table.thetas[j] = theta;
        table.weights[j] = weight;
        table.rho[j] = density_at(theta, curve);
    }

    auto const mass = integrate_adaptive(
        [&](double psi) { return density_at(beta * std::sin(psi), curve) * beta * std::cos(psi); },
        -half_pi, half_pi, 1e-13);
    table.normalization = mass.value.real();
    return table;
}

double herglotz_re(double r, double theta, std::span<double const> moments)
{
    if (!(r >= 0.0 && r < 1.0)) {
        throw DomainError("herglotz_re needs 0 <= r < 1");
    }
    double sum = 0.0;
    double rn = 1.0;
    for (std::size_t n = 1; n <= moments.size(); ++n) {
        rn *= r;
        sum += moments[n - 1] * rn * std::cos(static_cast<double>(n) * theta);
    }
    return 1.0 + 2.0 * sum;
}

double herglotz_re(double r, double theta, Time t, std::size_t n_terms)
{
    if (!(r >= 0.0 && r < 1.0)) {
        throw DomainError("herglotz_re needs 0 <= r < 1");
    }
    if (n_terms == 0 || r == 0.0) {
        return 1.0;
    }
    std::vector<double> const moments = moment_sum_series(static_cast<int>(n_terms), t);
    return herglotz_re(r, theta, moments);
}

} // namespace fubm
