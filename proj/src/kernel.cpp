#include "fubm/kernel.hpp"

#include "fubm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fubm {

namespace {

// Below this radius exp(2 t cos(theta) / r) is formed in log space.
constexpr double kLogSpaceRadius = 1e-3;

// coef * exp(expo) without forming exp(expo) on its own.
double scaled_exp(double coef, double expo)
{
    if (coef == 0.0) {
        return 0.0;
    }
    return std::copysign(std::exp(std::log(std::abs(coef)) + expo), coef);
}

} // namespace

Time::Time(double t) : t_(t)
{
    if (!(t > 0.0 && t < 4.0)) {
        throw DomainError("time must satisfy 0 < t < 4 (got " + std::to_string(t) +
                          "); the curve construction fails at t = 4");
    }
}

Complex h_eval(Complex z, Time t)
{
    if (z == Complex(0.0, 0.0)) {
        throw DomainError("h_t has an essential singularity at z = 0");
    }
    double const tv = t.value();
    return (1.0 - z) * std::exp(tv * (1.0 / z - 0.5));
}

Complex h_log_derivative(Complex z, Time t)
{
    if (z == Complex(0.0, 0.0) || z == Complex(1.0, 0.0)) {
        throw DomainError("h_t'/h_t is singular at z = 0 and z = 1");
    }
    return -1.0 / (1.0 - z) - t.value() / (z * z);
}

double arg_h_continuous(Complex z, Time t)
{
    if (z == Complex(0.0, 0.0)) {
        throw DomainError("arg h_t undefined at z = 0");
    }
    if (z.imag() == 0.0 && z.real() >= 1.0) {
        throw DomainError("arg h_t is cut along [1, inf)");
    }
    return std::arg(1.0 - z) + t.value() * (1.0 / z).imag();
}

PolarConstraint g_polar(double r, double theta, Time t)
{
    if (!(r > 0.0)) {
        throw DomainError("g_polar requires r > 0");
    }
    double const tv = t.value();
    double const c = std::cos(theta);
    double const s = std::sin(theta);
    double const a = 1.0 + r * r - 2.0 * r * c; // |z - 1|^2
    double const expo = 2.0 * tv * c / r;

    double const dr_coef = 2.0 * (r - c - a * tv * c / (r * r));
    double const dth_coef = (2.0 * s / r) * (r * r - tv * a);

    if (r < kLogSpaceRadius) {
        return {scaled_exp(a, expo), scaled_exp(dr_coef, expo), scaled_exp(dth_coef, expo)};
    }
    double const e = std::exp(expo);
    return {a * e, dr_coef * e, dth_coef * e};
}

CartesianConstraint g_cartesian(double x, double y, Time t)
{
    double const rho2 = x * x + y * y;
    if (rho2 == 0.0) {
        throw DomainError("g_cartesian undefined at the origin");
    }
    double const tv = t.value();
    double const a = 1.0 + rho2 - 2.0 * x;
    double const expo = 2.0 * tv * x / rho2;
    double const value = rho2 < kLogSpaceRadius * kLogSpaceRadius ? scaled_exp(a, expo)
                                                                  : a * std::exp(expo);

    CartesianConstraint out{value, std::nullopt};
    double const quarter_disc = tv * x * (2.0 + (tv - 4.0) * x);
    if (quarter_disc >= 0.0) {
        double const mid = x * (tv - x);
        double const half_width = std::sqrt(quarter_disc);
        out.w_roots = std::make_pair(mid - half_width, mid + half_width);
    }
    return out;
}

KValue k_cartesian(double x, Time t)
{
    if (!(x > 0.0)) {
        throw DomainError("k_t requires x > 0");
    }
    double const tv = t.value();
    double const e = std::exp(tv * (2.0 / x - 1.0));
    double const quad = x * x - tv * x + tv;
    return {(x - 1.0) * (x - 1.0) * e, 2.0 * (x - 1.0) * quad / (x * x) * e};
}

SupportParams support_params(double t)
{
    if (!(t > 0.0 && t <= 4.0)) {
        throw DomainError("support parameters need 0 < t <= 4 (got " + std::to_string(t) + ")");
    }
    double const theta_t = std::acos(std::sqrt(t) / 2.0);
    double const beta = 0.5 * std::sqrt(t * (4.0 - t)) + std::acos(1.0 - t / 2.0);
    return {theta_t, beta};
}

// Series are used for |s| < kSeriesRadius; 0.05^17 < 1e-22.
namespace {
constexpr double kSeriesRadius = 0.05;
constexpr int kSeriesTerms = 17;
} // namespace

namespace {

// L(s) = log1p(s)/s and L'(s) given an accurately formed 1 + s = |z - 1|^2,
// which stays meaningful where s itself has rounded to -1. A zero 1 + s is
// clamped to the smallest subnormal so L stays finite and large.
struct RatioPair {
    double value;
    double derivative;
};

RatioPair ratio_pair(double s, double one_plus_s)
{
    if (std::abs(s) < kSeriesRadius) {
        // sum_k (-s)^k / (k + 1) and its derivative, Horner from the tail
        double value = 0.0;
        for (int k = kSeriesTerms; k >= 0; --k) {
            value = 1.0 / (k + 1) - s * value;
        }
        double derivative = 0.0;
        for (int k = kSeriesTerms + 1; k >= 1; --k) {
            double const coef = (k % 2 == 0 ? 1.0 : -1.0) * k / (k + 1.0);
            derivative = coef + s * derivative;
        }
        return {value, derivative};
    }
    double const onep = std::max(one_plus_s, std::numeric_limits<double>::denorm_min());
    double const log_onep = std::log(onep);
    return {log_onep / s, (s / onep - log_onep) / (s * s)};
}

} // namespace

double log1p_ratio(double s)
{
    if (!(s > -1.0)) {
        throw DomainError("log1p_ratio requires s > -1");
    }
    if (std::abs(s) >= kSeriesRadius) {
        return std::log1p(s) / s;
    }
    return ratio_pair(s, 1.0 + s).value;
}

double log1p_ratio_derivative(double s)
{
    if (!(s > -1.0)) {
        throw DomainError("log1p_ratio_derivative requires s > -1");
    }
    if (std::abs(s) >= kSeriesRadius) {
        return (s / (1.0 + s) - std::log1p(s)) / (s * s);
    }
    return ratio_pair(s, 1.0 + s).derivative;
}

DeflatedConstraint deflated_polar(double r, double theta, Time t)
{
    if (!(r > 0.0)) {
        throw DomainError("deflated_polar requires r > 0");
    }
    double const tv = t.value();
    double const c = std::cos(theta);
    double const sn = std::sin(theta);
    double const s = r * (r - 2.0 * c);
    double const dx = r * c - 1.0;
    double const dy = r * sn;
    auto const [lr, dl] = ratio_pair(s, dx * dx + dy * dy);
    return {r * lr - tv / r,
            lr + r * dl * (2.0 * r - 2.0 * c) + tv / (r * r),
            r * dl * 2.0 * r * sn};
}

DeflatedConstraint deflated_cartesian(double x, double y, Time t)
{
    double const rho2 = x * x + y * y;
    if (rho2 == 0.0) {
        throw DomainError("deflated_cartesian undefined at the origin");
    }
    double const tv = t.value();
    double const s = rho2 - 2.0 * x;
    auto const [lr, dl] = ratio_pair(s, (x - 1.0) * (x - 1.0) + y * y);
    return {lr - tv / rho2, dl * (2.0 * x - 2.0) + 2.0 * tv * x / (rho2 * rho2),
            dl + tv / (rho2 * rho2)};
}

} // namespace fubm
