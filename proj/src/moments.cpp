#include "fubm/moments.hpp"

#include "fubm/errors.hpp"
#include "mpfr_wrap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fubm {

using detail::BigFloat;
using detail::BigInt;

namespace {

double log2_binomial(int n, int k)
{
    return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) /
           std::numbers::ln2;
}

// Bits needed so that the sum of terms up to 2^max_log2 keeps 64 good bits.
mpfr_prec_t sum_precision(int n, double t)
{
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        double const lg = k * std::log2(t) - std::lgamma(k + 1.0) / std::numbers::ln2 +
                          (k - 1) * std::log2(static_cast<double>(n)) + log2_binomial(n, k + 1);
        worst = std::max(worst, lg);
    }
    double const bits = 64.0 + worst + std::log2(static_cast<double>(n)) + 16.0;
    return static_cast<mpfr_prec_t>(std::max(128.0, std::ceil(bits)));
}

// Complex arithmetic on pairs of MPFR values, enough for the contour sweep.
struct BigComplex {
    BigFloat re;
    BigFloat im;
    explicit BigComplex(mpfr_prec_t bits) : re(bits), im(bits) {}
};

void multiply(BigComplex& acc, BigComplex const& by, BigFloat& s1, BigFloat& s2)
{
    mpfr_mul(s1.get(), acc.re.get(), by.re.get(), MPFR_RNDN);
    mpfr_mul(s2.get(), acc.im.get(), by.im.get(), MPFR_RNDN);
    mpfr_sub(s1.get(), s1.get(), s2.get(), MPFR_RNDN);
    mpfr_mul(s2.get(), acc.re.get(), by.im.get(), MPFR_RNDN);
    mpfr_fma(acc.im.get(), acc.im.get(), by.re.get(), s2.get(), MPFR_RNDN);
    mpfr_set(acc.re.get(), s1.get(), MPFR_RNDN);
}

void check_radius(double radius)
{
    if (!(radius > 0.0 && radius < 1.0)) {
        throw DomainError("contour radius must lie in (0, 1)");
    }
}

} // namespace

double moment_sum(int n, Time t, int n_max)
{
    if (n < 1) {
        throw DomainError("moment_sum needs n >= 1, got " + std::to_string(n));
    }
    if (n > n_max) {
        throw DomainError("moment_sum: n = " + std::to_string(n) + " exceeds N_max = " +
                          std::to_string(n_max) +
                          " of the extended-precision sum; use moment_contour beyond it");
    }
    double const tv = t.value();
    mpfr_prec_t const bits = sum_precision(n, tv);

    // I_k = n^{k-1} C(n, k+1), exact; I_0 = 1.
    BigInt weight(1);
    BigFloat coeff(bits, 1.0); // (-t)^k / k!
    BigFloat sum(bits, 0.0);
    BigFloat term(bits);
    auto const un = static_cast<unsigned long>(n);
    for (int k = 0; k < n; ++k) {
        mpfr_mul_z(term.get(), coeff.get(), weight.get(), MPFR_RNDN);
        mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
        if (k + 1 < n) {
            mpz_mul_ui(weight.get(), weight.get(), un * static_cast<unsigned long>(n - k - 1));
            mpz_divexact_ui(weight.get(), weight.get(), static_cast<unsigned long>(k + 2));
            mpfr_mul_d(coeff.get(), coeff.get(), -tv, MPFR_RNDN);
            mpfr_div_ui(coeff.get(), coeff.get(), static_cast<unsigned long>(k + 1), MPFR_RNDN);
        }
    }
    BigFloat damping(bits, tv);
    mpfr_mul_si(damping.get(), damping.get(), -n, MPFR_RNDN);
    mpfr_div_ui(damping.get(), damping.get(), 2, MPFR_RNDN);
    mpfr_exp(damping.get(), damping.get(), MPFR_RNDN);
    mpfr_mul(sum.get(), sum.get(), damping.get(), MPFR_RNDN);
    return sum.to_double();
}

std::vector<double> moment_sum_series(int n_last, Time t)
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(n_last, 0)));
    for (int n = 1; n <= n_last; ++n) {
        out.push_back(moment_sum(n, t, n_last));
    }
    return out;
}

std::size_t default_contour_nodes(int n, Time t, double radius)
{
    check_radius(radius);
    double const aliasing = std::ceil(2.0 * std::numbers::e * n * t.value() / radius);
    auto nodes = static_cast<std::size_t>(std::max({256.0, 16.0 * n, aliasing}));
    return nodes + nodes % 2;
}

std::vector<Complex> moment_contour_series(int n_last, Time t, double radius, std::size_t nodes)
{
    check_radius(radius);
    if (n_last < 1) {
        throw DomainError("moment_contour needs n >= 1");
    }
    if (nodes == 0) {
        nodes = default_contour_nodes(n_last, t, radius);
    } else if (nodes < 64) {
        throw DomainError("moment_contour needs at least 64 nodes");
    }
    double const tv = t.value();

    // |h_t| on the circle peaks at z = radius; the integrand z h^n / (1 - z)
    // is bounded by that peak to the power n_last (or 1).
    double const log2_peak =
        (std::log1p(-radius) + tv * (1.0 / radius - 0.5)) / std::numbers::ln2;
    double const log2_bound = std::max(0.0, n_last * log2_peak) +
                              std::log2(radius / (1.0 - radius));
    auto const bits = static_cast<mpfr_prec_t>(
        128.0 + std::max(0.0, std::ceil(log2_bound)) +
        std::ceil(std::log2(static_cast<double>(nodes))));

    std::vector<BigComplex> sums;
    sums.reserve(static_cast<std::size_t>(n_last));
    for (int n = 0; n < n_last; ++n) {
        sums.emplace_back(bits);
        mpfr_set_zero(sums.back().re.get(), 1);
        mpfr_set_zero(sums.back().im.get(), 1);
    }

    BigFloat two_pi(bits);
    mpfr_const_pi(two_pi.get(), MPFR_RNDN);
    mpfr_mul_ui(two_pi.get(), two_pi.get(), 2, MPFR_RNDN);
    BigFloat r(bits, radius);
    BigFloat tt(bits, tv);
    BigFloat angle(bits), c(bits), s(bits), a(bits), b(bits), e(bits), s1(bits), s2(bits);
    BigComplex h(bits), f(bits), seed(bits);

    for (std::size_t j = 0; j < nodes; ++j) {
        mpfr_mul_ui(angle.get(), two_pi.get(), static_cast<unsigned long>(j), MPFR_RNDN);
        mpfr_div_ui(angle.get(), angle.get(), static_cast<unsigned long>(nodes), MPFR_RNDN);
        mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);

        // t/z - t/2 = (t cos / r - t/2) - i (t sin / r)
        mpfr_mul(a.get(), tt.get(), c.get(), MPFR_RNDN);
        mpfr_div(a.get(), a.get(), r.get(), MPFR_RNDN);
        mpfr_div_ui(s1.get(), tt.get(), 2, MPFR_RNDN);
        mpfr_sub(a.get(), a.get(), s1.get(), MPFR_RNDN);
        mpfr_mul(b.get(), tt.get(), s.get(), MPFR_RNDN);
        mpfr_div(b.get(), b.get(), r.get(), MPFR_RNDN);
        mpfr_neg(b.get(), b.get(), MPFR_RNDN);
        mpfr_exp(e.get(), a.get(), MPFR_RNDN);
        mpfr_sin_cos(s2.get(), s1.get(), b.get(), MPFR_RNDN);
        mpfr_mul(s1.get(), s1.get(), e.get(), MPFR_RNDN); // Re exp
        mpfr_mul(s2.get(), s2.get(), e.get(), MPFR_RNDN); // Im exp

        // z = r (c + i s); h = (1 - z) exp(...)
        BigComplex one_minus_z(bits);
        mpfr_mul(one_minus_z.re.get(), r.get(), c.get(), MPFR_RNDN);
        mpfr_ui_sub(one_minus_z.re.get(), 1, one_minus_z.re.get(), MPFR_RNDN);
        mpfr_mul(one_minus_z.im.get(), r.get(), s.get(), MPFR_RNDN);
        mpfr_neg(one_minus_z.im.get(), one_minus_z.im.get(), MPFR_RNDN);
        mpfr_set(h.re.get(), s1.get(), MPFR_RNDN);
        mpfr_set(h.im.get(), s2.get(), MPFR_RNDN);
        multiply(h, one_minus_z, a, b);

        // seed = z / (1 - z)
        mpfr_mul(seed.re.get(), r.get(), c.get(), MPFR_RNDN);
        mpfr_mul(seed.im.get(), r.get(), s.get(), MPFR_RNDN);
        BigFloat denom(bits);
        mpfr_sqr(denom.get(), one_minus_z.re.get(), MPFR_RNDN);
        mpfr_sqr(e.get(), one_minus_z.im.get(), MPFR_RNDN);
        mpfr_add(denom.get(), denom.get(), e.get(), MPFR_RNDN);
        BigComplex inv(bits); // conj(1 - z) / |1 - z|^2
        mpfr_div(inv.re.get(), one_minus_z.re.get(), denom.get(), MPFR_RNDN);
        mpfr_div(inv.im.get(), one_minus_z.im.get(), denom.get(), MPFR_RNDN);
        mpfr_neg(inv.im.get(), inv.im.get(), MPFR_RNDN);
        multiply(seed, inv, a, b);

        mpfr_set(f.re.get(), seed.re.get(), MPFR_RNDN);
        mpfr_set(f.im.get(), seed.im.get(), MPFR_RNDN);
        for (int n = 0; n < n_last; ++n) {
            multiply(f, h, a, b);
            auto& acc = sums[static_cast<std::size_t>(n)];
            mpfr_add(acc.re.get(), acc.re.get(), f.re.get(), MPFR_RNDN);
            mpfr_add(acc.im.get(), acc.im.get(), f.im.get(), MPFR_RNDN);
        }
    }

    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(n_last));
    for (int n = 1; n <= n_last; ++n) {
        auto& acc = sums[static_cast<std::size_t>(n - 1)];
        double const scale = static_cast<double>(nodes) * n * tv;
        mpfr_div_d(acc.re.get(), acc.re.get(), scale, MPFR_RNDN);
        mpfr_div_d(acc.im.get(), acc.im.get(), scale, MPFR_RNDN);
        out.emplace_back(acc.re.to_double(), acc.im.to_double());
    }
    return out;
}

Complex moment_contour(int n, Time t, double radius, std::size_t nodes)
{
    if (n < 1) {
        throw DomainError("moment_contour needs n >= 1");
    }
    return moment_contour_series(n, t, radius, nodes).back();
}

Complex moment_density(int n, DensityTable const& table)
{
    Complex sum(0.0, 0.0);
    for (std::size_t j = 0; j < table.thetas.size(); ++j) {
        sum += table.weights[j] * table.rho[j] * std::polar(1.0, n * table.thetas[j]);
    }
    return sum;
}

Complex mgf_contour(Complex w, SpectralCurve const& curve)
{
    if (!(std::abs(w) < 1.0)) {
        throw DomainError("mgf_contour needs |w| < 1");
    }
    Time const t = curve.t;
    Complex const scale = 1.0 / (Complex(0.0, 2.0 * std::numbers::pi) * t.value());
    auto integrand = [&](Complex z) {
        Complex const h = h_eval(z, t);
        return w * h * h_log_derivative(z, t) / (1.0 - w * h) * std::log(1.0 - z);
    };
    // The stored upper half runs counterclockwise; the lower half is its
    // mirror image traversed in reverse.
    Complex sum(0.0, 0.0);
    for (auto const& s : curve.samples) {
        sum += integrand(s.z) * s.contour_weight -
               integrand(std::conj(s.z)) * std::conj(s.contour_weight);
    }
    return sum * scale;
}

std::vector<MomentReport> moment_reports(int n_last, DensityTable const& table, double radius,
                                         std::size_t nodes)
{
    std::vector<double> const sums = moment_sum_series(n_last, table.t);
    std::vector<Complex> const contour = moment_contour_series(n_last, table.t, radius, nodes);
    std::vector<MomentReport> out;
    out.reserve(sums.size());
    for (int n = 1; n <= n_last; ++n) {
        auto const i = static_cast<std::size_t>(n - 1);
        Complex const dens = moment_density(n, table);
        double const gap = std::max({std::abs(contour[i].real() - sums[i]),
                                     std::abs(dens.real() - sums[i]),
                                     std::abs(contour[i].real() - dens.real())});
        out.push_back({n, table.t.value(), sums[i], contour[i], dens, gap});
    }
    return out;
}

} // namespace fubm
