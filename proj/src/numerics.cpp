#include "fubm/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <numbers>

namespace fubm {

void validate(Bracket const& b)
{
    if (!(b.lo < b.hi)) {
        throw DomainError("bracket needs lo < hi");
    }
    if (std::isnan(b.f_lo) || std::isnan(b.f_hi) || b.f_lo * b.f_hi > 0.0) {
        throw DomainError("bracket endpoints do not enclose a sign change");
    }
}

QuadratureResult integrate_periodic(std::function<std::complex<double>(double)> const& f,
                                    std::size_t nodes)
{
    if (nodes < 4) {
        throw DomainError("integrate_periodic needs at least 4 nodes");
    }
    double const two_pi = 2.0 * std::numbers::pi;
    std::vector<std::complex<double>> values(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
        values[j] = f(two_pi * static_cast<double>(j) / static_cast<double>(nodes));
    }
    std::complex<double> full{};
    for (auto const& v : values) {
        full += v;
    }
    full *= two_pi / static_cast<double>(nodes);

    QuadratureResult out{full, 0.0, nodes, true};
    std::size_t const half = nodes / 2;
    std::complex<double> coarse{};
    if (nodes % 2 == 0) {
        for (std::size_t j = 0; j < nodes; j += 2) {
            coarse += values[j];
        }
    } else {
        for (std::size_t j = 0; j < half; ++j) {
            coarse += f(two_pi * static_cast<double>(j) / static_cast<double>(half));
        }
        out.evaluations += half;
    }
    coarse *= two_pi / static_cast<double>(half);
    out.error_estimate = std::abs(full - coarse);
    return out;
}

QuadratureResult integrate_adaptive(std::function<double(double)> const& f, double a, double b,
                                    double tol)
{
    if (!(a < b)) {
        throw DomainError("integrate_adaptive needs a < b");
    }
    if (!(tol > 0.0)) {
        throw DomainError("integrate_adaptive tolerance must be positive");
    }
    constexpr unsigned kMaxDepth = 20;
    std::size_t count = 0;
    auto counted = [&](double x) {
        ++count;
        return f(x);
    };
    double error = 0.0;
    double l1 = 0.0;
    double const value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        counted, a, b, kMaxDepth, tol, &error, &l1);
    QuadratureResult out{{value, 0.0}, error, count, true};
    out.converged = error <= tol * std::max(l1, std::numeric_limits<double>::min());
    return out;
}

std::vector<double> clenshaw_curtis_weights(std::size_t m)
{
    if (m < 1) {
        throw DomainError("Clenshaw-Curtis rule needs at least one interval");
    }
    std::vector<double> w(m + 1, 0.0);
    if (m == 1) {
        w[0] = w[1] = 1.0;
        return w;
    }
    double const md = static_cast<double>(m);
    std::vector<double> v(m - 1, 1.0);
    auto angle = [md](std::size_t j) { return std::numbers::pi * static_cast<double>(j) / md; };
    if (m % 2 == 0) {
        w[0] = w[m] = 1.0 / (md * md - 1.0);
        for (std::size_t k = 1; k < m / 2; ++k) {
            double const kd = static_cast<double>(k);
            for (std::size_t j = 1; j < m; ++j) {
                v[j - 1] -= 2.0 * std::cos(2.0 * kd * angle(j)) / (4.0 * kd * kd - 1.0);
            }
        }
        for (std::size_t j = 1; j < m; ++j) {
            v[j - 1] -= std::cos(md * angle(j)) / (md * md - 1.0);
        }
    } else {
        w[0] = w[m] = 1.0 / (md * md);
        for (std::size_t k = 1; k <= (m - 1) / 2; ++k) {
            double const kd = static_cast<double>(k);
            for (std::size_t j = 1; j < m; ++j) {
                v[j - 1] -= 2.0 * std::cos(2.0 * kd * angle(j)) / (4.0 * kd * kd - 1.0);
            }
        }
    }
    for (std::size_t j = 1; j < m; ++j) {
        w[j] = 2.0 * v[j - 1] / md;
    }
    return w;
}

} // namespace fubm
