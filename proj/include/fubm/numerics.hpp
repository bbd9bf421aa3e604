#pragma once

#include "fubm/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace fubm {

/// A sign-change interval for a scalar function: lo < hi, f_lo * f_hi <= 0.
struct Bracket {
    double lo;
    double hi;
    double f_lo;
    double f_hi;
};

/// Throws DomainError unless the bracket invariants hold.
void validate(Bracket const& b);

inline constexpr int kMaxRootIterations = 200;
inline constexpr int kMaxBracketDoublings = 60;

template <class F>
Bracket make_bracket(F&& f, double lo, double hi)
{
    Bracket b{lo, hi, f(lo), f(hi)};
    validate(b);
    return b;
}

/// Root of f inside the bracket. Returns an endpoint when f vanishes there.
/// The solver never leaves [lo, hi]; it stops when the enclosing interval is
/// narrower than max(tol, 4 eps |x|).
template <class F>
double find_root(F&& f, Bracket const& b, double tol)
{
    validate(b);
    if (!(tol > 0.0)) {
        throw DomainError("find_root tolerance must be positive");
    }
    if (b.f_lo == 0.0) {
        return b.lo;
    }
    if (b.f_hi == 0.0) {
        return b.hi;
    }
    auto done = [tol](double a, double c) {
        double const scale = std::max(std::abs(a), std::abs(c));
        return std::abs(c - a) <= std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * scale);
    };
    std::uintmax_t iterations = kMaxRootIterations;
    auto const [a, c] =
        boost::math::tools::toms748_solve([&f](double x) { return f(x); }, b.lo, b.hi, b.f_lo,
                                          b.f_hi, done, iterations);
    if (iterations >= static_cast<std::uintmax_t>(kMaxRootIterations)) {
        throw NumericalError("find_root: no convergence in " + std::to_string(kMaxRootIterations) +
                             " iterations on [" + std::to_string(b.lo) + ", " +
                             std::to_string(b.hi) + "]");
    }
    return 0.5 * (a + c);
}

/// Doubles hi from a seed until f changes sign relative to f(lo).
template <class F>
Bracket expand_upper(F&& f, double lo, double hi_seed)
{
    double const f_lo = f(lo);
    double hi = hi_seed;
    for (int i = 0; i <= kMaxBracketDoublings; ++i) {
        double const f_hi = f(hi);
        if (f_lo * f_hi <= 0.0) {
            return {lo, hi, f_lo, f_hi};
        }
        hi *= 2.0;
    }
    throw NumericalError("expand_upper: no sign change after " +
                         std::to_string(kMaxBracketDoublings) + " doublings from " +
                         std::to_string(hi_seed));
}

/// Halves lo towards zero until f changes sign relative to f(hi).
template <class F>
Bracket contract_lower(F&& f, double lo_seed, double hi)
{
    double const f_hi = f(hi);
    double lo = lo_seed;
    for (int i = 0; i <= kMaxBracketDoublings; ++i) {
        double const f_lo = f(lo);
        if (f_lo * f_hi <= 0.0) {
            return {lo, hi, f_lo, f_hi};
        }
        lo *= 0.5;
    }
    throw NumericalError("contract_lower: no sign change after " +
                         std::to_string(kMaxBracketDoublings) + " halvings from " +
                         std::to_string(lo_seed));
}

struct QuadratureResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

/// Equispaced trapezoid over one period [0, 2 pi). The error estimate is the
/// difference to the rule on half as many nodes.
QuadratureResult integrate_periodic(std::function<std::complex<double>(double)> const& f,
                                    std::size_t nodes);

/// Adaptive Gauss-Kronrod (7/15) on [a, b]. Nodes are interior, so integrands
/// that are singular or undefined at the endpoints are safe. `converged` is
/// false when the subdivision limit stops refinement before `tol` (relative
/// to the L1 norm) is met; `error_estimate` then holds what was achieved.
QuadratureResult integrate_adaptive(std::function<double(double)> const& f, double a, double b,
                                    double tol);

/// Clenshaw-Curtis weights on [-1, 1] for the m + 1 Chebyshev-Lobatto nodes
/// x_j = -cos(j pi / m), j = 0..m (ascending).
std::vector<double> clenshaw_curtis_weights(std::size_t m);

} // namespace fubm
