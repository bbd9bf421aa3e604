#include "fubm/curve.hpp"
#include "fubm/errors.hpp"
#include "fubm/moments.hpp"
#include "fubm/spectrum.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <string>

using namespace fubm;

namespace {

DensityTable const& table_for(double t)
{
    static std::map<double, DensityTable> cache;
    auto it = cache.find(t);
    if (it == cache.end()) {
        it = cache.emplace(t, density_table(build_curve(Time(t), 4096), 2001)).first;
    }
    return it->second;
}

double const kTimes[] = {0.5, 1.0, 2.0, 3.0, 3.9};

} // namespace

TEST_CASE("moment_sum: closed forms")
{
    for (double t = 0.1; t < 4.0; t += 0.3) {
        Time const tt(t);
        CHECK(moment_sum(1, tt) == doctest::Approx(std::exp(-t / 2)).epsilon(1e-15));
        CHECK(std::abs(moment_sum(2, tt) - oracle::m2(t)) <= 4e-16);
        CHECK(std::abs(moment_sum(3, tt) - oracle::m3(t)) <= 1e-15);
    }
    CHECK(moment_sum(2, Time(1.0)) == 0.0);
    for (int n : {1, 5, 30, 64}) {
        CHECK(moment_sum(n, Time(1e-9)) == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("moment_sum agrees with a long-double sum where cancellation is mild")
{
    for (double t : {0.1, 0.5, 1.0}) {
        for (int n = 1; n <= 12; ++n) {
            CHECK(std::abs(moment_sum(n, Time(t)) - oracle::moment_naive(n, t)) <= 1e-12);
        }
    }
}

TEST_CASE("moment_sum survives the cancellation at n = 64, t near 4")
{
    // The density route has no cancellation at all.
    for (double t : {3.0, 3.9}) {
        DensityTable const& tab = table_for(t);
        for (int n : {40, 50, 60, 64}) {
            double const m = moment_sum(n, Time(t));
            CHECK(std::abs(m) <= 1.0);
            CHECK(std::abs(m - moment_density(n, tab).real()) <= 1e-12);
        }
    }
}

TEST_CASE("moment_sum bounds and the N_max policy")
{
    for (double t = 0.25; t < 4.0; t += 0.25) {
        for (int n = 1; n <= kDefaultMomentLimit; ++n) {
            CHECK(std::abs(moment_sum(n, Time(t))) <= 1.0);
        }
    }
    CHECK_THROWS_AS(moment_sum(0, Time(1.0)), DomainError);
    CHECK_THROWS_AS(moment_sum(65, Time(1.0)), DomainError);
    try {
        moment_sum(65, Time(1.0));
    } catch (DomainError const& e) {
        CHECK(std::string(e.what()).find("N_max") != std::string::npos);
    }
    // A larger limit is honoured on request.
    CHECK(std::abs(moment_sum(100, Time(2.0), 100)) <= 1.0);
    auto const series = moment_sum_series(10, Time(2.0));
    REQUIRE(series.size() == 10);
    CHECK(series[4] == moment_sum(5, Time(2.0)));
}

TEST_CASE("moment_contour matches the sum")
{
    CHECK(std::abs(moment_contour(1, Time(1.0)) - std::exp(-0.5)) <= 1e-10);
    for (double t : kTimes) {
        auto const contour = moment_contour_series(30, Time(t));
        for (int n = 1; n <= 30; ++n) {
            CHECK(std::abs(contour[n - 1] - moment_sum(n, Time(t))) <= 1e-9);
        }
        CHECK(std::abs(contour[6] - moment_contour_series(7, Time(t)).back()) <= 1e-14);
    }
}

TEST_CASE("moment_contour does not depend on the radius")
{
    for (double t : kTimes) {
        auto const a = moment_contour_series(30, Time(t), 0.3);
        auto const b = moment_contour_series(30, Time(t), 0.7);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(a[i] - b[i]) <= 1e-10);
        }
    }
}

TEST_CASE("moment_contour: node defaults and doubling")
{
    for (double t : {1.0, 3.9}) {
        for (double r : {0.3, 0.5, 0.7}) {
            for (int n : {1, 10, 30}) {
                std::size_t const nodes = default_contour_nodes(n, Time(t), r);
                CHECK(nodes % 2 == 0);
                CHECK(nodes >= 256);
                CHECK(nodes >= static_cast<std::size_t>(16 * n));
                CHECK(static_cast<double>(nodes) >= 2.0 * std::numbers::e * n * t / r);
                Complex const base = moment_contour(n, Time(t), r, nodes);
                Complex const doubled = moment_contour(n, Time(t), r, 2 * nodes);
                CHECK(std::abs(base - doubled) < 1e-10);
            }
        }
    }
}

TEST_CASE("a node floor of 64 + 8n is too coarse once n t / r is large")
{
    int const n = 30;
    Time const t(3.9);
    Complex const coarse = moment_contour(n, t, 0.3, 64 + 8 * n);
    CHECK(std::abs(coarse - moment_sum(n, t)) > 1.0);
    // Still adequate for small n t / r.
    Complex const easy = moment_contour(n, Time(1.0), 0.5, 64 + 8 * n);
    CHECK(std::abs(easy - moment_sum(n, Time(1.0))) < 1e-10);
}

TEST_CASE("moment_contour domain")
{
    CHECK_THROWS_AS(moment_contour(1, Time(1.0), 1.0), DomainError);
    CHECK_THROWS_AS(moment_contour(1, Time(1.0), 0.0), DomainError);
    CHECK_THROWS_AS(moment_contour(1, Time(1.0), 0.5, 32), DomainError);
    CHECK_THROWS_AS(moment_contour(0, Time(1.0)), DomainError);
}

TEST_CASE("moment_density")
{
    for (double t : kTimes) {
        DensityTable const& tab = table_for(t);
        CHECK(std::abs(moment_density(0, tab) - 1.0) <= 1e-12);
        CHECK(std::abs(moment_density(1, tab) - std::exp(-t / 2)) <= 1e-12);
        for (int n = 1; n <= 30; ++n) {
            Complex const m = moment_density(n, tab);
            CHECK(std::abs(m.imag()) <= 1e-9);
            CHECK(moment_density(-n, tab) == std::conj(m));
            CHECK(std::abs(m.real() - moment_sum(n, Time(t))) <= 1e-6);
        }
    }
}

TEST_CASE("mgf_contour against the truncated series")
{
    for (double t : {1.0, 2.0, 3.0, 3.9}) {
        CAPTURE(t);
        SpectralCurve const c = build_curve(Time(t), 4096);
        std::vector<double> const moments = moment_sum_series(200, Time(t));
        CHECK(std::abs(mgf_contour(Complex(0.0, 0.0), c)) == 0.0);
        Complex const real_w = mgf_contour(Complex(0.3, 0.0), c);
        CHECK(std::abs(real_w - oracle::series(moments, 0.3)) <= 1e-8);
        CHECK(std::abs(real_w.imag()) <= 1e-10);
        for (Complex w : {Complex(-0.5, 0.2), Complex(0.1, 0.6), Complex(0.0, -0.7)}) {
            Complex const m = mgf_contour(w, c);
            CHECK(std::abs(m - oracle::series(moments, w)) <= 1e-8);
            // 1 + 2 M_t(w) is the Herglotz transform.
            double const r = std::abs(w);
            double const th = std::arg(w);
            CHECK(std::abs(1.0 + 2.0 * m.real() - herglotz_re(r, th, moments)) <= 1e-8);
        }
        CHECK_THROWS_AS(mgf_contour(Complex(1.0, 0.0), c), DomainError);
    }
}

TEST_CASE("moment reports")
{
    DensityTable const& tab = table_for(2.0);
    auto const reports = moment_reports(30, tab);
    REQUIRE(reports.size() == 30);
    for (auto const& r : reports) {
        CHECK(r.t == 2.0);
        CHECK(std::abs(r.m_contour.imag()) <= 1e-12);
        CHECK(std::abs(r.m_density.imag()) <= 1e-9);
        double const gap = std::max({std::abs(r.m_contour.real() - r.m_sum), std::abs(r.m_density.real() - r.m_sum),
                                     std::abs(r.m_contour.real() - r.m_density.real())});
        CHECK(r.max_discrepancy == gap);
        CHECK(r.max_discrepancy <= 1e-6);
    }
    CHECK(reports[4].n == 5);
}
