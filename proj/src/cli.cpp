#include "fubm/cli.hpp"

#include "fubm/curve.hpp"
#include "fubm/errors.hpp"
#include "fubm/moments.hpp"
#include "fubm/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>

namespace fubm::cli {

using nlohmann::json;

namespace {

std::string iso_timestamp()
{
    std::time_t const now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_real(std::string_view text)
{
    double v = 0.0;
    auto const* end = text.data() + text.size();
    auto const [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw DomainError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

// Writes to --out when given, otherwise to the supplied stream.
class Sink {
public:
    Sink(std::optional<std::string> const& path, std::ostream& fallback) : stream_(&fallback)
    {
        if (path) {
            file_.open(*path);
            if (!file_) {
                throw DomainError("cannot open output file '" + *path + "'");
            }
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

void write_json_file(std::string const& path, json const& doc)
{
    std::ofstream file(path);
    if (!file) {
        throw DomainError("cannot open output file '" + path + "'");
    }
    file << doc.dump(2) << '\n';
}

double single_t(RunConfig const& config, char const* command)
{
    if (config.ts.size() != 1) {
        throw DomainError(std::string(command) + " needs a single --t");
    }
    return config.ts.front();
}

void validate(RunConfig const& config)
{
    if (config.ts.empty()) {
        throw DomainError("one of --t or --t-grid is required");
    }
    for (double t : config.ts) {
        Time{t};
    }
    if (config.samples < 64) {
        throw DomainError("--samples must be at least 64");
    }
    if (config.grid < 33 || config.grid % 2 == 0) {
        throw DomainError("--grid must be odd and at least 33");
    }
    if (config.nmax < 1) {
        throw DomainError("--nmax must be positive");
    }
    if (!(config.radius > 0.0 && config.radius < 1.0)) {
        throw DomainError("--radius must lie in (0, 1)");
    }
    if (!(config.tol > 0.0)) {
        throw DomainError("--tol must be positive");
    }
}

void run_curve(RunConfig const& config, std::ostream& out)
{
    Time const t(single_t(config, "curve"));
    SpectralCurve const curve = build_curve(t, config.samples);
    Sink sink(config.out, out);
    auto& os = sink.get();
    if (config.format == Format::json) {
        json rows = json::array();
        for (auto const& s : curve.samples) {
            rows.push_back({{"param", s.param},
                            {"regime", to_string(s.regime)},
                            {"x", s.z.real()},
                            {"y", s.z.imag()},
                            {"abs_h", std::abs(h_eval(s.z, t))},
                            {"arg_h", s.phi},
                            {"residual", s.residual}});
        }
        os << json{{"t", t.value()}, {"samples", rows}}.dump(2) << '\n';
        return;
    }
    os << "param,regime,x,y,abs_h,arg_h,residual\n";
    for (auto const& s : curve.samples) {
        os << fmt(s.param) << ',' << to_string(s.regime) << ',' << fmt(s.z.real()) << ','
           << fmt(s.z.imag()) << ',' << fmt(std::abs(h_eval(s.z, t))) << ',' << fmt(s.phi) << ','
           << fmt(s.residual) << '\n';
    }
}

void run_density(RunConfig const& config, std::ostream& out, std::ostream& err)
{
    Time const t(single_t(config, "density"));
    SpectralCurve const curve = build_curve(t, config.samples);
    DensityTable const table = density_table(curve, config.grid);
    json const summary{{"t", t.value()},
                       {"beta", table.beta},
                       {"x_t", table.x_t},
                       {"normalization", table.normalization},
                       {"grid_size", table.thetas.size()},
                       {"timestamp", iso_timestamp()}};
    if (config.format == Format::json) {
        Sink sink(config.out, out);
        sink.get() << summary.dump(2) << '\n';
        return;
    }
    {
        Sink sink(config.out, out);
        auto& os = sink.get();
        os << "theta,rho\n";
        for (std::size_t j = 0; j < table.thetas.size(); ++j) {
            os << fmt(table.thetas[j]) << ',' << fmt(table.rho[j]) << '\n';
        }
    }
    if (config.out) {
        write_json_file(*config.out + ".json", summary);
    } else {
        err << summary.dump() << '\n';
    }
}

void run_moments(RunConfig const& config, std::ostream& out)
{
    Sink sink(config.out, out);
    auto& os = sink.get();
    json rows = json::array();
    if (config.format == Format::csv) {
        os << "n,t,m_sum,m_contour_re,m_contour_im,m_density_re,m_density_im,max_discrepancy\n";
    }
    for (double tv : config.ts) {
        Time const t(tv);
        SpectralCurve const curve = build_curve(t, config.samples);
        DensityTable const table = density_table(curve, config.grid);
        for (auto const& r : moment_reports(config.nmax, table, config.radius)) {
            if (config.format == Format::csv) {
                os << r.n << ',' << fmt(r.t) << ',' << fmt(r.m_sum) << ',' << fmt(r.m_contour.real())
                   << ',' << fmt(r.m_contour.imag()) << ',' << fmt(r.m_density.real()) << ','
                   << fmt(r.m_density.imag()) << ',' << fmt(r.max_discrepancy) << '\n';
            } else {
                rows.push_back({{"n", r.n},
                                {"t", r.t},
                                {"m_sum", r.m_sum},
                                {"m_contour_re", r.m_contour.real()},
                                {"m_contour_im", r.m_contour.imag()},
                                {"m_density_re", r.m_density.real()},
                                {"m_density_im", r.m_density.imag()},
                                {"max_discrepancy", r.max_discrepancy}});
            }
        }
    }
    if (config.format == Format::json) {
        os << rows.dump(2) << '\n';
    }
}

void run_support(RunConfig const& config, std::ostream& out)
{
    json rows = json::array();
    for (double tv : config.ts) {
        Time const t(tv);
        SupportParams const p = support_params(t.value());
        rows.push_back({{"t", t.value()},
                        {"theta_t", p.theta_t},
                        {"beta", p.beta},
                        {"x_t", solve_xt(t)}});
    }
    Sink sink(config.out, out);
    sink.get() << (rows.size() == 1 ? rows.front() : rows).dump(2) << '\n';
}

int run_verify(RunConfig const& config, std::ostream& out, std::ostream& err)
{
    std::vector<Check> const checks = verify_all(config);
    json items = json::array();
    std::size_t failed = 0;
    for (auto const& c : checks) {
        json item{{"name", c.name}, {"residual", c.residual}, {"passed", c.passed}};
        item["t"] = c.t ? json(*c.t) : json(nullptr);
        items.push_back(item);
        if (!c.passed) {
            ++failed;
            err << "FAIL " << c.name;
            if (c.t) {
                err << " at t = " << fmt(*c.t);
            }
            err << ": residual " << fmt(c.residual) << '\n';
        }
    }
    json const report{{"timestamp", iso_timestamp()},
                      {"tol", config.tol},
                      {"t_grid", config.ts},
                      {"checks", items},
                      {"failed", failed},
                      {"passed", failed == 0}};
    Sink sink(config.out, out);
    sink.get() << report.dump(2) << '\n';
    err << "verify: " << checks.size() - failed << '/' << checks.size() << " checks passed\n";
    return failed == 0 ? exit_code::ok : exit_code::verification_failed;
}

} // namespace

std::vector<double> parse_t_grid(std::string_view text)
{
    auto const first = text.find(':');
    auto const second = first == std::string_view::npos ? first : text.find(':', first + 1);
    if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
        throw DomainError("--t-grid expects start:stop:step");
    }
    double const start = parse_real(text.substr(0, first));
    double const stop = parse_real(text.substr(first + 1, second - first - 1));
    double const step = parse_real(text.substr(second + 1));
    if (!(step > 0.0) || !(stop >= start)) {
        throw DomainError("--t-grid needs step > 0 and stop >= start");
    }
    auto const count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
    if (count > 100000) {
        throw DomainError("--t-grid has too many points");
    }
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        grid.push_back(start + static_cast<double>(k) * step);
    }
    return grid;
}

std::vector<Check> verify_point(double tv, RunConfig const& config)
{
    Time const t(tv);
    double const tol = config.tol;
    std::vector<Check> checks;
    auto add = [&](std::string name, double residual) {
        bool const ok = std::isfinite(residual) && residual <= tol;
        checks.push_back({std::move(name), tv, residual, ok});
    };

    SpectralCurve const curve = build_curve(t, config.samples);
    SupportParams const support = support_params(tv);
    auto distance_to = [&](Complex target) {
        double best = std::numeric_limits<double>::infinity();
        for (auto const& s : curve.samples) {
            best = std::min(best, std::abs(s.z - target));
        }
        return best;
    };

    add("modulus", max_modulus_error(curve));
    add("landmark_x_t", distance_to(Complex(curve.x_t, 0.0)) +
                            std::abs(std::abs(h_eval(Complex(curve.x_t, 0.0), t)) - 1.0));
    add("landmark_critical", distance_to(std::polar(std::sqrt(tv), support.theta_t)));
    add("landmark_quarter", distance_to(Complex(0.0, std::sqrt(std::expm1(tv)))));
    {
        double hits = 0.0;
        for (auto const& s : curve.samples) {
            if (s.z.imag() == 0.0 && s.z.real() >= 1.0) {
                hits += 1.0;
            }
        }
        add("avoids_cut", hits);
    }

    double min_phi = std::numeric_limits<double>::infinity();
    for (auto const& s : curve.samples) {
        min_phi = std::min(min_phi, s.phi);
    }
    add("min_arg_h", std::abs(min_phi + support.beta));
    try {
        split_curve(curve);
        add("branch_monotone", 0.0);
    } catch (NumericalError const&) {
        add("branch_monotone", 1.0);
    }

    double pairing = 0.0;
    double sides = 0.0;
    double ratio = 0.0;
    for (int j = 0; j <= 100; ++j) {
        double const phi = curve.beta * (j - 50) / 50.0;
        Complex const z_in = invert_h(phi, Branch::inner, curve);
        Complex const z_out = invert_h(phi, Branch::outer, curve);
        pairing = std::max(pairing, std::abs(involution(z_in) - z_out));
        sides = std::max({sides, 1.0 - std::abs(z_out - 1.0), std::abs(z_in - 1.0) - 1.0});
        ratio = std::max(ratio, std::abs((1.0 - z_out) / (1.0 - z_in) - std::norm(z_out - 1.0)));
    }
    add("involution_pairing", pairing);
    add("branch_sides", sides);
    add("ratio_identity", ratio);

    DensityTable const table = density_table(curve, config.grid);
    add("normalization", std::abs(table.normalization - 1.0));
    add("density_nonnegative", std::max(0.0, -*std::min_element(table.rho.begin(), table.rho.end())));
    add("density_endpoints", std::max(std::abs(density_at(-curve.beta, curve)),
                                      std::abs(density_at(curve.beta, curve))));

    auto const reports = moment_reports(config.nmax, table, config.radius);
    double contour_gap = 0.0;
    double density_gap = 0.0;
    for (auto const& r : reports) {
        contour_gap = std::max(contour_gap, std::abs(r.m_contour - r.m_sum));
        density_gap = std::max(density_gap, std::abs(r.m_density - r.m_sum));
    }
    add("moments_contour_vs_sum", contour_gap);
    add("moments_density_vs_sum", density_gap);

    double const m1 = std::exp(-tv / 2.0);
    add("m1_closed_form", std::max({std::abs(reports.front().m_sum - m1),
                                    std::abs(reports.front().m_contour - m1),
                                    std::abs(reports.front().m_density - m1)}));

    auto const inner_circle = moment_contour_series(config.nmax, t, 0.3);
    auto const outer_circle = moment_contour_series(config.nmax, t, 0.7);
    double radius_gap = 0.0;
    for (std::size_t i = 0; i < inner_circle.size(); ++i) {
        radius_gap = std::max(radius_gap, std::abs(inner_circle[i] - outer_circle[i]));
    }
    add("contour_radius_independence", radius_gap);

    std::vector<double> const series = moment_sum_series(200, t);
    double value = 0.0;
    for (auto it = series.rbegin(); it != series.rend(); ++it) {
        value = (value + *it) * 0.3;
    }
    add("mgf_series", std::abs(mgf_contour(Complex(0.3, 0.0), curve) - value));
    return checks;
}

std::vector<Check> verify_all(RunConfig const& config)
{
    std::vector<std::future<std::vector<Check>>> jobs;
    jobs.reserve(config.ts.size());
    for (double tv : config.ts) {
        jobs.push_back(std::async(std::launch::async, [tv, &config] { return verify_point(tv, config); }));
    }
    std::vector<Check> checks;
    for (auto& job : jobs) {
        auto part = job.get();
        checks.insert(checks.end(), part.begin(), part.end());
    }

    std::vector<double> sorted = config.ts;
    std::sort(sorted.begin(), sorted.end());
    double violations = 0.0;
    double previous = -1.0;
    for (double tv : sorted) {
        double const x = solve_xt(Time(tv));
        if (!(x > previous && x > 0.0 && x < 1.0)) {
            violations += 1.0;
        }
        previous = x;
    }
    checks.push_back({"x_t_increasing", std::nullopt, violations, violations == 0.0});
    return checks;
}

int run(RunConfig const& config, std::ostream& out, std::ostream& err)
{
    validate(config);
    switch (config.command) {
    case Command::curve:
        run_curve(config, out);
        return exit_code::ok;
    case Command::density:
        run_density(config, out, err);
        return exit_code::ok;
    case Command::moments:
        run_moments(config, out);
        return exit_code::ok;
    case Command::support:
        run_support(config, out);
        return exit_code::ok;
    case Command::verify:
        return run_verify(config, out, err);
    }
    return exit_code::usage;
}

int main_entry(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    RunConfig config;
    double t_single = 0.0;
    std::string t_grid;
    std::string out_path;
    std::string format = "csv";

    CLI::App app{"Spectral curve, density and moments of free unitary Brownian motion"};
    app.require_subcommand(1);
    struct Entry {
        char const* name;
        char const* help;
        Command command;
    };
    Entry const entries[] = {
        {"curve", "Sample the level curve |h_t| = 1 (upper half)", Command::curve},
        {"density", "Tabulate the spectral density", Command::density},
        {"moments", "Compare moments from the sum, contour and density routes", Command::moments},
        {"support", "Print theta_t, beta and x_t as JSON", Command::support},
        {"verify", "Run every consistency check over a t-grid", Command::verify},
    };
    std::vector<std::pair<CLI::App*, Command>> subs;
    for (auto const& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        auto* t_opt = sub->add_option("--t", t_single, "Diffusion time, 0 < t < 4");
        auto* grid_opt = sub->add_option("--t-grid", t_grid, "start:stop:step, inclusive");
        t_opt->excludes(grid_opt);
        sub->add_option("--samples", config.samples, "Curve samples")->capture_default_str();
        sub->add_option("--grid", config.grid, "Density grid size (odd)")->capture_default_str();
        sub->add_option("--nmax", config.nmax, "Largest moment index")->capture_default_str();
        sub->add_option("--radius", config.radius, "Contour radius in (0, 1)")->capture_default_str();
        sub->add_option("--tol", config.tol, "Verification threshold")->capture_default_str();
        sub->add_option("--out", out_path, "Output file (default stdout)");
        sub->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        subs.emplace_back(sub, e.command);
    }

    std::vector<char const*> argv;
    argv.reserve(args.size());
    for (auto const& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e, out, err);
    } catch (CLI::CallForAllHelp const& e) {
        return app.exit(e, out, err);
    } catch (CLI::ParseError const& e) {
        app.exit(e, out, err);
        return exit_code::usage;
    }

    try {
        for (auto const& [sub, command] : subs) {
            if (sub->parsed()) {
                config.command = command;
                if (sub->count("--t") > 0) {
                    config.ts = {t_single};
                } else if (sub->count("--t-grid") > 0) {
                    config.ts = parse_t_grid(t_grid);
                }
            }
        }
        if (!out_path.empty()) {
            config.out = out_path;
        }
        config.format = format == "json" ? Format::json : Format::csv;
        return run(config, out, err);
    } catch (DomainError const& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    } catch (NumericalError const& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_code::numerical;
    } catch (std::exception const& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_code::numerical;
    }
}

} // namespace fubm::cli
