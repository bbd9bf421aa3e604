#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fubm::cli {

enum class Command { curve, density, moments, support, verify };
enum class Format { csv, json };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verification_failed = 1;
inline constexpr int usage = 2;
inline constexpr int numerical = 3;
} // namespace exit_code

struct RunConfig {
    Command command = Command::support;
    std::vector<double> ts;
    std::size_t samples = 4096;
    std::size_t grid = 2001;
    int nmax = 30;
    double radius = 0.5;
    double tol = 1e-8;
    std::optional<std::string> out;
    Format format = Format::csv;
};

/// `start:stop:step`, endpoints included when within half a step.
std::vector<double> parse_t_grid(std::string_view text);

/// One line of the verification report.
struct Check {
    std::string name;
    std::optional<double> t; ///< empty for checks spanning the whole grid
    double residual;
    bool passed;
};

/// Every invariant for one t, thresholded at config.tol.
std::vector<Check> verify_point(double t, RunConfig const& config);

/// Per-point checks for all of config.ts plus the cross-grid ones.
std::vector<Check> verify_all(RunConfig const& config);

/// Executes a validated configuration. Domain errors escape as DomainError,
/// numerical failures as NumericalError.
int run(RunConfig const& config, std::ostream& out, std::ostream& err);

/// Full command line (program name first) to exit status; never throws.
int main_entry(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

} // namespace fubm::cli
