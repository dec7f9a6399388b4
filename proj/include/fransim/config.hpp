#pragma once

// Run configuration: `key = value` lines, '#' comments.
//
// Angles take radians by default, a trailing "deg" for degrees, or
// rational-pi literals such as "pi/8", "-3pi/4", "3*pi/4".

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fransim/chsh.hpp"
#include "fransim/correlation.hpp"

namespace fransim {

enum class Subcommand : std::uint8_t { LocalFringe, CoincidenceScan, Chsh, MonteCarlo, SelfTest };
enum class OutputFormat : std::uint8_t { Csv, JsonSummary };

std::string_view to_string(Subcommand s);
std::string_view to_string(OutputFormat f);
std::string_view to_string(CoincidenceMode m);
std::string_view to_string(ScanVariable v);

std::optional<Subcommand> parse_subcommand(std::string_view s);
std::optional<OutputFormat> parse_format(std::string_view s);
std::optional<CoincidenceMode> parse_mode(std::string_view s);

struct RunConfig {
    Subcommand subcommand = Subcommand::CoincidenceScan;
    BenchConfig bench;
    std::optional<ScanSpec> scan;
    std::string output_path;  // empty: standard output
    std::optional<std::uint64_t> seed;
    OutputFormat format = OutputFormat::Csv;

    std::int64_t trials = 1'000'000;              // montecarlo
    double grid_step = 0.098174770424681035;      // pi/32, chsh search
    ChshSettings chsh{0.0, 0.78539816339744831, -0.39269908169872414, -1.1780972450961724};

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws Error{Config} naming the line for unknown keys, malformed values or
// missing '='. Does not run semantic validation.
RunConfig parse_config(std::string_view text);

// Semantic checks that must pass before any output is produced:
// bench invariants, heterodyne precondition, scan shape, trial count and grid
// step. Throws the matching Error code.
void validate(const RunConfig& cfg);

// Inverse of parse_config for every field (17 significant digits).
std::string render(const RunConfig& cfg);

// Exposed for tests.
double parse_angle(std::string_view text);
double parse_real(std::string_view text);

// "%.17g", or "nan".
std::string format_double(double v);

}  // namespace fransim
