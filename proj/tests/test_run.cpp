#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "fransim/run.hpp"

using namespace fransim;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::size_t line_count(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("fransim_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("csv headers per subcommand") {
    RunConfig c;
    c.subcommand = Subcommand::LocalFringe;
    c.scan = ScanSpec{ScanVariable::Phi, 0.0, 6.283185307179586, 16, {}};
    CHECK(first_line(execute(c).csv) == "phase_rad,I1,I2,I3,I4");
    CHECK(line_count(execute(c).csv) == 17);

    c.subcommand = Subcommand::CoincidenceScan;
    c.scan = ScanSpec{ScanVariable::Zeta, 0.0, 6.283185307179586, 8, {0.0, 1.0}};
    const std::string scan = execute(c).csv;
    CHECK(first_line(scan) == "sweep_value_rad,overlay_value_rad,R14_norm,R23_norm,R13_norm,R24_norm,E_corr");
    CHECK(line_count(scan) == 17);

    c.subcommand = Subcommand::Chsh;
    c.grid_step = 3.141592653589793 / 8;
    CHECK(first_line(execute(c).csv) == "a,a_prime,b,b_prime,E_ab,E_abp,E_apb,E_apbp,sign_arrangement,S");

    c.subcommand = Subcommand::MonteCarlo;
    c.trials = 2000;
    const std::string mc = execute(c).csv;
    CHECK(first_line(mc) == "quantity,analytic,n_trials,n_gated,estimate,stderr");
    CHECK(line_count(mc) == 8);
}

TEST_CASE("floats use 17 significant digits") {
    RunConfig c;
    c.subcommand = Subcommand::LocalFringe;
    c.scan = ScanSpec{ScanVariable::Phi, 0.1, 0.2, 2, {}};
    const std::string csv = execute(c).csv;
    CHECK(csv.find("\n0.10000000000000001,") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical output") {
    RunConfig c;
    c.subcommand = Subcommand::MonteCarlo;
    c.trials = 20'000;
    c.seed = 9;
    std::ostringstream a, b, err;
    CHECK(run(c, a, err) == 0);
    CHECK(run(c, b, err) == 0);
    CHECK(a.str() == b.str());
    c.seed = 10;
    std::ostringstream d;
    CHECK(run(c, d, err) == 0);
    CHECK(a.str() != d.str());
}

TEST_CASE("exit codes and output discipline") {
    const auto path = temp_path("exit.csv");
    std::filesystem::remove(path);
    std::ostringstream out, err;

    RunConfig bad;
    bad.output_path = path.string();
    bad.bench.resolving_time = 2.0 / bad.bench.delta_f;
    CHECK(run(bad, out, err) == 1);
    CHECK_FALSE(std::filesystem::exists(path));
    CHECK(out.str().empty());
    CHECK(err.str().find("gate") != std::string::npos);

    RunConfig dark;
    dark.subcommand = Subcommand::MonteCarlo;
    dark.trials = 100;
    dark.bench.intensity_i0 = 0.0;
    dark.output_path = path.string();
    CHECK(run(dark, out, err) == 2);
    CHECK_FALSE(std::filesystem::exists(path));

    RunConfig unwritable;
    unwritable.subcommand = Subcommand::LocalFringe;
    unwritable.output_path = (temp_path("missing_dir") / "x" / "out.csv").string();
    CHECK(run(unwritable, out, err) == 1);

    RunConfig good;
    good.subcommand = Subcommand::LocalFringe;
    good.output_path = path.string();
    CHECK(run(good, out, err) == 0);
    CHECK(first_line(slurp(path)) == "phase_rad,I1,I2,I3,I4");
    std::filesystem::remove(path);
}

TEST_CASE("json summary for chsh") {
    RunConfig c;
    c.subcommand = Subcommand::Chsh;
    c.format = OutputFormat::JsonSummary;
    std::ostringstream out, err;
    REQUIRE(run(c, out, err) == 0);
    const auto j = nlohmann::json::parse(out.str());
    CHECK(std::abs(j["S"].get<double>() - 2.8284271247461903) < 1e-6);
    CHECK(j["bell_violating"].get<bool>());
    CHECK(j["subcommand"] == "chsh");
    CHECK(j["mode"] == "paper");
}

TEST_CASE("json summary flags coincidence scans") {
    RunConfig c;
    c.subcommand = Subcommand::CoincidenceScan;
    c.format = OutputFormat::JsonSummary;
    c.scan = ScanSpec{ScanVariable::Zeta, 0.0, 6.283185307179586, 720, {0.0}};
    auto j = execute(c).summary;
    CHECK(j["bell_violating"].get<bool>());
    CHECK(j["curves"][0]["visibility"].get<double>() == doctest::Approx(1.0));

    c.bench.mode = CoincidenceMode::Strict;
    c.bench.phi = 3.141592653589793;
    j = execute(c).summary;
    CHECK_FALSE(j["bell_violating"].get<bool>());

    // xi = 3 pi/4 darkens both Bob detectors, so that curve has no correlation
    c.scan->overlay_values = {0.0, 3 * 3.141592653589793 / 4};
    j = execute(c).summary;
    CHECK(j["curves"][1]["visibility"].is_null());
    CHECK_FALSE(j["curves"][1]["bell_violating"].get<bool>());
}

TEST_CASE("selftest passes") {
    RunConfig c;
    c.subcommand = Subcommand::SelfTest;
    std::ostringstream out, err;
    CHECK(run(c, out, err) == 0);
    CHECK(out.str().find(",false,") == std::string::npos);
}
