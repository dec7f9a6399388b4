#include "fransim/run.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fransim/error.hpp"
#include "fransim/montecarlo.hpp"

namespace fransim {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string row;
    bool first = true;
    for (const std::string& c : cells) {
        if (!first) row += ',';
        row += c;
        first = false;
    }
    row += '\n';
    return row;
}

std::string f(double v) { return format_double(v); }

// Largest |propagated - closed-form| local intensity over the configs.
template <typename Configs>
double closed_form_deviation(const Configs& cfgs) {
    double worst = 0.0;
    for (const BenchConfig& cfg : cfgs) {
        const DetectorPlane plane = propagate_elementwise(cfg);
        for (int k = 1; k <= 4; ++k)
            worst = std::max(worst, std::abs(plane.at(k).intensity() - local_intensity(k, cfg)));
    }
    return worst;
}

RunOutput local_fringe(const RunConfig& cfg) {
    const ScanSpec range = cfg.scan.value_or(ScanSpec{ScanVariable::Phi, 0.0, kTwoPi, 720, {}});
    const auto points = scan_local(cfg.bench, range.start, range.stop, range.steps);

    RunOutput out;
    out.csv = csv_row({"phase_rad", "I1", "I2", "I3", "I4"});
    std::vector<BenchConfig> probes;
    for (const LocalFringePoint& p : points) {
        out.csv += csv_row({f(p.phase), f(p.intensities[0]), f(p.intensities[1]), f(p.intensities[2]),
                            f(p.intensities[3])});
        BenchConfig probe = cfg.bench;
        probe.phi = probe.psi = p.phase;
        probes.push_back(probe);
    }

    json vis = json::array();
    for (int k = 1; k <= 4; ++k) {
        double v = std::numeric_limits<double>::quiet_NaN();
        try {
            v = local_visibility(k, cfg.bench);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::UndefinedVisibility) throw;
        }
        vis.push_back({{"detector", k}, {"visibility", nullable(v)}});
    }
    out.summary = {{"visibilities", vis}, {"max_closed_form_deviation", closed_form_deviation(probes)}};
    return out;
}

RunOutput coincidence_scan(const RunConfig& cfg) {
    const ScanSpec spec = cfg.scan.value_or(ScanSpec{ScanVariable::Zeta, 0.0, kTwoPi, 720, {}});
    const auto records = scan_fringe(cfg.bench, spec);

    RunOutput out;
    out.csv = csv_row({"sweep_value_rad", "overlay_value_rad", "R14_norm", "R23_norm", "R13_norm", "R24_norm",
                       "E_corr"});
    std::vector<BenchConfig> probes;
    probes.reserve(records.size());
    for (const CorrelationRecord& r : records) {
        out.csv += csv_row({f(r.sweep_value), f(r.overlay_value), f(r.normalized[0]), f(r.normalized[1]),
                            f(r.normalized[2]), f(r.normalized[3]), f(r.e_corr)});
        probes.push_back(r.cfg);
    }

    json curves = json::array();
    bool any_violation = false;
    for (const CurveSummary& c : summarize_curves(records, spec.steps)) {
        curves.push_back({{"overlay_value_rad", c.overlay_value},
                          {"visibility", nullable(c.correlation_visibility)},
                          {"r14_visibility", nullable(c.r14_visibility)},
                          {"r14_min", c.r14_min},
                          {"r14_max", c.r14_max},
                          {"bell_violating", c.bell_violating}});
        any_violation = any_violation || c.bell_violating;
    }
    out.summary = {{"sweep_variable", to_string(spec.variable)},
                   {"overlay_variable", to_string(overlay_variable(spec.variable))},
                   {"bell_visibility_threshold", kBellVisibility},
                   {"curves", curves},
                   {"bell_violating", any_violation},
                   {"max_closed_form_deviation", closed_form_deviation(probes)}};
    return out;
}

RunOutput chsh(const RunConfig& cfg) {
    const ChshResult r = optimize_chsh(cfg.bench, cfg.grid_step);
    const ChshSettings& x = r.settings;
    RunOutput out;
    out.csv = csv_row({"a", "a_prime", "b", "b_prime", "E_ab", "E_abp", "E_apb", "E_apbp", "sign_arrangement", "S"});
    out.csv += csv_row({f(x.a), f(x.a_prime), f(x.b), f(x.b_prime), f(r.correlations[0]), f(r.correlations[1]),
                        f(r.correlations[2]), f(r.correlations[3]), std::string(to_string(r.sign)), f(r.s)});
    out.summary = {{"S", r.s},
                   {"settings", {{"a", x.a}, {"a_prime", x.a_prime}, {"b", x.b}, {"b_prime", x.b_prime}}},
                   {"correlations", r.correlations},
                   {"sign_arrangement", to_string(r.sign)},
                   {"grid_step", cfg.grid_step},
                   {"tsirelson_deviation", std::abs(r.s - kTsirelson)},
                   {"bell_violating", r.s > 2.0}};
    return out;
}

RunOutput montecarlo(const RunConfig& cfg) {
    const std::uint64_t seed = cfg.seed.value_or(1);
    const std::int64_t n = cfg.trials;
    const BenchConfig& b = cfg.bench;

    struct Row {
        std::string quantity;
        double analytic;
        McEstimate est;
    };
    std::vector<Row> rows;
    rows.push_back({"gate_fraction", 0.5, estimate_gate_fraction(b, n, seed)});

    const auto r = coincidence_table(b);
    const double sum = r[0] + r[1] + r[2] + r[3];
    const char* names[] = {"R14_norm", "R23_norm", "R13_norm", "R24_norm"};
    for (DetectorPair p : kAllPairs) {
        const auto k = static_cast<std::size_t>(p);
        rows.push_back({names[k], r[k] / sum, estimate_R(p, b, n, seed)});
    }
    rows.push_back({"E", correlation_E(b.zeta, b.xi, b), estimate_E(b.zeta, b.xi, b, n, seed)});
    rows.push_back({"S", chsh_S(cfg.chsh, b).s, estimate_S(cfg.chsh, b, n, seed)});

    RunOutput out;
    out.csv = csv_row({"quantity", "analytic", "n_trials", "n_gated", "estimate", "stderr"});
    json items = json::array();
    bool all_within = true;
    for (const Row& row : rows) {
        out.csv += csv_row({row.quantity, f(row.analytic), std::to_string(row.est.n_trials),
                            std::to_string(row.est.n_gated), f(row.est.value), f(row.est.std_error)});
        const bool within = std::abs(row.est.value - row.analytic) <= 5.0 * row.est.std_error + 1e-12;
        all_within = all_within && within;
        items.push_back({{"quantity", row.quantity},
                         {"analytic", row.analytic},
                         {"estimate", row.est.value},
                         {"stderr", row.est.std_error},
                         {"n_trials", row.est.n_trials},
                         {"n_gated", row.est.n_gated},
                         {"within_5_sigma", within}});
    }
    out.summary = {{"seed", seed}, {"estimates", items}, {"all_within_5_sigma", all_within}};
    return out;
}

RunOutput selftest() {
    RunOutput out;
    out.csv = csv_row({"check", "passed", "detail"});
    json checks = json::array();
    bool ok = true;
    for (const SelfCheck& c : run_selftest()) {
        out.csv += csv_row({c.name, c.passed ? "true" : "false", '"' + c.detail + '"'});
        checks.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        ok = ok && c.passed;
    }
    out.summary = {{"checks", checks}, {"passed", ok}};
    return out;
}

}  // namespace

RunOutput execute(const RunConfig& cfg) {
    RunOutput out;
    switch (cfg.subcommand) {
    case Subcommand::LocalFringe: out = local_fringe(cfg); break;
    case Subcommand::CoincidenceScan: out = coincidence_scan(cfg); break;
    case Subcommand::Chsh: out = chsh(cfg); break;
    case Subcommand::MonteCarlo: out = montecarlo(cfg); break;
    case Subcommand::SelfTest: out = selftest(); break;
    }
    out.summary["subcommand"] = to_string(cfg.subcommand);
    out.summary["mode"] = to_string(cfg.bench.mode);
    return out;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
    } catch (const Error& e) {
        err << "validation error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return 1;
    }

    RunOutput result;
    try {
        result = execute(cfg);
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return 2;
    }

    const bool json_out = cfg.format == OutputFormat::JsonSummary;
    if (!cfg.output_path.empty()) {
        std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "cannot write output file '" << cfg.output_path << "'\n";
            return 1;
        }
        file << result.csv;
        if (!file) {
            err << "failed writing output file '" << cfg.output_path << "'\n";
            return 1;
        }
    } else if (!json_out) {
        out << result.csv;
    }
    if (json_out) out << result.summary.dump(2) << '\n';

    if (cfg.subcommand == Subcommand::SelfTest && !result.summary.value("passed", false)) return 2;
    return 0;
}

}  // namespace fransim
