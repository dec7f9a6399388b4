#include "fransim/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

#include "fransim/error.hpp"

namespace fransim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

[[noreturn]] void bad_value(std::string_view what, std::string_view text) {
    fail(ErrorCode::Config, "malformed " + std::string(what) + " '" + std::string(text) + "'");
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

double parse_real(std::string_view text) {
    const std::string_view s = trim(text);
    std::string_view body = s;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (body.empty() || ec != std::errc() || end != body.data() + body.size() || !std::isfinite(value))
        bad_value("number", text);
    return value;
}

double parse_angle(std::string_view text) {
    std::string_view s = trim(text);
    if (ends_with(s, "deg")) {
        s.remove_suffix(3);
        return parse_real(s) * std::numbers::pi / 180.0;
    }
    const auto pi_at = s.find("pi");
    if (pi_at == std::string_view::npos) return parse_real(s);

    // [sign][coef][*]pi[/den]
    std::string_view coef = trim(s.substr(0, pi_at));
    std::string_view rest = trim(s.substr(pi_at + 2));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    double c = 1.0;
    if (coef == "-")
        c = -1.0;
    else if (coef == "+" || coef.empty())
        c = 1.0;
    else
        c = parse_real(coef);
    double den = 1.0;
    if (!rest.empty()) {
        if (rest.front() != '/') bad_value("angle", text);
        den = parse_real(rest.substr(1));
        if (den == 0.0) bad_value("angle", text);
    }
    return c * std::numbers::pi / den;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string_view to_string(Subcommand s) {
    switch (s) {
    case Subcommand::LocalFringe: return "local-fringe";
    case Subcommand::CoincidenceScan: return "coincidence-scan";
    case Subcommand::Chsh: return "chsh";
    case Subcommand::MonteCarlo: return "montecarlo";
    case Subcommand::SelfTest: return "selftest";
    }
    return "unknown";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json-summary"; }
std::string_view to_string(CoincidenceMode m) { return m == CoincidenceMode::Paper ? "paper" : "strict"; }

std::string_view to_string(ScanVariable v) {
    switch (v) {
    case ScanVariable::Zeta: return "zeta";
    case ScanVariable::Xi: return "xi";
    case ScanVariable::Phi: return "phi";
    case ScanVariable::Psi: return "psi";
    }
    return "unknown";
}

std::optional<Subcommand> parse_subcommand(std::string_view s) {
    for (Subcommand c : {Subcommand::LocalFringe, Subcommand::CoincidenceScan, Subcommand::Chsh,
                         Subcommand::MonteCarlo, Subcommand::SelfTest})
        if (to_string(c) == s) return c;
    return std::nullopt;
}

std::optional<OutputFormat> parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json-summary") return OutputFormat::JsonSummary;
    return std::nullopt;
}

std::optional<CoincidenceMode> parse_mode(std::string_view s) {
    if (s == "paper") return CoincidenceMode::Paper;
    if (s == "strict") return CoincidenceMode::Strict;
    return std::nullopt;
}

namespace {

std::optional<ScanVariable> parse_variable(std::string_view s) {
    for (ScanVariable v : {ScanVariable::Zeta, ScanVariable::Xi, ScanVariable::Phi, ScanVariable::Psi})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

ScanSpec default_scan() {
    ScanSpec s;
    s.start = 0.0;
    s.stop = 2.0 * std::numbers::pi;
    s.steps = 720;
    return s;
}

std::int64_t parse_integer(std::string_view text) {
    const std::string_view s = trim(text);
    std::int64_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size()) bad_value("integer", text);
    return v;
}

std::uint64_t parse_u64(std::string_view text) {
    const std::string_view s = trim(text);
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size()) bad_value("unsigned integer", text);
    return v;
}

void apply_key(RunConfig& cfg, std::string_view key, std::string_view value) {
    BenchConfig& b = cfg.bench;
    auto scan = [&]() -> ScanSpec& {
        if (!cfg.scan) cfg.scan = default_scan();
        return *cfg.scan;
    };

    if (key == "mode") {
        const auto m = parse_mode(value);
        if (!m) bad_value("mode (expected paper|strict)", value);
        b.mode = *m;
    } else if (key == "zeta") b.zeta = parse_angle(value);
    else if (key == "eta_p") b.eta_p = parse_angle(value);
    else if (key == "theta") b.theta = parse_angle(value);
    else if (key == "xi") b.xi = parse_angle(value);
    else if (key == "phi") b.phi = parse_angle(value);
    else if (key == "psi") b.psi = parse_angle(value);
    else if (key == "global_phase") b.global_phase = parse_angle(value);
    else if (key == "intensity_i0") b.intensity_i0 = parse_real(value);
    else if (key == "delta_f") b.delta_f = parse_real(value);
    else if (key == "resolving_time") b.resolving_time = parse_real(value);
    else if (key == "mean_photon_number") b.mean_photon_number = parse_real(value);
    else if (key == "scan.variable") {
        const auto v = parse_variable(value);
        if (!v) bad_value("scan variable (expected zeta|xi|phi|psi)", value);
        scan().variable = *v;
    } else if (key == "scan.start") scan().start = parse_angle(value);
    else if (key == "scan.stop") scan().stop = parse_angle(value);
    else if (key == "scan.steps") {
        const std::int64_t n = parse_integer(value);
        if (n < 0 || n > 100'000'000) bad_value("scan steps", value);
        scan().steps = static_cast<int>(n);
    } else if (key == "scan.overlay") {
        ScanSpec& s = scan();
        s.overlay_values.clear();
        if (!value.empty())
            for (std::string_view item : split_list(value)) s.overlay_values.push_back(parse_angle(item));
    } else if (key == "seed") cfg.seed = parse_u64(value);
    else if (key == "output") cfg.output_path = std::string(value);
    else if (key == "format") {
        const auto f = parse_format(value);
        if (!f) bad_value("format (expected csv|json-summary)", value);
        cfg.format = *f;
    } else if (key == "subcommand") {
        const auto s = parse_subcommand(value);
        if (!s) bad_value("subcommand", value);
        cfg.subcommand = *s;
    } else if (key == "trials") cfg.trials = parse_integer(value);
    else if (key == "chsh.grid_step") cfg.grid_step = parse_angle(value);
    else if (key == "chsh.a") cfg.chsh.a = parse_angle(value);
    else if (key == "chsh.a_prime") cfg.chsh.a_prime = parse_angle(value);
    else if (key == "chsh.b") cfg.chsh.b = parse_angle(value);
    else if (key == "chsh.b_prime") cfg.chsh.b_prime = parse_angle(value);
    else fail(ErrorCode::Config, "unknown key '" + std::string(key) + "'");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        ++line_no;
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            fail(ErrorCode::Config, "line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        try {
            apply_key(cfg, key, value);
        } catch (const Error& e) {
            fail(ErrorCode::Config, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

void validate(const RunConfig& cfg) {
    cfg.bench.validate();
    if (!cfg.bench.heterodyne_resolvable())
        fail(ErrorCode::GateInoperative, "resolving_time must be shorter than 1/delta_f");
    if (cfg.scan) cfg.scan->validate();
    if (cfg.trials <= 0) fail(ErrorCode::InvalidParameter, "trials must be > 0");
    if (cfg.subcommand == Subcommand::MonteCarlo && !(cfg.bench.mean_photon_number > 0.0))
        fail(ErrorCode::InvalidParameter, "mean_photon_number must be > 0 for montecarlo");
    if (!(std::isfinite(cfg.grid_step) && cfg.grid_step > 0.0))
        fail(ErrorCode::InvalidParameter, "chsh.grid_step must be > 0");
    if (cfg.grid_step >= std::numbers::pi / 4.0) fail(ErrorCode::TooCoarse, "chsh.grid_step must be < pi/4");
    for (double v : {cfg.chsh.a, cfg.chsh.a_prime, cfg.chsh.b, cfg.chsh.b_prime})
        if (!std::isfinite(v)) fail(ErrorCode::InvalidParameter, "chsh settings must be finite");
}

std::string render(const RunConfig& cfg) {
    std::ostringstream out;
    const BenchConfig& b = cfg.bench;
    auto put = [&](std::string_view key, double v) { out << key << " = " << format_double(v) << '\n'; };
    out << "subcommand = " << to_string(cfg.subcommand) << '\n';
    out << "mode = " << to_string(b.mode) << '\n';
    put("zeta", b.zeta);
    put("eta_p", b.eta_p);
    put("theta", b.theta);
    put("xi", b.xi);
    put("phi", b.phi);
    put("psi", b.psi);
    put("global_phase", b.global_phase);
    put("intensity_i0", b.intensity_i0);
    put("delta_f", b.delta_f);
    put("resolving_time", b.resolving_time);
    put("mean_photon_number", b.mean_photon_number);
    if (cfg.scan) {
        const ScanSpec& s = *cfg.scan;
        out << "scan.variable = " << to_string(s.variable) << '\n';
        put("scan.start", s.start);
        put("scan.stop", s.stop);
        out << "scan.steps = " << s.steps << '\n';
        out << "scan.overlay = ";
        for (std::size_t k = 0; k < s.overlay_values.size(); ++k)
            out << (k ? ", " : "") << format_double(s.overlay_values[k]);
        out << '\n';
    }
    if (cfg.seed) out << "seed = " << *cfg.seed << '\n';
    if (!cfg.output_path.empty()) out << "output = " << cfg.output_path << '\n';
    out << "format = " << to_string(cfg.format) << '\n';
    out << "trials = " << cfg.trials << '\n';
    put("chsh.grid_step", cfg.grid_step);
    put("chsh.a", cfg.chsh.a);
    put("chsh.a_prime", cfg.chsh.a_prime);
    put("chsh.b", cfg.chsh.b);
    put("chsh.b_prime", cfg.chsh.b_prime);
    return out.str();
}

}  // namespace fransim
