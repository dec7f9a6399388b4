#include "fransim/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fransim/error.hpp"

namespace fransim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Below this fraction of I0^2 the coincidence total is treated as zero.
constexpr double kDegenerateSum = 1e-12;

Complex row_amplitude(const DetectorRow& row) {
    return std::cos(row.angle) + row.sign * std::sin(row.angle) * std::polar(1.0, row.phase);
}

bool degenerate(double sum, double i0) { return !(i0 > 0.0) || sum <= kDegenerateSum * i0 * i0; }

}  // namespace

double local_intensity(int detector, const BenchConfig& cfg) {
    cfg.validate();
    const DetectorRow row = detector_row(cfg, detector);
    return 0.5 * cfg.intensity_i0 * (1.0 + row.sign * std::sin(2.0 * row.angle) * std::cos(row.phase));
}

double visibility(std::span<const double> samples) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : samples) {
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!std::isfinite(lo) || !(hi + lo != 0.0))
        fail(ErrorCode::UndefinedVisibility, "visibility undefined: max + min = 0");
    return (hi - lo) / (hi + lo);
}

double local_visibility(int detector, const BenchConfig& cfg) {
    constexpr int kSamples = 720;
    BenchConfig probe = cfg;
    const bool alice = detector <= 2;
    std::vector<double> samples;
    samples.reserve(kSamples + 2);
    for (int k = 0; k < kSamples; ++k) {
        const double phase = 2.0 * std::numbers::pi * k / kSamples;
        (alice ? probe.phi : probe.psi) = phase;
        samples.push_back(local_intensity(detector, probe));
    }
    // extrema of cos(phase) sit at 0 and pi
    for (double phase : {0.0, std::numbers::pi}) {
        (alice ? probe.phi : probe.psi) = phase;
        samples.push_back(local_intensity(detector, probe));
    }
    return visibility(samples);
}

DetectorPair pair_from_detectors(int alice, int bob) {
    if (alice == 1 && bob == 4) return DetectorPair::P14;
    if (alice == 2 && bob == 3) return DetectorPair::P23;
    if (alice == 1 && bob == 3) return DetectorPair::P13;
    if (alice == 2 && bob == 4) return DetectorPair::P24;
    fail(ErrorCode::InvalidParameter,
         "invalid detector pair " + std::to_string(alice) + std::to_string(bob) + " (expected 14, 23, 13 or 24)");
}

double coincidence(DetectorPair pair, const BenchConfig& cfg) {
    cfg.validate();
    const auto raw = static_cast<unsigned>(pair);
    if (raw > 3) fail(ErrorCode::InvalidParameter, "invalid detector pair id " + std::to_string(raw));
    const DetectorRow alice = detector_row(cfg, alice_detector(pair));
    const DetectorRow bob = detector_row(cfg, bob_detector(pair));
    const double scale = 0.25 * cfg.intensity_i0 * cfg.intensity_i0;

    if (cfg.mode == CoincidenceMode::Strict) return scale * std::norm(row_amplitude(alice) * row_amplitude(bob));

    const double ca = std::cos(alice.angle), sa = std::sin(alice.angle);
    const double cb = std::cos(bob.angle), sb = std::sin(bob.angle);
    const Complex ea = std::polar(1.0, alice.phase);
    const Complex eb = std::polar(1.0, bob.phase);
    const Complex amp = ca * cb - ca * sb * eb - sa * cb * ea - sa * sb * ea * eb;
    return scale * std::norm(amp);
}

std::array<double, 4> coincidence_table(const BenchConfig& cfg) {
    std::array<double, 4> out{};
    for (DetectorPair p : kAllPairs) out[static_cast<std::size_t>(p)] = coincidence(p, cfg);
    return out;
}

bool symmetry_check_r23_equals_r14(std::span<const BenchConfig> cfgs, double tol) {
    for (BenchConfig cfg : cfgs) {
        cfg.eta_p = cfg.zeta;
        cfg.theta = cfg.xi;
        if (std::abs(coincidence(DetectorPair::P23, cfg) - coincidence(DetectorPair::P14, cfg)) > tol) return false;
    }
    return true;
}

BenchConfig with_orthogonal_ports(BenchConfig cfg, double a, double b) {
    cfg.zeta = a;
    cfg.eta_p = a + std::numbers::pi / 2.0;
    cfg.xi = b;
    cfg.theta = b + std::numbers::pi / 2.0;
    return cfg;
}

double normalized_correlation(const BenchConfig& cfg) {
    const auto r = coincidence_table(cfg);
    const double sum = r[0] + r[1] + r[2] + r[3];
    if (degenerate(sum, cfg.intensity_i0))
        fail(ErrorCode::DegenerateNormalization, "coincidence total vanishes; correlation undefined");
    return (r[0] + r[1] - r[2] - r[3]) / sum;
}

double correlation_E(double a, double b, const BenchConfig& cfg) {
    return normalized_correlation(with_orthogonal_ports(cfg, a, b));
}

CorrelationRecord evaluate_record(const BenchConfig& cfg) {
    CorrelationRecord rec;
    rec.cfg = cfg;
    for (int k = 1; k <= 4; ++k) rec.intensities[k - 1] = local_intensity(k, cfg);
    rec.rates = coincidence_table(cfg);
    double sum = 0.0;
    for (double r : rec.rates) sum += r;
    if (degenerate(sum, cfg.intensity_i0)) {
        rec.normalized.fill(kNaN);
        rec.e_corr = kNaN;
    } else {
        for (std::size_t k = 0; k < 4; ++k) rec.normalized[k] = rec.rates[k] / sum;
        rec.e_corr = (rec.rates[0] + rec.rates[1] - rec.rates[2] - rec.rates[3]) / sum;
    }
    return rec;
}

void ScanSpec::validate() const {
    if (!std::isfinite(start) || !std::isfinite(stop)) fail(ErrorCode::InvalidScan, "scan bounds must be finite");
    if (!(start < stop)) fail(ErrorCode::InvalidScan, "scan range is empty (start must be < stop)");
    if (steps < 2) fail(ErrorCode::InvalidScan, "scan needs at least 2 steps");
    for (double v : overlay_values)
        if (!std::isfinite(v)) fail(ErrorCode::InvalidScan, "overlay values must be finite");
}

double ScanSpec::sample(int k) const { return start + (stop - start) * k / steps; }

ScanVariable overlay_variable(ScanVariable swept) {
    return swept == ScanVariable::Xi ? ScanVariable::Zeta : ScanVariable::Xi;
}

void set_variable(BenchConfig& cfg, ScanVariable v, double value) {
    switch (v) {
    case ScanVariable::Zeta: cfg.zeta = value; break;
    case ScanVariable::Xi: cfg.xi = value; break;
    case ScanVariable::Phi: cfg.phi = value; break;
    case ScanVariable::Psi: cfg.psi = value; break;
    }
}

double get_variable(const BenchConfig& cfg, ScanVariable v) {
    switch (v) {
    case ScanVariable::Zeta: return cfg.zeta;
    case ScanVariable::Xi: return cfg.xi;
    case ScanVariable::Phi: return cfg.phi;
    case ScanVariable::Psi: return cfg.psi;
    }
    return 0.0;
}

namespace {

CorrelationRecord scan_point(const BenchConfig& base, const ScanSpec& spec, double overlay, int k) {
    BenchConfig cfg = base;
    set_variable(cfg, overlay_variable(spec.variable), overlay);
    const double x = spec.sample(k);
    set_variable(cfg, spec.variable, x);
    CorrelationRecord rec = evaluate_record(with_orthogonal_ports(cfg, cfg.zeta, cfg.xi));
    rec.sweep_value = x;
    rec.overlay_value = overlay;
    return rec;
}

}  // namespace

std::vector<CorrelationRecord> scan_fringe(const BenchConfig& base, const ScanSpec& spec, Execution exec) {
    base.validate();
    spec.validate();
    std::vector<double> overlays = spec.overlay_values;
    if (overlays.empty()) overlays.push_back(get_variable(base, overlay_variable(spec.variable)));

    const long n_curves = static_cast<long>(overlays.size());
    const long total = n_curves * spec.steps;
    std::vector<CorrelationRecord> out(static_cast<std::size_t>(total));

    if (exec == Execution::Serial) {
        for (long c = 0; c < n_curves; ++c)
            for (int k = 0; k < spec.steps; ++k)
                out[static_cast<std::size_t>(c * spec.steps + k)] = scan_point(base, spec, overlays[c], k);
        return out;
    }

#pragma omp parallel for schedule(static)
    for (long idx = 0; idx < total; ++idx) {
        const long c = idx / spec.steps;
        const int k = static_cast<int>(idx % spec.steps);
        out[static_cast<std::size_t>(idx)] = scan_point(base, spec, overlays[static_cast<std::size_t>(c)], k);
    }
    return out;
}

std::vector<LocalFringePoint> scan_local(const BenchConfig& base, double start, double stop, int steps) {
    ScanSpec range;
    range.start = start;
    range.stop = stop;
    range.steps = steps;
    range.validate();
    std::vector<LocalFringePoint> out(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        BenchConfig cfg = base;
        cfg.phi = cfg.psi = range.sample(k);
        out[k].phase = cfg.phi;
        for (int d = 1; d <= 4; ++d) out[k].intensities[d - 1] = local_intensity(d, cfg);
    }
    return out;
}

namespace {

double visibility_or_nan(std::span<const double> samples) {
    try {
        return visibility(samples);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::UndefinedVisibility) throw;
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

std::vector<CurveSummary> summarize_curves(std::span<const CorrelationRecord> records, int steps) {
    if (steps < 1 || records.size() % static_cast<std::size_t>(steps) != 0)
        fail(ErrorCode::InvalidScan, "record count is not a multiple of the curve length");
    std::vector<CurveSummary> out;
    std::vector<double> raw(static_cast<std::size_t>(steps)), norm(static_cast<std::size_t>(steps));
    for (std::size_t first = 0; first < records.size(); first += static_cast<std::size_t>(steps)) {
        for (int k = 0; k < steps; ++k) {
            raw[k] = records[first + k].rates[0];
            norm[k] = records[first + k].normalized[0];
        }
        CurveSummary s;
        s.overlay_value = records[first].overlay_value;
        s.r14_min = *std::min_element(raw.begin(), raw.end());
        s.r14_max = *std::max_element(raw.begin(), raw.end());
        s.r14_visibility = visibility_or_nan(raw);
        // A curve whose normalization vanishes everywhere carries no
        // correlation, so it cannot be flagged.
        s.correlation_visibility = visibility_or_nan(norm);
        s.bell_violating = s.correlation_visibility > kBellVisibility;
        out.push_back(s);
    }
    return out;
}

}  // namespace fransim
