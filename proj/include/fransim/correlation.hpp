#pragma once

// Closed-form observables: local quantum-eraser intensities, coincidence
// products for the four Alice/Bob detector pairs, the normalized correlation
// and fringe scans.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fransim/bench.hpp"

namespace fransim {

enum class Execution : std::uint8_t { Serial, Parallel };

// (I0/2)(1 -/+ sin 2a cos phase), detector 1..4.
double local_intensity(int detector, const BenchConfig& cfg);

// (max - min)/(max + min) of I_k over a full sweep of its local phase.
// Throws UndefinedVisibility when max + min = 0.
double local_visibility(int detector, const BenchConfig& cfg);

// Visibility of a sampled curve; non-finite samples are skipped.
double visibility(std::span<const double> samples);

// Order matches coincidence_table(): R14, R23, R13, R24.
enum class DetectorPair : std::uint8_t { P14 = 0, P23 = 1, P13 = 2, P24 = 3 };
inline constexpr std::array<DetectorPair, 4> kAllPairs{DetectorPair::P14, DetectorPair::P23, DetectorPair::P13,
                                                       DetectorPair::P24};

constexpr int alice_detector(DetectorPair p) { return (p == DetectorPair::P14 || p == DetectorPair::P13) ? 1 : 2; }
constexpr int bob_detector(DetectorPair p) { return (p == DetectorPair::P14 || p == DetectorPair::P24) ? 4 : 3; }
// Throws InvalidParameter for anything but 14, 23, 13, 24.
DetectorPair pair_from_detectors(int alice, int bob);

// Coincidence rate R_ij in units of I0^2.
//
// Strict mode multiplies the two detector rows literally, which makes
// R_ij = I_i * I_j. Paper mode sums the four basis products of the two rows
// with the fixed sign pattern (+, -, -, -) on (HH, HV, VH, VV):
//   cos a cos b - cos a sin b e^{i psi} - sin a cos b e^{i phi} - sin a sin b e^{i(phi+psi)}
// which at phi = psi = 0 is cos(a+b) - sin(a+b).
double coincidence(DetectorPair pair, const BenchConfig& cfg);
std::array<double, 4> coincidence_table(const BenchConfig& cfg);

// Evaluates R23 == R14 after setting eta_p = zeta and theta = xi on each cfg.
// Returns false as soon as one config differs by more than `tol`.
bool symmetry_check_r23_equals_r14(std::span<const BenchConfig> cfgs, double tol = 1e-12);

// Two-channel analyzers: zeta = a, eta_p = a + pi/2, xi = b, theta = b + pi/2.
BenchConfig with_orthogonal_ports(BenchConfig cfg, double a, double b);

// (R14 + R23 - R13 - R24) / sum(R) under the orthogonal-port convention.
// Paper mode at phi = psi = 0 gives -sin 2(a + b).
// Throws DegenerateNormalization when the denominator vanishes.
double correlation_E(double a, double b, const BenchConfig& cfg);

// Same as correlation_E but evaluated on cfg as given (no port convention).
double normalized_correlation(const BenchConfig& cfg);

struct CorrelationRecord {
    BenchConfig cfg;
    double sweep_value = 0.0;
    double overlay_value = 0.0;
    std::array<double, 4> intensities{};  // I1..I4
    std::array<double, 4> rates{};        // R14, R23, R13, R24 (units of I0^2)
    std::array<double, 4> normalized{};   // R / sum(R); NaN where sum(R) vanishes
    double e_corr = 0.0;                  // NaN where sum(R) vanishes
};

CorrelationRecord evaluate_record(const BenchConfig& cfg);

enum class ScanVariable : std::uint8_t { Zeta, Xi, Phi, Psi };

struct ScanSpec {
    ScanVariable variable = ScanVariable::Zeta;
    double start = 0.0;
    double stop = 0.0;
    int steps = 720;
    // Values of the overlay variable (xi, or zeta when sweeping xi); one curve
    // each. Empty means a single curve at the base config's value.
    std::vector<double> overlay_values;

    // Throws InvalidScan on steps < 2, start >= stop or non-finite bounds.
    void validate() const;
    // start + k (stop - start)/steps, k = 0..steps-1 (stop excluded).
    double sample(int k) const;

    friend bool operator==(const ScanSpec&, const ScanSpec&) = default;
};

ScanVariable overlay_variable(ScanVariable swept);
void set_variable(BenchConfig& cfg, ScanVariable v, double value);
double get_variable(const BenchConfig& cfg, ScanVariable v);

// One record per (overlay, step), overlay-major. Every point uses the
// orthogonal-port convention so E_corr is defined.
std::vector<CorrelationRecord> scan_fringe(const BenchConfig& base, const ScanSpec& spec,
                                           Execution exec = Execution::Parallel);

struct LocalFringePoint {
    double phase = 0.0;
    std::array<double, 4> intensities{};
};

// Sweeps phi = psi = phase over [start, stop) at `steps` points.
std::vector<LocalFringePoint> scan_local(const BenchConfig& base, double start, double stop, int steps);

struct CurveSummary {
    double overlay_value = 0.0;
    double r14_min = 0.0;           // units of I0^2
    double r14_max = 0.0;
    double r14_visibility = 0.0;     // raw coincidence fringe; NaN if all zero
    double correlation_visibility = 0.0;  // fringe of R14 / sum(R); NaN if undefined
    bool bell_violating = false;     // correlation_visibility > 1/sqrt2
};

// Splits an overlay-major scan into curves of `steps` records each.
std::vector<CurveSummary> summarize_curves(std::span<const CorrelationRecord> records, int steps);

inline constexpr double kBellVisibility = 0.70710678118654752440;

}  // namespace fransim
