#pragma once

// Bench topology: frequency-tagged source -> PBS0 -> per-party HWP at 22.5 deg
// -> polarization-split MZI with PZT phase -> output polarizers -> D1..D4.
// D1/D2 are Alice's MZI outputs (f+ content), D3/D4 are Bob's (f- content).

#include <array>
#include <cstdint>

#include "fransim/polfield.hpp"

namespace fransim {

enum class CoincidenceMode : std::uint8_t { Paper, Strict };

struct BenchConfig {
    // Polarizer angles at detectors 1..4, radians.
    double zeta = 0.0;
    double eta_p = 0.0;
    double theta = 0.0;
    double xi = 0.0;
    // MZI phases (Alice, Bob).
    double phi = 0.0;
    double psi = 0.0;
    // Common phase on Alice's path after PBS0; never observable.
    double global_phase = 0.0;
    double intensity_i0 = 1.0;
    double delta_f = 1.0e8;         // f+ - f-, Hz
    double resolving_time = 1.0e-9; // detector resolution, s
    CoincidenceMode mode = CoincidenceMode::Paper;
    double mean_photon_number = 0.04;

    // Throws InvalidParameter on non-finite angles, negative I0, non-positive
    // delta_f / resolving_time, or negative mean photon number.
    void validate() const;
    // Heterodyne precondition: resolving time shorter than the beat period.
    bool heterodyne_resolvable() const noexcept { return resolving_time * delta_f < 1.0; }

    friend bool operator==(const BenchConfig&, const BenchConfig&) = default;
};

// The quantity each detector sees: amplitude row (cos a + sign * sin a * e^{i phase})
// for its frequency tag, polarizer angle and local MZI phase.
struct DetectorRow {
    Frequency tag;
    double angle;
    double phase;
    double sign;  // -1 on D1, D3; +1 on D2, D4
};

// Throws InvalidParameter unless 1 <= detector <= 4.
DetectorRow detector_row(const BenchConfig& cfg, int detector);

struct MziOutputs {
    FieldState a, b, c, d;  // Alice (A, B), Bob (C, D)
};

struct DetectorPlane {
    std::array<FieldState, 4> fields;  // D1..D4

    const FieldState& at(int detector) const;
};

MziOutputs closed_form_pre_polarizer(const BenchConfig& cfg);
DetectorPlane closed_form_detectors(const BenchConfig& cfg);

// Source preparation (AOM pair + QWP already applied): H f+ and V f- photons.
FieldState source_field(const BenchConfig& cfg);

// One noninterfering MZI: PBS split, phase on the reflected (V) arm, 50:50
// recombination. Throws Topology for a field not assigned to a party.
std::pair<FieldState, FieldState> mzi(const FieldState& in, double phase);

MziOutputs propagate_pre_polarizer(const BenchConfig& cfg);
DetectorPlane propagate_elementwise(const BenchConfig& cfg);

}  // namespace fransim
