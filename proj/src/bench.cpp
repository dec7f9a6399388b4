#include "fransim/bench.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fransim/error.hpp"

namespace fransim {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidParameter, std::string(name) + " must be finite");
}

FieldState tagged(Port port, Frequency tag, Complex h, Complex v) {
    FieldState::Amplitudes amps{};
    amps[ModeLabel{Polarization::H, tag}.index()] = h;
    amps[ModeLabel{Polarization::V, tag}.index()] = v;
    return FieldState(std::move(port), amps);
}

}  // namespace

void BenchConfig::validate() const {
    require_finite(zeta, "zeta");
    require_finite(eta_p, "eta_p");
    require_finite(theta, "theta");
    require_finite(xi, "xi");
    require_finite(phi, "phi");
    require_finite(psi, "psi");
    require_finite(global_phase, "global_phase");
    if (!(std::isfinite(intensity_i0) && intensity_i0 >= 0.0))
        fail(ErrorCode::InvalidParameter, "intensity_i0 must be finite and >= 0");
    if (!(std::isfinite(delta_f) && delta_f > 0.0))
        fail(ErrorCode::InvalidParameter, "delta_f must be finite and > 0");
    if (!(std::isfinite(resolving_time) && resolving_time > 0.0))
        fail(ErrorCode::InvalidParameter, "resolving_time must be finite and > 0");
    if (!(std::isfinite(mean_photon_number) && mean_photon_number >= 0.0))
        fail(ErrorCode::InvalidParameter, "mean_photon_number must be finite and >= 0");
}

DetectorRow detector_row(const BenchConfig& cfg, int detector) {
    switch (detector) {
    case 1: return {Frequency::Plus, cfg.zeta, cfg.phi, -1.0};
    case 2: return {Frequency::Plus, cfg.eta_p, cfg.phi, +1.0};
    case 3: return {Frequency::Minus, cfg.theta, cfg.psi, -1.0};
    case 4: return {Frequency::Minus, cfg.xi, cfg.psi, +1.0};
    default: fail(ErrorCode::InvalidParameter, "detector index must be 1..4, got " + std::to_string(detector));
    }
}

const FieldState& DetectorPlane::at(int detector) const {
    if (detector < 1 || detector > 4)
        fail(ErrorCode::InvalidParameter, "detector index must be 1..4, got " + std::to_string(detector));
    return fields[static_cast<std::size_t>(detector - 1)];
}

MziOutputs closed_form_pre_polarizer(const BenchConfig& cfg) {
    cfg.validate();
    const double e0 = std::sqrt(cfg.intensity_i0);
    const Complex alice = e0 / std::sqrt(2.0) * std::polar(1.0, cfg.global_phase);
    const Complex bob = e0 / std::sqrt(2.0);
    const Complex ephi = std::polar(1.0, cfg.phi);
    const Complex epsi = std::polar(1.0, cfg.psi);
    return {
        tagged({Party::Alice, "A"}, Frequency::Plus, alice, -alice * ephi),
        tagged({Party::Alice, "B"}, Frequency::Plus, kI * alice, kI * alice * ephi),
        tagged({Party::Bob, "C"}, Frequency::Minus, bob, -bob * epsi),
        tagged({Party::Bob, "D"}, Frequency::Minus, kI * bob, kI * bob * epsi),
    };
}

// Each polarizer leaves the projection of its MZI output onto the pass axis
// (cos a, sin a); the scalar along that axis is the detector row.
DetectorPlane closed_form_detectors(const BenchConfig& cfg) {
    cfg.validate();
    const double e0 = std::sqrt(cfg.intensity_i0);
    DetectorPlane plane;
    for (int k = 1; k <= 4; ++k) {
        const DetectorRow row = detector_row(cfg, k);
        Complex scale = e0 / std::sqrt(2.0);
        if (k <= 2) scale *= std::polar(1.0, cfg.global_phase);
        if (k % 2 == 0) scale *= kI;
        const Complex amp =
            scale * (std::cos(row.angle) + row.sign * std::sin(row.angle) * std::polar(1.0, row.phase));
        const Party party = k <= 2 ? Party::Alice : Party::Bob;
        plane.fields[k - 1] = tagged({party, "D" + std::to_string(k)}, row.tag, amp * std::cos(row.angle),
                                     amp * std::sin(row.angle));
    }
    return plane;
}

// Source amplitudes are calibrated so the element chain lands on the closed-form
// MZI outputs: each party's MZI receives 2*I0, and the V f- photon carries a
// relative phase of pi/2 from the tagging stage.
FieldState source_field(const BenchConfig& cfg) {
    cfg.validate();
    const double s = std::sqrt(2.0 * cfg.intensity_i0);
    FieldState::Amplitudes amps{};
    amps[kHPlus.index()] = s;
    amps[kVMinus.index()] = kI * s;
    return FieldState({Party::Source, "L"}, amps);
}

std::pair<FieldState, FieldState> mzi(const FieldState& in, double phase) {
    if (in.port().party == Party::Source)
        fail(ErrorCode::Topology, "MZI input '" + in.port().name + "' is not routed to Alice or Bob");
    auto [transmitted, reflected] = pbs(in);
    const FieldState delayed = phase_shift(reflected, phase, only(Polarization::V));
    return beamsplitter(transmitted, delayed);
}

MziOutputs propagate_pre_polarizer(const BenchConfig& cfg) {
    const FieldState source = source_field(cfg);
    auto [to_alice, to_bob] = pbs(source);

    // Path-length difference PBS0 -> Alice's MZI.
    FieldState alice = phase_shift_all(to_alice.with_port({Party::Alice, "alice.in"}), cfg.global_phase);
    FieldState bob = to_bob.with_port({Party::Bob, "bob.in"});

    // 22.5 deg HWPs; Bob's beam left PBS0 by reflection, so his plate is
    // mirrored in the beam frame.
    constexpr double kPlate = std::numbers::pi / 8.0;
    alice = apply(hwp(kPlate), alice);
    bob = apply(hwp(-kPlate), bob);

    auto [a, b] = mzi(alice, cfg.phi);
    auto [c, d] = mzi(bob, cfg.psi);
    return {a.with_port({Party::Alice, "A"}), b.with_port({Party::Alice, "B"}), c.with_port({Party::Bob, "C"}),
            d.with_port({Party::Bob, "D"})};
}

DetectorPlane propagate_elementwise(const BenchConfig& cfg) {
    const MziOutputs out = propagate_pre_polarizer(cfg);
    DetectorPlane plane;
    plane.fields[0] = apply(polarizer(cfg.zeta), out.a).with_port({Party::Alice, "D1"});
    plane.fields[1] = apply(polarizer(cfg.eta_p), out.b).with_port({Party::Alice, "D2"});
    plane.fields[2] = apply(polarizer(cfg.theta), out.c).with_port({Party::Bob, "D3"});
    plane.fields[3] = apply(polarizer(cfg.xi), out.d).with_port({Party::Bob, "D4"});
    return plane;
}

}  // namespace fransim
