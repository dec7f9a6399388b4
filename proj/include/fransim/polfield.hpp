#pragma once

// Jones calculus over the four polarization-frequency modes of the bench.
//
// A field carries one complex amplitude per mode {H f+, V f+, H f-, V f-}.
// Every optical element acts on the (H, V) subspace of each frequency tag
// independently; no element converts frequency.

#include <array>
#include <complex>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

namespace fransim {

using Complex = std::complex<double>;

enum class Polarization : std::uint8_t { H = 0, V = 1 };
enum class Frequency : std::uint8_t { Plus = 0, Minus = 1 };

struct ModeLabel {
    Polarization polarization = Polarization::H;
    Frequency frequency = Frequency::Plus;

    constexpr std::size_t index() const noexcept {
        return 2 * static_cast<std::size_t>(frequency) + static_cast<std::size_t>(polarization);
    }
    friend constexpr bool operator==(ModeLabel, ModeLabel) = default;
};

inline constexpr ModeLabel kHPlus{Polarization::H, Frequency::Plus};
inline constexpr ModeLabel kVPlus{Polarization::V, Frequency::Plus};
inline constexpr ModeLabel kHMinus{Polarization::H, Frequency::Minus};
inline constexpr ModeLabel kVMinus{Polarization::V, Frequency::Minus};
inline constexpr std::array<ModeLabel, 4> kAllModes{kHPlus, kVPlus, kHMinus, kVMinus};

enum class Party : std::uint8_t { Source, Alice, Bob };

// Where a field lives on the bench. Elements that combine two fields require
// both to belong to the same party.
struct Port {
    Party party = Party::Source;
    std::string name;

    friend bool operator==(const Port&, const Port&) = default;
};

class FieldState {
public:
    using Amplitudes = std::array<Complex, 4>;

    FieldState() = default;
    // Throws InvalidParameter if any amplitude is not finite.
    FieldState(Port port, const Amplitudes& amplitudes);

    const Port& port() const noexcept { return port_; }
    const Amplitudes& amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](ModeLabel mode) const noexcept { return amplitudes_[mode.index()]; }

    // Squared modulus summed over all modes.
    double intensity() const noexcept;
    double intensity(Frequency tag) const noexcept;

    FieldState with_port(Port port) const;

private:
    Port port_;
    Amplitudes amplitudes_{};
};

// Largest mode-wise |a - b|.
double max_abs_diff(const FieldState& a, const FieldState& b) noexcept;

// 2x2 complex matrix on the (H, V) subspace, row-major.
class JonesMatrix {
public:
    constexpr JonesMatrix() = default;
    constexpr JonesMatrix(Complex hh, Complex hv, Complex vh, Complex vv)
        : e_{hh, hv, vh, vv} {}

    static constexpr JonesMatrix identity() { return {1.0, 0.0, 0.0, 1.0}; }

    constexpr Complex operator()(std::size_t row, std::size_t col) const { return e_[2 * row + col]; }

    JonesMatrix adjoint() const;
    JonesMatrix operator*(const JonesMatrix& rhs) const;
    JonesMatrix operator*(Complex s) const;
    JonesMatrix operator-(const JonesMatrix& rhs) const;

    // max-norm over entries
    double max_abs() const;
    Complex trace() const { return e_[0] + e_[3]; }

private:
    std::array<Complex, 4> e_{};
};

// Element matrices; angles in radians from horizontal, counter-clockwise.
// All throw InvalidParameter on a non-finite angle.
JonesMatrix hwp(double angle);
JonesMatrix qwp(double angle);
JonesMatrix polarizer(double angle);

enum class TagSelect : std::uint8_t { Both, Plus, Minus };

// Applies `m` to the polarization subspace of the selected frequency tags.
// Unselected tags are copied bit-for-bit.
FieldState apply(const JonesMatrix& m, const FieldState& in, TagSelect tags = TagSelect::Both);

// 50:50 non-polarizing splitter, reflected port picks up a factor i:
//   out_c = (a + i b)/sqrt2,  out_d = (i a + b)/sqrt2.
// Throws Topology if the inputs belong to different parties.
std::pair<FieldState, FieldState> beamsplitter(const FieldState& in_a, const FieldState& in_b);

// H modes transmit unchanged; V modes reflect with factor i.
std::pair<FieldState, FieldState> pbs(const FieldState& in);

// Multiplies the modes selected by `which` by exp(i*phase).
template <std::predicate<ModeLabel> Pred>
FieldState phase_shift(const FieldState& in, double phase, Pred which);

FieldState phase_shift_all(const FieldState& in, double phase);

namespace detail {
void require_finite(double value, const char* what);
}

template <std::predicate<ModeLabel> Pred>
FieldState phase_shift(const FieldState& in, double phase, Pred which) {
    detail::require_finite(phase, "phase");
    const Complex factor = std::polar(1.0, phase);
    FieldState::Amplitudes out = in.amplitudes();
    for (ModeLabel mode : kAllModes) {
        if (which(mode)) out[mode.index()] *= factor;
    }
    return FieldState(in.port(), out);
}

inline auto only(Polarization p) {
    return [p](ModeLabel m) { return m.polarization == p; };
}

inline auto only(Frequency f) {
    return [f](ModeLabel m) { return m.frequency == f; };
}

}  // namespace fransim
