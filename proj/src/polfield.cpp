#include "fransim/polfield.hpp"

#include <algorithm>
#include <cmath>

#include "fransim/error.hpp"

namespace fransim {

namespace detail {
void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) fail(ErrorCode::InvalidParameter, std::string(what) + " must be finite");
}
}  // namespace detail

FieldState::FieldState(Port port, const Amplitudes& amplitudes)
    : port_(std::move(port)), amplitudes_(amplitudes) {
    for (const Complex& a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            fail(ErrorCode::InvalidParameter, "field amplitude is not finite at port '" + port_.name + "'");
    }
}

double FieldState::intensity() const noexcept {
    double sum = 0.0;
    for (const Complex& a : amplitudes_) sum += std::norm(a);
    return sum;
}

double FieldState::intensity(Frequency tag) const noexcept {
    return std::norm((*this)[{Polarization::H, tag}]) + std::norm((*this)[{Polarization::V, tag}]);
}

FieldState FieldState::with_port(Port port) const {
    FieldState out = *this;
    out.port_ = std::move(port);
    return out;
}

double max_abs_diff(const FieldState& a, const FieldState& b) noexcept {
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        worst = std::max(worst, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
    return worst;
}

JonesMatrix JonesMatrix::adjoint() const {
    return {std::conj(e_[0]), std::conj(e_[2]), std::conj(e_[1]), std::conj(e_[3])};
}

JonesMatrix JonesMatrix::operator*(const JonesMatrix& r) const {
    const auto& l = *this;
    return {l(0, 0) * r(0, 0) + l(0, 1) * r(1, 0), l(0, 0) * r(0, 1) + l(0, 1) * r(1, 1),
            l(1, 0) * r(0, 0) + l(1, 1) * r(1, 0), l(1, 0) * r(0, 1) + l(1, 1) * r(1, 1)};
}

JonesMatrix JonesMatrix::operator*(Complex s) const {
    return {e_[0] * s, e_[1] * s, e_[2] * s, e_[3] * s};
}

JonesMatrix JonesMatrix::operator-(const JonesMatrix& r) const {
    return {e_[0] - r.e_[0], e_[1] - r.e_[1], e_[2] - r.e_[2], e_[3] - r.e_[3]};
}

double JonesMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex& x : e_) m = std::max(m, std::abs(x));
    return m;
}

JonesMatrix hwp(double angle) {
    detail::require_finite(angle, "half-wave plate angle");
    const double c = std::cos(2.0 * angle);
    const double s = std::sin(2.0 * angle);
    return {c, s, s, -c};
}

// R(a) diag(1, i) R(-a): fast axis at `angle`, retardation on the slow axis.
JonesMatrix qwp(double angle) {
    detail::require_finite(angle, "quarter-wave plate angle");
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Complex i{0.0, 1.0};
    const Complex off = c * s * (1.0 - i);
    return {c * c + i * s * s, off, off, s * s + i * c * c};
}

JonesMatrix polarizer(double angle) {
    detail::require_finite(angle, "polarizer angle");
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * c, c * s, c * s, s * s};
}

FieldState apply(const JonesMatrix& m, const FieldState& in, TagSelect tags) {
    FieldState::Amplitudes out = in.amplitudes();
    for (Frequency f : {Frequency::Plus, Frequency::Minus}) {
        if (tags == TagSelect::Plus && f != Frequency::Plus) continue;
        if (tags == TagSelect::Minus && f != Frequency::Minus) continue;
        const Complex h = in[{Polarization::H, f}];
        const Complex v = in[{Polarization::V, f}];
        out[ModeLabel{Polarization::H, f}.index()] = m(0, 0) * h + m(0, 1) * v;
        out[ModeLabel{Polarization::V, f}.index()] = m(1, 0) * h + m(1, 1) * v;
    }
    return FieldState(in.port(), out);
}

std::pair<FieldState, FieldState> beamsplitter(const FieldState& in_a, const FieldState& in_b) {
    if (in_a.port().party != in_b.port().party)
        fail(ErrorCode::Topology, "beamsplitter inputs '" + in_a.port().name + "' and '" + in_b.port().name +
                                      "' belong to different parties");
    const double r = 1.0 / std::sqrt(2.0);
    const Complex i{0.0, 1.0};
    FieldState::Amplitudes c{}, d{};
    for (std::size_t k = 0; k < 4; ++k) {
        const Complex a = in_a.amplitudes()[k];
        const Complex b = in_b.amplitudes()[k];
        c[k] = r * (a + i * b);
        d[k] = r * (i * a + b);
    }
    const Party party = in_a.port().party;
    return {FieldState({party, in_a.port().name + ".c"}, c), FieldState({party, in_a.port().name + ".d"}, d)};
}

std::pair<FieldState, FieldState> pbs(const FieldState& in) {
    const Complex i{0.0, 1.0};
    FieldState::Amplitudes t{}, r{};
    for (ModeLabel m : kAllModes) {
        if (m.polarization == Polarization::H)
            t[m.index()] = in[m];
        else
            r[m.index()] = i * in[m];
    }
    const Party party = in.port().party;
    return {FieldState({party, in.port().name + ".t"}, t), FieldState({party, in.port().name + ".r"}, r)};
}

FieldState phase_shift_all(const FieldState& in, double phase) {
    return phase_shift(in, phase, [](ModeLabel) { return true; });
}

}  // namespace fransim
