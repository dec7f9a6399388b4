#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fransim/error.hpp"
#include "fransim/polfield.hpp"

using namespace fransim;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-12;
const double kR = std::sqrt(0.5);
const Complex kI{0.0, 1.0};

bool near(const JonesMatrix& a, const JonesMatrix& b, double tol = kTol) { return (a - b).max_abs() <= tol; }

FieldState field(Complex hp, Complex vp, Complex hm, Complex vm, Party party = Party::Alice) {
    return FieldState({party, "f"}, {hp, vp, hm, vm});
}

// Equal up to a global phase: |<a, b>| = |a||b|.
bool equal_up_to_phase(const JonesMatrix& a, const JonesMatrix& b) {
    Complex ratio = 0.0;
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c)
            if (std::abs(b(r, c)) > 1e-9) ratio = a(r, c) / b(r, c);
    return std::abs(std::abs(ratio) - 1.0) < kTol && near(a, b * ratio);
}

}  // namespace

TEST_CASE("mode labels are the four polarization-frequency pairs") {
    CHECK(kAllModes.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) CHECK(kAllModes[k].index() == k);
    CHECK(kHPlus == ModeLabel{Polarization::H, Frequency::Plus});
    CHECK_FALSE(kHPlus == kHMinus);
}

TEST_CASE("hwp examples") {
    CHECK(near(hwp(0.0), {1.0, 0.0, 0.0, -1.0}));
    CHECK(near(hwp(kPi / 8), {kR, kR, kR, -kR}));
    CHECK(near(hwp(kPi / 4), {0.0, 1.0, 1.0, 0.0}));

    const FieldState h = field(1.0, 0.0, 0.0, 0.0);
    const FieldState out = apply(hwp(kPi / 8), h);
    CHECK(std::abs(out[kHPlus] - kR) < kTol);
    CHECK(std::abs(out[kVPlus] - kR) < kTol);
}

TEST_CASE("qwp examples") {
    CHECK(equal_up_to_phase(qwp(0.0), {1.0, 0.0, 0.0, kI}));
    CHECK(equal_up_to_phase(qwp(kPi / 4) * qwp(kPi / 4), hwp(kPi / 4)));

    const FieldState h = field(1.0, 0.0, 0.0, 0.0);
    const FieldState twice = apply(qwp(0.0), apply(qwp(0.0), h));
    CHECK(max_abs_diff(twice, h) < kTol);
}

TEST_CASE("polarizer examples") {
    const FieldState diag = field(kR, kR, 0.0, 0.0);
    const FieldState a = apply(polarizer(0.0), diag);
    CHECK(max_abs_diff(a, field(kR, 0.0, 0.0, 0.0)) < kTol);

    const FieldState h = field(1.0, 0.0, 0.0, 0.0);
    CHECK(max_abs_diff(apply(polarizer(kPi / 4), h), field(0.5, 0.5, 0.0, 0.0)) < kTol);
    CHECK(apply(polarizer(kPi / 2), h).intensity() < kTol);
}

TEST_CASE("element matrices satisfy unitarity and projector invariants") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
    const JonesMatrix id = JonesMatrix::identity();
    for (int trial = 0; trial < 200; ++trial) {
        const double a = angle(rng);
        const JonesMatrix h = hwp(a), q = qwp(a), p = polarizer(a);
        CHECK((h.adjoint() * h - id).max_abs() <= kTol);
        CHECK((h * h - id).max_abs() <= kTol);
        CHECK((q.adjoint() * q - id).max_abs() <= kTol);
        const JonesMatrix q4 = q * q * q * q;
        CHECK((q4 - id).max_abs() <= kTol);
        CHECK((p * p - p).max_abs() <= kTol);
        CHECK((p - p.adjoint()).max_abs() <= kTol);
        CHECK(std::abs(p.trace() - 1.0) <= kTol);
    }
}

TEST_CASE("non-finite angles are rejected") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    for (auto make : {&hwp, &qwp, &polarizer}) {
        CHECK_THROWS_AS(make(nan), Error);
        CHECK_THROWS_AS(make(inf), Error);
    }
    try {
        hwp(nan);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidParameter);
    }
    CHECK_THROWS_AS(field(Complex{nan, 0.0}, 0.0, 0.0, 0.0), Error);
}

TEST_CASE("elements never mix frequency tags") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const FieldState in = field({g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)});
        const double a = g(rng);
        for (const JonesMatrix& m : {hwp(a), qwp(a), polarizer(a)}) {
            const FieldState plus_only = apply(m, in, TagSelect::Plus);
            CHECK(plus_only[kHMinus] == in[kHMinus]);
            CHECK(plus_only[kVMinus] == in[kVMinus]);
            const FieldState minus_only = apply(m, in, TagSelect::Minus);
            CHECK(minus_only[kHPlus] == in[kHPlus]);
            CHECK(minus_only[kVPlus] == in[kVPlus]);
            // acting on both tags equals acting on each separately
            CHECK(max_abs_diff(apply(m, in), apply(m, plus_only, TagSelect::Minus)) == 0.0);
        }
    }
}

TEST_CASE("beamsplitter convention and conservation") {
    const FieldState e = field({0.3, 0.4}, {-0.2, 0.1}, 0.5, 0.0);
    const FieldState zero = field(0.0, 0.0, 0.0, 0.0);
    const auto [c, d] = beamsplitter(e, zero);
    for (ModeLabel m : kAllModes) {
        CHECK(std::abs(c[m] - e[m] * kR) < kTol);
        CHECK(std::abs(d[m] - kI * e[m] * kR) < kTol);
    }

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const FieldState a = field({g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)});
        const FieldState b = field({g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)});
        const auto [oc, od] = beamsplitter(a, b);
        CHECK(std::abs(oc.intensity() + od.intensity() - a.intensity() - b.intensity()) <= kTol);
        const auto [t, r] = pbs(a);
        CHECK(std::abs(t.intensity() + r.intensity() - a.intensity()) <= kTol);
        CHECK(apply(polarizer(g(rng)), a).intensity() <= a.intensity() + kTol);
    }
}

TEST_CASE("beamsplitter rejects inputs from different parties") {
    const FieldState a = field(1.0, 0.0, 0.0, 0.0, Party::Alice);
    const FieldState b = field(0.0, 1.0, 0.0, 0.0, Party::Bob);
    try {
        beamsplitter(a, b);
        FAIL("expected topology error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Topology);
    }
}

TEST_CASE("two beamsplitters with an arm phase reproduce the MZI output structure") {
    // Polarization-split MZI: H and V ride separate arms, phi on the V arm.
    const double phi = 0.77;
    const FieldState in = field(kR, kR, 0.0, 0.0);
    const auto [t, r] = pbs(in);
    const auto [a, b] = beamsplitter(t, phase_shift(r, phi, only(Polarization::V)));
    const Complex e = std::polar(1.0, phi);
    CHECK(std::abs(a[kHPlus] - 0.5) < kTol);
    CHECK(std::abs(a[kVPlus] + 0.5 * e) < kTol);
    CHECK(std::abs(b[kHPlus] - 0.5 * kI) < kTol);
    CHECK(std::abs(b[kVPlus] - 0.5 * kI * e) < kTol);

    // Non-polarizing MZI on a pure H+ input: out_c = (1 - e)/2, out_d = i(1 + e)/2.
    const FieldState h = field(1.0, 0.0, 0.0, 0.0);
    const auto [u, l] = beamsplitter(h, field(0.0, 0.0, 0.0, 0.0));
    const auto [c, d] = beamsplitter(u, phase_shift_all(l, phi));
    CHECK(std::abs(c[kHPlus] - 0.5 * (1.0 - e)) < kTol);
    CHECK(std::abs(d[kHPlus] - 0.5 * kI * (1.0 + e)) < kTol);
}

TEST_CASE("pbs routes H through and reflects V with factor i") {
    const auto [t1, r1] = pbs(field(1.0, 0.0, 0.0, 0.0));
    CHECK(max_abs_diff(t1, field(1.0, 0.0, 0.0, 0.0)) == 0.0);
    CHECK(r1.intensity() == 0.0);
    const auto [t2, r2] = pbs(field(0.0, 0.0, 0.0, 1.0));
    CHECK(t2.intensity() == 0.0);
    CHECK(r2[kVMinus] == kI);
    const auto [t3, r3] = pbs(field(kR, 0.0, 0.0, kR));
    CHECK(std::abs(t3.intensity() - 0.5) < kTol);
    CHECK(std::abs(r3.intensity() - 0.5) < kTol);
}

TEST_CASE("phase_shift examples") {
    const FieldState in = field(kR, kR, 0.0, 0.0);
    CHECK(max_abs_diff(phase_shift(in, 0.0, only(Polarization::V)), in) == 0.0);
    CHECK(max_abs_diff(phase_shift(in, kPi, only(Polarization::V)), field(kR, -kR, 0.0, 0.0)) < kTol);
    for (double p : {0.1, 1.3, -2.9, 17.0})
        CHECK(std::abs(phase_shift(in, p, only(Frequency::Plus)).intensity() - in.intensity()) < kTol);
    CHECK_THROWS_AS(phase_shift_all(in, std::numeric_limits<double>::infinity()), Error);
}
