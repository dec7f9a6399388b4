#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fransim/chsh.hpp"
#include "fransim/error.hpp"

using namespace fransim;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force CHSH maximum of E = -sin 2(a+b) on a coarse grid, all sign
// arrangements; no library code involved.
double brute_force_max(int n) {
    double best = -10.0;
    auto e = [](double a, double b) { return -std::sin(2 * (a + b)); };
    for (int i = 0; i < n; ++i)
        for (int ip = 0; ip < n; ++ip)
            for (int j = 0; j < n; ++j)
                for (int jp = 0; jp < n; ++jp) {
                    const double a = kPi * i / n, ap = kPi * ip / n, b = kPi * j / n, bp = kPi * jp / n;
                    const double v[4] = {e(a, b), e(a, bp), e(ap, b), e(ap, bp)};
                    const double total = v[0] + v[1] + v[2] + v[3];
                    for (double x : v) best = std::max(best, total - 2 * x);
                }
    return best;
}

}  // namespace

TEST_CASE("canonical settings reach 2 sqrt 2") {
    const ChshResult r = chsh_S({0.0, kPi / 4, -kPi / 8, -3 * kPi / 8}, BenchConfig{});
    CHECK(std::abs(r.s - 2 * std::sqrt(2.0)) < 1e-12);
    CHECK(r.sign == SignArrangement::MinusApB);
    CHECK(std::abs(r.correlations[0] - std::sqrt(0.5)) < 1e-12);
    CHECK(std::abs(r.correlations[2] + std::sqrt(0.5)) < 1e-12);
    CHECK(brute_force_max(16) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("degenerate settings cannot violate") {
    const BenchConfig cfg;
    for (double a : {0.0, 0.3, 1.2})
        for (double b : {-0.4, 0.7}) {
            const ChshResult r = chsh_S({a, a, b, b}, cfg);
            CHECK(std::abs(std::abs(r.s) - 2 * std::abs(correlation_E(a, b, cfg))) < 1e-12);
            CHECK(std::abs(r.s) <= 2.0 + 1e-12);
        }
}

TEST_CASE("paper-mode S never exceeds the Tsirelson ceiling") {
    const BenchConfig cfg;
    for (int k = 0; k < 400; ++k) {
        const double a = 0.37 * k, ap = 1.1 * k + 0.2, b = -0.53 * k, bp = 0.71 * k - 1.0;
        CHECK(std::abs(chsh_S({a, ap, b, bp}, cfg).s) <= kTsirelson + 1e-9);
    }
}

TEST_CASE("optimizer finds 2 sqrt 2 in paper mode") {
    const ChshResult r = optimize_chsh(BenchConfig{}, kPi / 32);
    CHECK(std::abs(r.s - kTsirelson) <= 1e-6);
    // off-grid start still converges
    const ChshResult coarse = optimize_chsh(BenchConfig{}, 0.3);
    CHECK(std::abs(coarse.s - kTsirelson) <= 1e-6);
}

TEST_CASE("optimizer stays classical in strict mode with phi = pi") {
    BenchConfig cfg;
    cfg.mode = CoincidenceMode::Strict;
    cfg.phi = kPi;
    const ChshResult r = optimize_chsh(cfg, kPi / 32);
    CHECK(r.s <= 2.0 + 1e-6);
}

TEST_CASE("serial and tabulated grid kernels pick the same optimum") {
    for (CoincidenceMode mode : {CoincidenceMode::Paper, CoincidenceMode::Strict}) {
        BenchConfig cfg;
        cfg.mode = mode;
        cfg.phi = mode == CoincidenceMode::Strict ? kPi : 0.0;
        const ChshGridOptimum s = chsh_grid_search(cfg, kPi / 12, Execution::Serial);
        const ChshGridOptimum p = chsh_grid_search(cfg, kPi / 12, Execution::Parallel);
        CHECK(s.index == p.index);
        CHECK(s.s == p.s);
    }
}

TEST_CASE("grid step limits") {
    try {
        optimize_chsh(BenchConfig{}, kPi / 4);
        FAIL("expected too-coarse");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooCoarse);
    }
    try {
        optimize_chsh(BenchConfig{}, 0.0);
        FAIL("expected invalid parameter");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidParameter);
    }
}
