#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "fransim/correlation.hpp"

namespace fransim {

struct ChshSettings {
    double a = 0.0;
    double a_prime = 0.0;
    double b = 0.0;
    double b_prime = 0.0;

    friend bool operator==(const ChshSettings&, const ChshSettings&) = default;
};

// Which of E(a,b), E(a,b'), E(a',b), E(a',b') enters S with a minus sign.
enum class SignArrangement : std::uint8_t { MinusAB = 0, MinusABp = 1, MinusApB = 2, MinusApBp = 3 };

std::string_view to_string(SignArrangement s);

struct ChshResult {
    ChshSettings settings;
    std::array<double, 4> correlations{};  // E(a,b), E(a,b'), E(a',b), E(a',b')
    SignArrangement sign = SignArrangement::MinusAB;
    double s = 0.0;
};

// Picks the one-minus arrangement with the largest |S| (positive S on ties).
ChshResult chsh_from_correlations(const ChshSettings& settings, const std::array<double, 4>& e);

ChshResult chsh_S(const ChshSettings& settings, const BenchConfig& cfg);

// Exhaustive grid over [0, pi)^4 at `grid_step`, then coordinate-descent
// refinement down to a 1e-9 step. Settings where a correlation is undefined
// are skipped. The serial path evaluates every grid point directly and is
// kept as the reference for the tabulated parallel kernel; both return the
// same grid optimum (ties go to the lowest grid index).
//
// Throws TooCoarse for grid_step >= pi/4, InvalidParameter for grid_step <= 0.
ChshResult optimize_chsh(const BenchConfig& cfg, double grid_step, Execution exec = Execution::Parallel);

struct ChshGridOptimum {
    ChshSettings settings;
    double s = 0.0;
    long index = -1;  // flattened (i, i', j, j') grid index
};

// Grid stage only; exposed for testing the two kernels against each other.
ChshGridOptimum chsh_grid_search(const BenchConfig& cfg, double grid_step, Execution exec);

inline constexpr double kTsirelson = 2.8284271247461903;

}  // namespace fransim
