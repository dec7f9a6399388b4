#include "fransim/chsh.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fransim/error.hpp"

namespace fransim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Max over the four one-minus arrangements of the signed S.
double best_signed_s(double e_ab, double e_abp, double e_apb, double e_apbp) {
    const double total = e_ab + e_abp + e_apb + e_apbp;
    const double lowest = std::min(std::min(e_ab, e_abp), std::min(e_apb, e_apbp));
    return total - 2.0 * lowest;
}

double e_or_nan(double a, double b, const BenchConfig& cfg) {
    try {
        return correlation_E(a, b, cfg);
    } catch (const Error& err) {
        if (err.code() != ErrorCode::DegenerateNormalization) throw;
        return std::numeric_limits<double>::quiet_NaN();
    }
}

double objective(const ChshSettings& x, const BenchConfig& cfg) {
    const double e_ab = e_or_nan(x.a, x.b, cfg);
    const double e_abp = e_or_nan(x.a, x.b_prime, cfg);
    const double e_apb = e_or_nan(x.a_prime, x.b, cfg);
    const double e_apbp = e_or_nan(x.a_prime, x.b_prime, cfg);
    const double s = best_signed_s(e_ab, e_abp, e_apb, e_apbp);
    return std::isnan(s) ? kNegInf : s;
}

int grid_size(double step) {
    const int n = static_cast<int>(std::ceil(std::numbers::pi / step - 1e-9));
    return n < 1 ? 1 : n;
}

ChshSettings decode(long index, int n, double step) {
    const long j_p = index % n;
    const long j = (index / n) % n;
    const long i_p = (index / (static_cast<long>(n) * n)) % n;
    const long i = index / (static_cast<long>(n) * n * n);
    return {static_cast<double>(i) * step, static_cast<double>(i_p) * step, static_cast<double>(j) * step,
            static_cast<double>(j_p) * step};
}

void check_step(double grid_step) {
    if (!(std::isfinite(grid_step) && grid_step > 0.0))
        fail(ErrorCode::InvalidParameter, "grid_step must be finite and > 0");
    if (grid_step >= std::numbers::pi / 4.0) fail(ErrorCode::TooCoarse, "grid_step must be < pi/4");
}

}  // namespace

std::string_view to_string(SignArrangement s) {
    switch (s) {
    case SignArrangement::MinusAB: return "minus_ab";
    case SignArrangement::MinusABp: return "minus_abp";
    case SignArrangement::MinusApB: return "minus_apb";
    case SignArrangement::MinusApBp: return "minus_apbp";
    }
    return "unknown";
}

ChshResult chsh_from_correlations(const ChshSettings& settings, const std::array<double, 4>& e) {
    ChshResult out;
    out.settings = settings;
    out.correlations = e;
    const double total = e[0] + e[1] + e[2] + e[3];
    bool first = true;
    for (std::size_t k = 0; k < 4; ++k) {
        const double s = total - 2.0 * e[k];
        const bool better = std::abs(s) > std::abs(out.s) || (std::abs(s) == std::abs(out.s) && s > out.s);
        if (first || better) {
            out.s = s;
            out.sign = static_cast<SignArrangement>(k);
            first = false;
        }
    }
    return out;
}

ChshResult chsh_S(const ChshSettings& x, const BenchConfig& cfg) {
    return chsh_from_correlations(x, {correlation_E(x.a, x.b, cfg), correlation_E(x.a, x.b_prime, cfg),
                                      correlation_E(x.a_prime, x.b, cfg), correlation_E(x.a_prime, x.b_prime, cfg)});
}

ChshGridOptimum chsh_grid_search(const BenchConfig& cfg, double grid_step, Execution exec) {
    cfg.validate();
    check_step(grid_step);
    const int n = grid_size(grid_step);
    const long total = static_cast<long>(n) * n * n * n;

    ChshGridOptimum best;
    best.s = kNegInf;

    if (exec == Execution::Serial) {
        for (long idx = 0; idx < total; ++idx) {
            const ChshSettings x = decode(idx, n, grid_step);
            const double s = objective(x, cfg);
            if (s > best.s) best = {x, s, idx};
        }
        if (best.index < 0) fail(ErrorCode::DegenerateNormalization, "no grid point has a defined correlation");
        return best;
    }

    // E(alice_i, bob_j) table; the grid stage then only combines entries.
    std::vector<double> table(static_cast<std::size_t>(n) * n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            table[static_cast<std::size_t>(i) * n + j] = e_or_nan(i * grid_step, j * grid_step, cfg);

    const long nn = static_cast<long>(n) * n;
#pragma omp parallel
    {
        double local_s = kNegInf;
        long local_idx = -1;
#pragma omp for schedule(static) nowait
        for (long outer = 0; outer < nn; ++outer) {
            const long i = outer / n;
            const long i_p = outer % n;
            for (long j = 0; j < n; ++j) {
                for (long j_p = 0; j_p < n; ++j_p) {
                    double s = best_signed_s(table[i * n + j], table[i * n + j_p], table[i_p * n + j],
                                             table[i_p * n + j_p]);
                    if (std::isnan(s)) s = kNegInf;
                    if (s > local_s) {
                        local_s = s;
                        local_idx = (outer * n + j) * n + j_p;
                    }
                }
            }
        }
#pragma omp critical
        {
            if (local_idx >= 0 && (local_s > best.s || (local_s == best.s && local_idx < best.index))) {
                best.s = local_s;
                best.index = local_idx;
            }
        }
    }
    if (best.index < 0) fail(ErrorCode::DegenerateNormalization, "no grid point has a defined correlation");
    best.settings = decode(best.index, n, grid_step);
    return best;
}

ChshResult optimize_chsh(const BenchConfig& cfg, double grid_step, Execution exec) {
    const ChshGridOptimum grid = chsh_grid_search(cfg, grid_step, exec);

    ChshSettings x = grid.settings;
    double fx = objective(x, cfg);
    double h = grid_step / 2.0;
    while (h > 1e-9) {
        bool improved = false;
        for (double ChshSettings::*coord :
             {&ChshSettings::a, &ChshSettings::a_prime, &ChshSettings::b, &ChshSettings::b_prime}) {
            for (double dir : {1.0, -1.0}) {
                ChshSettings trial = x;
                trial.*coord += dir * h;
                const double ft = objective(trial, cfg);
                if (ft > fx) {
                    x = trial;
                    fx = ft;
                    improved = true;
                }
            }
        }
        if (!improved) h /= 2.0;
    }
    return chsh_S(x, cfg);
}

}  // namespace fransim
