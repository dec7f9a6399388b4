#include <cmath>
#include <numbers>
#include <sstream>

#include "fransim/error.hpp"
#include "fransim/montecarlo.hpp"
#include "fransim/run.hpp"

namespace fransim {

namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

SelfCheck bounded(std::string name, double worst, double tol) {
    return {std::move(name), worst <= tol, "max deviation " + sci(worst) + " (tol " + sci(tol) + ")"};
}

std::vector<double> angle_grid(int n) {
    std::vector<double> g;
    for (int k = 0; k < n; ++k) g.push_back(-kPi + 2.0 * kPi * (k + 0.37) / n);
    return g;
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
    std::vector<SelfCheck> checks;
    const auto grid = angle_grid(9);

    {
        double worst = 0.0;
        const JonesMatrix id = JonesMatrix::identity();
        for (double a : grid) {
            for (const JonesMatrix& m : {hwp(a), qwp(a)}) worst = std::max(worst, (m.adjoint() * m - id).max_abs());
            const JonesMatrix p = polarizer(a);
            worst = std::max({worst, (p * p - p).max_abs(), (p - p.adjoint()).max_abs()});
        }
        checks.push_back(bounded("element_unitarity_and_projectors", worst, 1e-12));
    }

    {
        double worst = 0.0;
        const FieldState in({Party::Alice, "in"}, {Complex{0.3, -0.1}, Complex{0.2, 0.7}, Complex{-0.5, 0.1}, 0.4});
        for (double a : grid) {
            const FieldState out = apply(hwp(a), in);
            worst = std::max(worst, std::abs(out.intensity() - in.intensity()));
            const auto [c, d] = beamsplitter(in, out);
            worst = std::max(worst, std::abs(c.intensity() + d.intensity() - in.intensity() - out.intensity()));
            const auto [t, r] = pbs(out);
            worst = std::max(worst, std::abs(t.intensity() + r.intensity() - out.intensity()));
        }
        checks.push_back(bounded("intensity_conservation", worst, 1e-12));
    }

    {
        double worst = 0.0;
        const auto g5 = angle_grid(5);
        for (double zeta : g5)
            for (double xi : g5)
                for (double phi : g5)
                    for (double psi : g5) {
                        BenchConfig cfg;
                        cfg.zeta = zeta;
                        cfg.xi = xi;
                        cfg.phi = phi;
                        cfg.psi = psi;
                        cfg.eta_p = 0.3 * zeta - 0.2;
                        cfg.theta = 0.7 * xi + 0.1;
                        const DetectorPlane a = propagate_elementwise(cfg);
                        const DetectorPlane b = closed_form_detectors(cfg);
                        for (int k = 1; k <= 4; ++k) worst = std::max(worst, max_abs_diff(a.at(k), b.at(k)));
                    }
        checks.push_back(bounded("elementwise_matches_closed_form", worst, 1e-12));
    }

    {
        double lo = 1e300, hi = -1e300;
        for (double phi : angle_grid(64)) {
            BenchConfig cfg;
            cfg.phi = phi;
            const double i = propagate_pre_polarizer(cfg).a.intensity();
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
        checks.push_back(bounded("fresnel_arago_no_fringe", hi - lo, 1e-12));
    }

    {
        std::vector<BenchConfig> cfgs;
        for (double z : grid)
            for (double x : grid) {
                BenchConfig c;
                c.zeta = z;
                c.xi = x;
                c.phi = 0.4 * z;
                c.psi = -0.3 * x;
                cfgs.push_back(c);
            }
        const bool ok = symmetry_check_r23_equals_r14(cfgs);
        checks.push_back({"r23_equals_r14", ok, ok ? "all equal" : "mismatch"});
    }

    {
        double lo = 1e300, hi = -1e300;
        for (double a : grid)
            for (double b : grid) {
                const auto r = coincidence_table(with_orthogonal_ports(BenchConfig{}, a, b));
                const double s = r[0] + r[1] + r[2] + r[3];
                lo = std::min(lo, s);
                hi = std::max(hi, s);
            }
        checks.push_back(bounded("normalization_constant", hi - lo, 1e-12));
    }

    {
        BenchConfig cfg;
        cfg.mode = CoincidenceMode::Strict;
        cfg.phi = kPi;
        double worst = 0.0;
        for (double z : grid)
            for (double x : grid) {
                const double zp = 0.5 * z + 0.3, xp = 0.25 - x;
                auto r14 = [&](double zeta, double xi) {
                    BenchConfig c = cfg;
                    c.zeta = zeta;
                    c.xi = xi;
                    return coincidence(DetectorPair::P14, c);
                };
                const double lhs = r14(z, x) * r14(zp, xp);
                const double rhs = r14(z, xp) * r14(zp, x);
                worst = std::max(worst, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300}));
            }
        checks.push_back(bounded("strict_classical_factorizes", worst, 1e-12));
    }

    {
        const ChshResult r = chsh_S({0.0, kPi / 4, -kPi / 8, -3 * kPi / 8}, BenchConfig{});
        checks.push_back(bounded("chsh_canonical_settings", std::abs(r.s - kTsirelson), 1e-12));
        const ChshResult opt = optimize_chsh(BenchConfig{}, kPi / 32);
        checks.push_back(bounded("chsh_optimum_paper_mode", std::abs(opt.s - kTsirelson), 1e-6));
    }

    {
        const McEstimate e = estimate_E(0.0, -kPi / 8, BenchConfig{}, 100'000, 7);
        const double dev = std::abs(e.value - std::sqrt(0.5));
        checks.push_back({"montecarlo_E_within_5_sigma", dev <= 5.0 * e.std_error,
                          "estimate " + sci(e.value) + " +- " + sci(e.std_error)});
    }

    return checks;
}

}  // namespace fransim
