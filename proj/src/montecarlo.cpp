#include "fransim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fransim/error.hpp"

namespace fransim {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::array<std::pair<int, int>, 4> kPairDetectors{{{1, 4}, {2, 3}, {1, 3}, {2, 4}}};

void require_trials(std::int64_t n) {
    if (n <= 0) fail(ErrorCode::InvalidParameter, "trial count must be > 0, got " + std::to_string(n));
}

void require_gate(const BenchConfig& cfg) {
    if (!cfg.heterodyne_resolvable())
        fail(ErrorCode::GateInoperative,
             "heterodyne gate inoperative: resolving_time must be shorter than 1/delta_f");
}

void require_source(const BenchConfig& cfg) {
    if (!(cfg.mean_photon_number > 0.0))
        fail(ErrorCode::InvalidParameter, "mean_photon_number must be > 0 to generate pairs");
}

double binomial_error(double p, std::int64_t n) {
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t pair_id) noexcept
    : state_(mix64(mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x632BE59BD9B4E019ULL)) ^
             mix64(pair_id + 0xD1B54A32D192ED03ULL)) {}

std::uint64_t TrialRng::next() noexcept {
    state_ += kGolden;
    return mix64(state_);
}

double TrialRng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

ClickModel::ClickModel(const BenchConfig& cfg) {
    const auto r = coincidence_table(cfg);
    const double sum = r[0] + r[1] + r[2] + r[3];
    const double i0 = cfg.intensity_i0;
    if (!(i0 > 0.0) || sum <= 1e-12 * i0 * i0)
        fail(ErrorCode::DegenerateDistribution, "all coincidence rates vanish; joint clicks undefined");
    double acc = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        joint_[k] = r[k] / sum;
        acc += joint_[k];
        cumulative_[k] = acc;
    }
    const double i1 = local_intensity(1, cfg), i2 = local_intensity(2, cfg);
    const double i3 = local_intensity(3, cfg), i4 = local_intensity(4, cfg);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    alice_first_ = i1 + i2 > 0.0 ? i1 / (i1 + i2) : nan;
    bob_first_ = i3 + i4 > 0.0 ? i3 / (i3 + i4) : nan;
}

std::pair<int, int> ClickModel::sample_joint(double u) const noexcept {
    for (std::size_t k = 0; k < 3; ++k)
        if (u < cumulative_[k]) return kPairDetectors[k];
    return kPairDetectors[3];
}

std::pair<int, int> sample_joint_click(const BenchConfig& cfg, TrialRng& rng) {
    return ClickModel(cfg).sample_joint(rng.uniform());
}

bool heterodyne_gate(const TrialOutcome& trial, const BenchConfig& cfg) {
    require_gate(cfg);
    return trial.routing == Routing::Split;
}

TrialOutcome simulate_trial(const BenchConfig& cfg, const ClickModel& model, std::uint64_t seed,
                            std::uint64_t stream, std::uint64_t pair_id) {
    TrialRng rng(seed, stream, pair_id);
    TrialOutcome t;
    t.pair_id = pair_id;

    const std::uint64_t route_bits = rng.next();
    const bool plus_to_bob = (route_bits & 1U) != 0;
    const bool minus_to_bob = (route_bits & 2U) != 0;
    const double mean_gap = cfg.resolving_time / cfg.mean_photon_number;
    t.timestamp = -mean_gap * std::log1p(-rng.uniform());
    const double u = rng.uniform();

    (plus_to_bob ? t.bob_tags : t.alice_tags).plus = true;
    (minus_to_bob ? t.bob_tags : t.alice_tags).minus = true;

    if (plus_to_bob != minus_to_bob) {
        t.routing = Routing::Split;
        const auto [i, j] = model.sample_joint(u);
        t.alice_click = i;
        t.bob_click = j;
    } else if (!plus_to_bob) {
        t.routing = Routing::BothAlice;
        if (!std::isnan(model.alice_first())) t.alice_click = u < model.alice_first() ? 1 : 2;
    } else {
        t.routing = Routing::BothBob;
        if (!std::isnan(model.bob_first())) t.bob_click = u < model.bob_first() ? 3 : 4;
    }
    t.gated = t.routing == Routing::Split && t.alice_click && t.bob_click;
    return t;
}

std::vector<TrialOutcome> generate_trials(const BenchConfig& cfg, std::int64_t n, std::uint64_t seed,
                                          Execution exec) {
    cfg.validate();
    require_trials(n);
    require_source(cfg);
    require_gate(cfg);
    const ClickModel model(cfg);

    std::vector<TrialOutcome> trials(static_cast<std::size_t>(n));
    if (exec == Execution::Serial) {
        for (std::int64_t k = 0; k < n; ++k)
            trials[static_cast<std::size_t>(k)] = simulate_trial(cfg, model, seed, 0, static_cast<std::uint64_t>(k));
    } else {
#pragma omp parallel for schedule(static)
        for (std::int64_t k = 0; k < n; ++k)
            trials[static_cast<std::size_t>(k)] = simulate_trial(cfg, model, seed, 0, static_cast<std::uint64_t>(k));
    }

    double clock = 0.0;
    for (TrialOutcome& t : trials) {
        clock += t.timestamp;
        t.timestamp = clock;
    }
    return trials;
}

std::vector<EventRecord> to_events(std::span<const TrialOutcome> trials) {
    std::vector<EventRecord> events;
    events.reserve(trials.size() * 2);
    for (const TrialOutcome& t : trials) {
        if (t.alice_click) events.push_back({t.timestamp, *t.alice_click, t.pair_id, t.alice_tags});
        if (t.bob_click) events.push_back({t.timestamp, *t.bob_click, t.pair_id, t.bob_tags});
    }
    return events;
}

std::vector<Coincidence> find_coincidences(std::span<const EventRecord> events, double window) {
    std::vector<Coincidence> out;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].detector > 2) continue;
        const double t = events[i].timestamp;
        auto first = std::lower_bound(events.begin(), events.end(), t - window,
                                      [](const EventRecord& e, double v) { return e.timestamp < v; });
        for (auto it = first; it != events.end() && it->timestamp < t + window; ++it) {
            if (it->detector <= 2 || std::abs(it->timestamp - t) >= window) continue;
            out.push_back({i, static_cast<std::size_t>(it - events.begin())});
        }
    }
    return out;
}

ClickCounts& ClickCounts::operator+=(const ClickCounts& rhs) noexcept {
    for (std::size_t k = 0; k < 4; ++k) joint[k] += rhs.joint[k];
    n_trials += rhs.n_trials;
    n_gated += rhs.n_gated;
    return *this;
}

namespace {

void tally(ClickCounts& c, const TrialOutcome& t) {
    ++c.n_trials;
    if (!t.gated) return;
    ++c.n_gated;
    c.joint[static_cast<std::size_t>(pair_from_detectors(*t.alice_click, *t.bob_click))] += 1;
}

}  // namespace

ClickCounts accumulate_clicks(const BenchConfig& cfg, std::int64_t n, std::uint64_t seed, std::uint64_t stream,
                              Execution exec) {
    cfg.validate();
    require_trials(n);
    require_source(cfg);
    require_gate(cfg);
    const ClickModel model(cfg);

    ClickCounts total;
    if (exec == Execution::Serial) {
        for (std::int64_t k = 0; k < n; ++k)
            tally(total, simulate_trial(cfg, model, seed, stream, static_cast<std::uint64_t>(k)));
        return total;
    }

#pragma omp parallel
    {
        ClickCounts local;
#pragma omp for schedule(static) nowait
        for (std::int64_t k = 0; k < n; ++k)
            tally(local, simulate_trial(cfg, model, seed, stream, static_cast<std::uint64_t>(k)));
#pragma omp critical
        total += local;
    }
    return total;
}

McEstimate estimate_R(DetectorPair pair, const BenchConfig& cfg, std::int64_t n, std::uint64_t seed,
                      Execution exec) {
    const ClickCounts c = accumulate_clicks(cfg, n, seed, 0, exec);
    if (c.n_gated == 0) fail(ErrorCode::InsufficientStatistics, "no trial passed the heterodyne gate");
    const double p = static_cast<double>(c.joint[static_cast<std::size_t>(pair)]) / static_cast<double>(c.n_gated);
    return {p, binomial_error(p, c.n_gated), c.n_trials, c.n_gated};
}

McEstimate estimate_E(double a, double b, const BenchConfig& cfg, std::int64_t n, std::uint64_t seed,
                      std::uint64_t stream, Execution exec) {
    const ClickCounts c = accumulate_clicks(with_orthogonal_ports(cfg, a, b), n, seed, stream, exec);
    if (c.n_gated == 0) fail(ErrorCode::InsufficientStatistics, "no trial passed the heterodyne gate");
    const auto same = c.joint[0] + c.joint[1];
    const auto diff = c.joint[2] + c.joint[3];
    const double e = static_cast<double>(same - diff) / static_cast<double>(c.n_gated);
    const double se = std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(c.n_gated));
    return {e, se, c.n_trials, c.n_gated};
}

McEstimate estimate_S(const ChshSettings& x, const BenchConfig& cfg, std::int64_t n, std::uint64_t seed,
                      Execution exec) {
    if (n < 4) fail(ErrorCode::InvalidParameter, "estimate_S needs at least 4 trials");
    const ChshResult analytic = chsh_S(x, cfg);
    const std::array<std::pair<double, double>, 4> angles{
        {{x.a, x.b}, {x.a, x.b_prime}, {x.a_prime, x.b}, {x.a_prime, x.b_prime}}};

    McEstimate out;
    double variance = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const std::int64_t n_k = n / 4 + (static_cast<std::int64_t>(k) < n % 4 ? 1 : 0);
        const McEstimate e = estimate_E(angles[k].first, angles[k].second, cfg, n_k, seed, k + 1, exec);
        const double sign = static_cast<std::size_t>(analytic.sign) == k ? -1.0 : 1.0;
        out.value += sign * e.value;
        variance += e.std_error * e.std_error;
        out.n_trials += e.n_trials;
        out.n_gated += e.n_gated;
    }
    out.std_error = std::sqrt(variance);
    return out;
}

McEstimate estimate_gate_fraction(const BenchConfig& cfg, std::int64_t n, std::uint64_t seed, Execution exec) {
    const ClickCounts c = accumulate_clicks(cfg, n, seed, 0, exec);
    const double p = static_cast<double>(c.n_gated) / static_cast<double>(c.n_trials);
    return {p, binomial_error(p, c.n_trials), c.n_trials, c.n_gated};
}

std::vector<double> beat_waveform(int detector, const BenchConfig& cfg, std::span<const double> t_grid) {
    cfg.validate();
    const DetectorRow row = detector_row(cfg, detector);
    const double depth = row.sign * std::sin(2.0 * row.angle);
    const double omega = 2.0 * std::numbers::pi * cfg.delta_f;
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        if (!std::isfinite(t)) fail(ErrorCode::InvalidParameter, "time grid values must be finite");
        out.push_back(0.5 * cfg.intensity_i0 * (1.0 + depth * std::cos(omega * t - row.phase)));
    }
    return out;
}

LockIn lockin_demodulate(std::span<const double> samples, std::span<const double> t_grid, double frequency) {
    if (samples.size() != t_grid.size() || samples.empty())
        fail(ErrorCode::InvalidParameter, "lock-in needs matching, non-empty sample and time grids");
    const double omega = 2.0 * std::numbers::pi * frequency;
    LockIn out;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        out.dc += samples[k];
        out.in_phase += samples[k] * std::cos(omega * t_grid[k]);
        out.quadrature += samples[k] * std::sin(omega * t_grid[k]);
    }
    const double n = static_cast<double>(samples.size());
    out.dc /= n;
    out.in_phase *= 2.0 / n;
    out.quadrature *= 2.0 / n;
    return out;
}

}  // namespace fransim
