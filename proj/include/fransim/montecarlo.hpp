#pragma once

// Photon-pair Monte Carlo with heterodyne coincidence gating.
//
// Each trial is one f+/f- photon pair. The two photons take independent 50:50
// routes to Alice or Bob; only split pairs produce a beat at both parties and
// pass the gate. Split pairs click one Alice and one Bob detector with
// probability R_ij / sum(R) from the analytic coincidence table.
//
// Every trial draws from its own counter-based stream keyed by
// (seed, stream, pair_id), so results do not depend on how trials are
// partitioned across threads.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fransim/chsh.hpp"
#include "fransim/correlation.hpp"

namespace fransim {

// SplitMix64 over a per-trial key.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t pair_id) noexcept;

    std::uint64_t next() noexcept;
    // Uniform in [0, 1), 53-bit resolution.
    double uniform() noexcept;

private:
    std::uint64_t state_;
};

enum class Routing : std::uint8_t { Split, BothAlice, BothBob };

struct FrequencySet {
    bool plus = false;
    bool minus = false;

    bool empty() const noexcept { return !plus && !minus; }
    friend bool operator==(FrequencySet, FrequencySet) = default;
};

struct TrialOutcome {
    std::uint64_t pair_id = 0;
    double timestamp = 0.0;  // seconds
    Routing routing = Routing::Split;
    std::optional<int> alice_click;  // 1 or 2
    std::optional<int> bob_click;    // 3 or 4
    FrequencySet alice_tags;
    FrequencySet bob_tags;
    bool gated = false;

    friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

struct EventRecord {
    double timestamp = 0.0;
    int detector = 0;
    std::uint64_t pair_id = 0;
    FrequencySet frequency_content;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_trials = 0;
    std::int64_t n_gated = 0;
};

// Click distributions for one config.
class ClickModel {
public:
    // Throws DegenerateDistribution if every R_ij vanishes.
    explicit ClickModel(const BenchConfig& cfg);

    // Probabilities in coincidence_table() order: (1,4), (2,3), (1,3), (2,4).
    const std::array<double, 4>& joint() const noexcept { return joint_; }
    // P(D1 | Alice clicks alone), P(D3 | Bob clicks alone); NaN when both
    // local intensities vanish.
    double alice_first() const noexcept { return alice_first_; }
    double bob_first() const noexcept { return bob_first_; }

    std::pair<int, int> sample_joint(double u) const noexcept;

private:
    std::array<double, 4> joint_{};
    std::array<double, 4> cumulative_{};
    double alice_first_ = 0.0;
    double bob_first_ = 0.0;
};

std::pair<int, int> sample_joint_click(const BenchConfig& cfg, TrialRng& rng);

// True iff the trial was split. Throws GateInoperative when the detectors
// cannot resolve the beat (resolving_time >= 1/delta_f).
bool heterodyne_gate(const TrialOutcome& trial, const BenchConfig& cfg);

// Pair k of a run; timestamp holds only this pair's inter-arrival gap.
TrialOutcome simulate_trial(const BenchConfig& cfg, const ClickModel& model, std::uint64_t seed,
                            std::uint64_t stream, std::uint64_t pair_id);

// n trials with exponential inter-arrival gaps of mean resolving_time/<n>
// accumulated into absolute timestamps.
std::vector<TrialOutcome> generate_trials(const BenchConfig& cfg, std::int64_t n, std::uint64_t seed,
                                          Execution exec = Execution::Parallel);

// Clicks as a time-ordered event stream.
std::vector<EventRecord> to_events(std::span<const TrialOutcome> trials);

struct Coincidence {
    std::size_t alice_event = 0;
    std::size_t bob_event = 0;
};

// Alice/Bob event pairs closer than `window` in time; the stream must be
// time-ordered.
std::vector<Coincidence> find_coincidences(std::span<const EventRecord> events, double window);

struct ClickCounts {
    std::array<std::int64_t, 4> joint{};  // gated clicks, coincidence_table() order
    std::int64_t n_trials = 0;
    std::int64_t n_gated = 0;

    ClickCounts& operator+=(const ClickCounts& rhs) noexcept;
    friend bool operator==(const ClickCounts&, const ClickCounts&) = default;
};

ClickCounts accumulate_clicks(const BenchConfig& cfg, std::int64_t n, std::uint64_t seed, std::uint64_t stream,
                              Execution exec = Execution::Parallel);

// Gated fraction of pair `pair`, against the analytic R_ij / sum(R).
McEstimate estimate_R(DetectorPair pair, const BenchConfig& cfg, std::int64_t n, std::uint64_t seed,
                      Execution exec = Execution::Parallel);
// Mean of +1 (D1D4, D2D3) / -1 (D1D3, D2D4) over gated trials at
// orthogonal-port settings (a, b).
McEstimate estimate_E(double a, double b, const BenchConfig& cfg, std::int64_t n, std::uint64_t seed,
                      std::uint64_t stream = 0, Execution exec = Execution::Parallel);
// n trials split evenly across the four settings; signs from the analytic
// arrangement at these settings.
McEstimate estimate_S(const ChshSettings& settings, const BenchConfig& cfg, std::int64_t n, std::uint64_t seed,
                      Execution exec = Execution::Parallel);

// Gated fraction of all trials (expected 1/2).
McEstimate estimate_gate_fraction(const BenchConfig& cfg, std::int64_t n, std::uint64_t seed,
                                  Execution exec = Execution::Parallel);

// Photocurrent at detector k when both tags reach it:
//   (I0/2)(1 + sign sin 2a cos(2 pi delta_f t - phase)).
std::vector<double> beat_waveform(int detector, const BenchConfig& cfg, std::span<const double> t_grid);

struct LockIn {
    double dc = 0.0;
    double in_phase = 0.0;    // 2 <I cos(2 pi f t)>
    double quadrature = 0.0;  // 2 <I sin(2 pi f t)>

    // Baseband value at t = 0.
    double recovered() const noexcept { return dc + in_phase; }
};

// Demodulates uniformly spaced samples covering an integer number of periods.
LockIn lockin_demodulate(std::span<const double> samples, std::span<const double> t_grid, double frequency);

}  // namespace fransim
