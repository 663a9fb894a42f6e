#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "risnoma/channel.hpp"
#include "risnoma/config.hpp"

namespace risnoma {

enum class Scheme : std::size_t { proposed = 0, opt = 1, mgf = 2, sgf = 3 };
inline constexpr std::size_t kNumSchemes = 4;
inline constexpr std::array<const char*, kNumSchemes> kSchemeNames{"proposed", "opt", "mgf", "sgf"};

struct TrialResult {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::array<double, kNumSchemes> sum_rate{};             // bit/s
    std::array<std::size_t, kNumSchemes> qos_violations{};
    std::size_t opt_infeasible_clusters = 0;
    bool constraints_ok = true;                             // C2..C7 on the proposed output
    double assignment_value = 0.0;                          // 3D-AA objective, summed over passes
    double greedy_value = 0.0;
    std::optional<double> exact_value;                      // only when every pass had V <= 8
    double cross_block_fraction = 0.0;
    std::size_t zero_phase_elements = 0;

    double rate(Scheme s) const { return sum_rate[static_cast<std::size_t>(s)]; }
};

struct TrialOptions {
    bool use_ris = true;          // false forces Delta = 0 in the proposed scheme
    bool compare_exact = false;
    std::ostream* trace = nullptr;
};

/// Seed of trial `index` under `master`; identical across sweep values.
std::uint64_t trial_seed(std::uint64_t master, std::size_t index);

/// Topology and channels of the trial with this seed.
ChannelSet trial_channels(const NetworkConfig& cfg, std::uint64_t seed);

/// One network realization: topology, channels, the proposed scheme (rates
/// from the full SINR model) and the three benchmarks on the same channels.
TrialResult run_trial(const NetworkConfig& cfg, std::uint64_t seed, const TrialOptions& opts = {});

struct Estimate {
    double mean = 0.0;
    double ci95 = 0.0;  // half-width, normal approximation
    std::size_t count = 0;

    double lower() const { return mean - ci95; }
    double upper() const { return mean + ci95; }
};

/// Mean and 95% CI half-width. The result does not depend on the order of
/// `values` (sorted before a compensated summation).
Estimate estimate(std::span<const double> values);

enum class SweepAxis { none, num_ues, ris_outer, elements };

SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);
/// cfg with the axis set to value (integers rounded).
NetworkConfig apply_axis(NetworkConfig cfg, SweepAxis axis, double value);

struct SweepPoint {
    double value = 0.0;
    std::array<Estimate, kNumSchemes> stats;
    std::vector<TrialResult> trials;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::none;
    std::vector<double> values;
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
    std::vector<SweepPoint> points;

    const Estimate& at(std::size_t point, Scheme s) const { return points[point].stats[static_cast<std::size_t>(s)]; }
};

struct SweepOptions {
    std::size_t threads = 1;
    TrialOptions trial;
};

/// Runs `trials` seeded trials per axis value; trial i uses
/// trial_seed(cfg.seed, i) at every value. Output is independent of the
/// thread count.
SweepResult run_sweep(const NetworkConfig& cfg, SweepAxis axis, std::span<const double> values, std::size_t trials,
                      const SweepOptions& opts = {});

}  // namespace risnoma
