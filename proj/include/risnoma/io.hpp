#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "risnoma/channel.hpp"
#include "risnoma/config.hpp"
#include "risnoma/montecarlo.hpp"

namespace risnoma {

/// Library version, recorded in run metadata.
const char* version();

/// Parses a flat JSON object whose keys mirror the NetworkConfig fields
/// (U, R, M, G, N, p_id, W, q_u, N0, f_c, D, D_in, D_out, P_max, P_min,
/// K_los, bs_height, ue_height, ris_height, seed, force_ris_bs_los,
/// coherent_combining, relaxation_rounds). Missing keys keep their defaults;
/// an empty document yields the default configuration. Throws ConfigError
/// naming the offending key.
NetworkConfig parse_config(const std::string& text);
NetworkConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config; every key is written.
std::string serialize_config(const NetworkConfig& cfg);

/// 17-significant-digit rendering used by every CSV field.
std::string format_number(double v);

/// Writes sweep.csv, trials.csv and run_meta into outdir (created if
/// missing). I/O failures are reported as std::runtime_error naming the path.
void emit_results(const SweepResult& result, const NetworkConfig& cfg, const std::string& command,
                  const std::filesystem::path& outdir);

void write_sweep_csv(std::ostream& os, const SweepResult& result);
void write_trials_csv(std::ostream& os, const SweepResult& result);

/// Text dump of one trial's channels: a header "U B N", then one line per
/// coefficient "kind i j n re im" with kind f, g or h.
void write_channels(std::ostream& os, const ChannelSet& ch);

}  // namespace risnoma
