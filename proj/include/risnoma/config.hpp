#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace risnoma {

/// Raised when a configuration violates one of its structural invariants.
/// The message names the offending field.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Scalar parameters of one simulated cell. Defaults reproduce the reference
/// urban-macro setup (25 single-block RISs, 75 UEs on 25 RBs).
struct NetworkConfig {
    std::size_t num_ues = 75;            // U
    std::size_t num_rbs = 25;            // R (one cluster per RB)
    std::size_t num_ris = 25;            // M
    std::size_t blocks_per_ris = 1;      // G
    std::size_t elements_per_block = 256;  // N

    double p_id_dbm = 21.0;
    double bandwidth_hz = 180e3;         // W
    double qos_bps = 1e5;                // q_u
    double noise_psd_dbm_hz = -174.0;    // N0
    double carrier_hz = 5e9;             // f_c

    double cell_radius_m = 250.0;        // D
    double ris_inner_m = 15.0;           // D_in
    double ris_outer_m = 50.0;           // D_out

    double p_max_dbm = 23.0;
    double p_min_dbm = -40.0;

    double k_los = 7.943282347242816;    // 9 dB, linear
    double bs_height_m = 25.0;
    double ue_height_m = 1.5;
    double ris_height_m = 10.0;

    std::uint64_t seed = 1;

    // Modeling switches.
    bool force_ris_bs_los = false;       // treat every RIS->BS link as LoS
    bool coherent_combining = false;     // |cascade + direct|^2 instead of the sum of powers
    std::size_t relaxation_rounds = 20;  // Lagrangian rounds of the 3D assignment heuristic

    std::size_t num_blocks() const { return num_ris * blocks_per_ris; }

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;

    bool operator==(const NetworkConfig&) const = default;
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/// Receiver noise power N0 * W, in watts.
double noise_power_watt(const NetworkConfig& cfg);

/// SINR floor 2^(q/W) - 1 implied by a rate demand q on bandwidth W.
double qos_sinr_threshold(double qos_bps, double bandwidth_hz);

}  // namespace risnoma
