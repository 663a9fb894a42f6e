#include "risnoma/config.hpp"

#include <cmath>

namespace risnoma {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field + ": " + what);
}

}  // namespace

void NetworkConfig::validate() const {
    require(num_rbs >= 1, "R", "must be at least 1");
    require(num_ues >= num_rbs, "U", "must be >= R (each cluster is seeded with one UE)");
    require(num_ris >= 1, "M", "must be at least 1");
    require(blocks_per_ris >= 1, "G", "must be at least 1");
    require(num_blocks() >= num_rbs, "M*G", "must be >= R so every cluster can receive a block");
    require(elements_per_block >= 1, "N", "must be at least 1");
    require(std::isfinite(p_id_dbm), "p_id", "must be finite");
    require(bandwidth_hz > 0.0, "W", "must be positive");
    require(qos_bps >= 0.0, "q_u", "must be non-negative");
    require(std::isfinite(noise_psd_dbm_hz), "N0", "must be finite");
    require(carrier_hz >= 0.5e9 && carrier_hz <= 100e9, "f_c", "must lie in [0.5, 100] GHz");
    require(cell_radius_m > 0.0, "D", "must be positive");
    require(ris_inner_m >= 0.0, "D_in", "must be non-negative");
    require(ris_inner_m <= ris_outer_m, "D_in", "must be <= D_out");
    require(ris_outer_m <= cell_radius_m, "D_out", "must be <= D");
    require(p_min_dbm <= p_id_dbm, "P_min", "must be <= p_id");
    require(p_id_dbm <= p_max_dbm, "P_max", "must be >= p_id");
    require(k_los >= 0.0 && std::isfinite(k_los), "K_los", "must be finite and >= 0");
    require(bs_height_m > 1.0, "bs_height", "must exceed 1 m");
    require(ue_height_m > 1.0, "ue_height", "must exceed 1 m");
    require(ris_height_m > 1.0, "ris_height", "must exceed 1 m");
    require(bs_height_m > ue_height_m && bs_height_m > ris_height_m, "bs_height",
            "must exceed UE and RIS heights");
    require(relaxation_rounds >= 1, "relaxation_rounds", "must be at least 1");
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

double noise_power_watt(const NetworkConfig& cfg) {
    return dbm_to_watt(cfg.noise_psd_dbm_hz + 10.0 * std::log10(cfg.bandwidth_hz));
}

double qos_sinr_threshold(double qos_bps, double bandwidth_hz) {
    return std::exp2(qos_bps / bandwidth_hz) - 1.0;
}

}  // namespace risnoma
