#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "risnoma/channel.hpp"
#include "risnoma/config.hpp"

namespace risnoma {

using ClusterList = std::vector<std::vector<std::size_t>>;

/// UEs sorted by direct gain |f|^2 (descending, ties by index) and dealt
/// round-robin over R clusters. Requires U <= R*K.
ClusterList benchmark_clusters(const ChannelSet& ch, std::size_t clusters, std::size_t max_cluster);

/// Outcome of one RIS-less benchmark scheme on one trial.
struct SchemeOutcome {
    double sum_rate_bps = 0.0;
    std::vector<double> power_w;  // per UE transmit power
    std::vector<double> sinr;     // per UE
    std::size_t qos_violations = 0;
    std::size_t infeasible_clusters = 0;
};

/// Sum rate of clusters under SIC with per-UE transmit powers and direct links only.
SchemeOutcome evaluate_direct(const ClusterList& clusters, const ChannelSet& ch, std::span<const double> power_w,
                              const NetworkConfig& cfg);

/// Every UE at p_id.
SchemeOutcome sgf_noma_rate(const ClusterList& clusters, const ChannelSet& ch, const NetworkConfig& cfg);

/// R power levels evenly spaced in dBm over [P_min, P_max], highest first.
std::vector<double> mgf_levels_dbm(std::size_t levels, double p_min_dbm, double p_max_dbm);

/// Gain-sorted UEs split into R contiguous groups; group i transmits at level i.
std::vector<double> mgf_powers_dbm(const ChannelSet& ch, const NetworkConfig& cfg);

SchemeOutcome mgf_noma_rate(const ChannelSet& ch, const NetworkConfig& cfg);

/// Inputs of the per-cluster power optimization. Gains and floors are
/// parallel to `members`.
struct PowerProblem {
    std::vector<std::size_t> members;
    std::vector<double> gains;   // |f_u|^2
    std::vector<double> floors;  // SINR thresholds
    double p_min_w = 0.0;
    double p_max_w = 0.0;
    double noise_w = 0.0;
    double bandwidth_hz = 0.0;
};

struct PowerSolution {
    std::vector<double> power_w;  // parallel to members
    std::vector<double> sinr;
    double rate_bps = 0.0;
    bool feasible = false;
};

/// Cluster sum rate of a power vector under SIC by received power.
PowerSolution evaluate_powers(const PowerProblem& prob, std::vector<double> power_w);

/// Maximizes the cluster sum rate over powers in [P_min, P_max] subject to
/// every member's SINR floor. Starts from all-P_max (optimal when the floors
/// are slack, since the SIC sum rate grows with every power) and otherwise
/// projects onto each floor in decoding order by trimming the power of
/// later-decoded members. Infeasible clusters fall back to all-P_max.
PowerSolution optimize_cluster_powers(const PowerProblem& prob);

inline constexpr std::size_t kMaxOptClusterSize = 6;

/// Grant-based PD-NOMA with per-cluster optimized powers.
SchemeOutcome opt_pdnoma_rate(const ClusterList& clusters, const ChannelSet& ch, const NetworkConfig& cfg);

}  // namespace risnoma
