#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "risnoma/channel.hpp"
#include "risnoma/config.hpp"

namespace risnoma {

/// Diagonal of an RIS block's phase-shift matrix; every entry has modulus 1.
struct PhaseVector {
    std::vector<cd> phases;

    std::size_t size() const { return phases.size(); }
};

/// Counts elements whose phase was undefined (zero-magnitude coefficient) and
/// therefore set to 0 during alignment.
struct AlignmentDiagnostics {
    std::size_t zero_magnitude = 0;
};

/// Co-phases the cascade UE_m -> block -> BS with the direct link f_m:
/// phi_n = exp(j(arg f_m - arg g_n - arg h_n)).
PhaseVector align_phases(cd f_m, std::span<const cd> g, std::span<const cd> h,
                         AlignmentDiagnostics* diag = nullptr);

/// g^T diag(phi) h.
cd cascade_gain(std::span<const cd> g, const PhaseVector& phi, std::span<const cd> h);

/// Link-level constants shared by every SINR evaluation of a trial.
struct PhyParams {
    double tx_power_w = 0.0;
    double noise_w = 0.0;
    double bandwidth_hz = 0.0;
    bool coherent = false;
};

PhyParams make_phy_params(const NetworkConfig& cfg);

/// A configured block and the phase vector it currently holds.
struct Reflection {
    std::size_t block;
    PhaseVector phases;
};

/// Received power of one UE with at most one assisting block.
double received_power(const ChannelSet& ch, std::size_t ue, const Reflection* assigned, const PhyParams& p);

/// Received power of one UE counting reflections from every configured block.
double received_power_full(const ChannelSet& ch, std::size_t ue, std::span<const Reflection> active,
                           const PhyParams& p);

/// Cluster members sorted by received power, strongest first.
struct SicOrder {
    std::vector<std::size_t> ordered_ues;
};

/// Descending power; equal powers are decoded in ascending UE index.
/// `powers` is parallel to `members`.
SicOrder sic_order(std::span<const std::size_t> members, std::span<const double> powers);

/// SINR of every member (parallel to `members`) under SIC: each member is
/// interfered only by members decoded after it.
std::vector<double> sic_sinrs(std::span<const std::size_t> members, std::span<const double> powers, double noise_w);

/// SINR of `ue` in `cluster` counting reflections from all configured blocks.
double sinr_full(const ChannelSet& ch, std::span<const std::size_t> cluster, std::size_t ue,
                 std::span<const Reflection> active, const PhyParams& p);

/// SINR of `ue` in `cluster` counting only the cluster's own block.
double sinr_simplified(const ChannelSet& ch, std::span<const std::size_t> cluster, std::size_t ue,
                       const Reflection* assigned, const PhyParams& p);

struct ClusterRate {
    double rate_bps = 0.0;
    SicOrder order;
    std::vector<double> sinrs;  // parallel to the input members
};

/// Sum over members of W log2(1 + SINR) for the given received powers.
ClusterRate sic_rate(std::span<const std::size_t> members, std::span<const double> powers, const PhyParams& p);

/// Aligns `block` to `aligned_ue` and returns the cluster sum rate. With no
/// block the cluster is evaluated on its direct links only.
ClusterRate cluster_sum_rate(const ChannelSet& ch, std::span<const std::size_t> cluster,
                             std::optional<std::size_t> block, std::optional<std::size_t> aligned_ue,
                             const PhyParams& p);

/// Cascade gains of every (block, aligned UE, UE) triple, with the block
/// phase-aligned to the aligned UE. Built once per trial; makes each
/// received-power evaluation O(1) instead of O(N).
class CascadeTable {
public:
    explicit CascadeTable(const ChannelSet& ch, AlignmentDiagnostics* diag = nullptr);

    std::size_t num_ues() const { return ues_; }
    std::size_t num_blocks() const { return blocks_; }

    /// g_b^T Phi(b aligned to `aligned`) h_{ue,b}.
    cd gain(std::size_t block, std::size_t aligned, std::size_t ue) const {
        return table_[(block * ues_ + aligned) * ues_ + ue];
    }

    cd direct(std::size_t ue) const { return f_[ue]; }

    /// Received power of ue with `block` aligned to `aligned` (or no block).
    double received_power(std::size_t ue, std::optional<std::size_t> block, std::size_t aligned,
                          const PhyParams& p) const;

private:
    std::size_t ues_ = 0;
    std::size_t blocks_ = 0;
    std::vector<cd> table_;
    std::vector<cd> f_;
};

}  // namespace risnoma
