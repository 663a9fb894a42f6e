#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "risnoma/assignment.hpp"
#include "risnoma/channel.hpp"
#include "risnoma/config.hpp"
#include "risnoma/phy.hpp"

namespace risnoma {

/// Clustering matrix X, RIS assignment tensor Delta and the alignment of
/// every assigned block. X and Delta are stored densely so hand-built
/// states can express constraint violations.
class ClusterState {
public:
    ClusterState() = default;
    ClusterState(std::size_t ues, std::size_t clusters, std::size_t blocks);

    std::size_t num_ues() const { return ues_; }
    std::size_t num_clusters() const { return clusters_.size(); }
    std::size_t num_blocks() const { return blocks_; }

    std::uint8_t chi(std::size_t u, std::size_t r) const { return chi_[u * clusters_.size() + r]; }
    std::uint8_t& chi(std::size_t u, std::size_t r) { return chi_[u * clusters_.size() + r]; }
    std::uint8_t delta(std::size_t r, std::size_t b, std::size_t u) const { return delta_[index(r, b, u)]; }
    std::uint8_t& delta(std::size_t r, std::size_t b, std::size_t u) { return delta_[index(r, b, u)]; }

    /// Members of cluster r in admission order.
    const std::vector<std::size_t>& members(std::size_t r) const { return clusters_[r]; }
    /// UE each block is phase-aligned to, or kNoBlock when unassigned.
    std::size_t aligned_ue(std::size_t b) const { return aligned_[b]; }
    /// Cluster served by block b, or kNoBlock.
    std::size_t cluster_of_block(std::size_t b) const;
    /// First block assigned to cluster r, or kNoBlock.
    std::size_t block_of_cluster(std::size_t r) const;
    /// Cluster of UE u, or kNoBlock when not admitted.
    std::size_t cluster_of_ue(std::size_t u) const;

    void admit(std::size_t u, std::size_t r);
    /// Sets delta(r, b, aligned) = 1.
    void assign_block(std::size_t r, std::size_t b, std::size_t aligned);
    void clear_assignments();

    bool operator==(const ClusterState&) const = default;

private:
    std::size_t index(std::size_t r, std::size_t b, std::size_t u) const { return (r * blocks_ + b) * ues_ + u; }

    std::size_t ues_ = 0;
    std::size_t blocks_ = 0;
    std::vector<std::uint8_t> chi_;
    std::vector<std::uint8_t> delta_;
    std::vector<std::vector<std::size_t>> clusters_;
    std::vector<std::size_t> aligned_;
};

struct QosReport {
    double threshold = 0.0;           // 2^(q/W) - 1
    std::vector<double> sinr;         // per UE
    std::vector<std::uint8_t> satisfied;
    std::size_t violations = 0;
};

QosReport make_qos_report(std::span<const double> sinr, const NetworkConfig& cfg);

struct ConstraintReport {
    bool c1 = true;  // QoS floors (reported only)
    bool c2 = true;  // every UE in exactly one cluster
    bool c3 = true;  // cluster size <= K
    bool c4 = true;  // blocks aligned to members only
    bool c5 = true;  // at most one block per cluster
    bool c6 = true;  // at most B assignments
    bool c7 = true;  // binary entries
    bool block_exclusive = true;  // each block serves at most one cluster
    std::size_t qos_violations = 0;

    /// C2..C7 and block exclusivity; C1 is never enforced.
    bool structural_ok() const { return c2 && c3 && c4 && c5 && c6 && c7 && block_exclusive; }
};

ConstraintReport check_constraints(const ClusterState& state, const NetworkConfig& cfg,
                                   const QosReport* qos = nullptr);

/// UEs sorted by descending SRS strength p|f|^2, ties by ascending index.
std::vector<std::size_t> rss_order(const ChannelSet& ch, const NetworkConfig& cfg);

/// Seeds cluster r with the r-th strongest UE; Delta empty.
ClusterState initialize_clusters(const ChannelSet& ch, const NetworkConfig& cfg);

/// Best rate of `members` when `block` is aligned to one of them, and that
/// member. Without a block, the direct-link rate and kNoBlock.
struct Alignment {
    double rate_bps;
    std::size_t aligned_ue;
};
Alignment best_alignment(std::span<const std::size_t> members, std::optional<std::size_t> block,
                         const CascadeTable& table, const PhyParams& p);

/// Profit tensor over clusters x (awaiting UEs, then `stay_columns` no-admission
/// columns) x blocks. Each entry is the best cluster rate after the temporary
/// admission, and iota the member the block is aligned to. Real UEs are
/// forbidden for clusters already holding max_cluster members. With
/// use_ris = false the block axis has a single RIS-less entry.
CostTensor build_cost_matrix(const ClusterState& state, std::span<const std::size_t> awaiting,
                             std::size_t stay_columns, const CascadeTable& table, const PhyParams& p,
                             std::size_t max_cluster, bool use_ris = true);

enum class SolverChoice { automatic, exact, heuristic };

struct SchedulerOptions {
    bool use_ris = true;
    SolverChoice solver = SolverChoice::automatic;  // exact for V <= 6
    bool compare_exact = false;   // also run the exact solver when V <= 8, for statistics
    std::ostream* trace = nullptr;
};

struct SchedulerStats {
    std::size_t passes = 0;
    std::size_t admission_repairs = 0;
    std::size_t block_repairs = 0;
    double assignment_value = 0.0;  // summed over passes
    double greedy_value = 0.0;
    std::optional<double> exact_value;
    std::size_t zero_phase_elements = 0;
};

/// Per-UE SINRs and rates of a finished clustering.
struct NetworkEvaluation {
    std::vector<double> sinr;          // per UE
    std::vector<double> cluster_rate;  // per cluster, bit/s
    double sum_rate_bps = 0.0;
    double cross_block_fraction = 0.0; // share of received power reflected by other clusters' blocks
};

enum class SinrModel { simplified, full };

NetworkEvaluation evaluate_network(const ClusterState& state, const CascadeTable& table, const PhyParams& p,
                                   SinrModel model);

struct JointResult {
    ClusterState state;
    QosReport qos;
    NetworkEvaluation evaluation;  // full SINR model
    SchedulerStats stats;
};

/// Iterative UE admission with a 3D axial assignment per iteration. When K = 1
/// a single assignment pass over the seeded clusters still assigns blocks.
JointResult run_joint_clustering(const ChannelSet& ch, const NetworkConfig& cfg, const SchedulerOptions& opts = {});

/// Same, reusing a prebuilt cascade table of ch.
JointResult run_joint_clustering(const ChannelSet& ch, const CascadeTable& table, const NetworkConfig& cfg,
                                 const SchedulerOptions& opts = {});

}  // namespace risnoma
