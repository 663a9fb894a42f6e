#include "risnoma/scheduler.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "risnoma/topology.hpp"

namespace risnoma {

ClusterState::ClusterState(std::size_t ues, std::size_t clusters, std::size_t blocks)
    : ues_(ues),
      blocks_(blocks),
      chi_(ues * clusters, 0),
      delta_(clusters * blocks * ues, 0),
      clusters_(clusters),
      aligned_(blocks, kNoBlock) {}

std::size_t ClusterState::cluster_of_block(std::size_t b) const {
    for (std::size_t r = 0; r < clusters_.size(); ++r)
        for (std::size_t u = 0; u < ues_; ++u)
            if (delta(r, b, u)) return r;
    return kNoBlock;
}

std::size_t ClusterState::block_of_cluster(std::size_t r) const {
    for (std::size_t b = 0; b < blocks_; ++b)
        for (std::size_t u = 0; u < ues_; ++u)
            if (delta(r, b, u)) return b;
    return kNoBlock;
}

std::size_t ClusterState::cluster_of_ue(std::size_t u) const {
    for (std::size_t r = 0; r < clusters_.size(); ++r)
        if (chi(u, r)) return r;
    return kNoBlock;
}

void ClusterState::admit(std::size_t u, std::size_t r) {
    chi(u, r) = 1;
    clusters_[r].push_back(u);
}

void ClusterState::assign_block(std::size_t r, std::size_t b, std::size_t aligned) {
    delta(r, b, aligned) = 1;
    aligned_[b] = aligned;
}

void ClusterState::clear_assignments() {
    std::fill(delta_.begin(), delta_.end(), 0);
    std::fill(aligned_.begin(), aligned_.end(), kNoBlock);
}

QosReport make_qos_report(std::span<const double> sinr, const NetworkConfig& cfg) {
    QosReport q;
    q.threshold = qos_sinr_threshold(cfg.qos_bps, cfg.bandwidth_hz);
    q.sinr.assign(sinr.begin(), sinr.end());
    q.satisfied.resize(sinr.size());
    for (std::size_t u = 0; u < sinr.size(); ++u) {
        q.satisfied[u] = sinr[u] >= q.threshold;
        if (!q.satisfied[u]) ++q.violations;
    }
    return q;
}

ConstraintReport check_constraints(const ClusterState& state, const NetworkConfig& cfg, const QosReport* qos) {
    ConstraintReport rep;
    const std::size_t U = state.num_ues();
    const std::size_t R = state.num_clusters();
    const std::size_t B = state.num_blocks();
    const std::size_t K = (cfg.num_ues + cfg.num_rbs - 1) / std::max<std::size_t>(cfg.num_rbs, 1);

    if (qos) {
        rep.qos_violations = qos->violations;
        rep.c1 = qos->violations == 0;
    }
    for (std::size_t u = 0; u < U; ++u) {
        std::size_t n = 0;
        for (std::size_t r = 0; r < R; ++r) {
            const auto c = state.chi(u, r);
            if (c > 1) rep.c7 = false;
            n += c;
        }
        if (n != 1) rep.c2 = false;
    }
    std::size_t total = 0;
    for (std::size_t r = 0; r < R; ++r) {
        std::size_t size = 0;
        for (std::size_t u = 0; u < U; ++u) size += state.chi(u, r);
        if (size > K) rep.c3 = false;
        std::size_t assisted = 0;
        for (std::size_t b = 0; b < B; ++b)
            for (std::size_t u = 0; u < U; ++u) {
                const auto d = state.delta(r, b, u);
                if (d > 1) rep.c7 = false;
                if (d > state.chi(u, r)) rep.c4 = false;
                assisted += static_cast<std::size_t>(state.chi(u, r) * d);
                total += d;
            }
        if (assisted > 1) rep.c5 = false;
    }
    if (total > B) rep.c6 = false;
    for (std::size_t b = 0; b < B; ++b) {
        std::size_t uses = 0;
        for (std::size_t r = 0; r < R; ++r)
            for (std::size_t u = 0; u < U; ++u) uses += state.delta(r, b, u);
        if (uses > 1) rep.block_exclusive = false;
    }
    return rep;
}

std::vector<std::size_t> rss_order(const ChannelSet& ch, const NetworkConfig& cfg) {
    const double p = dbm_to_watt(cfg.p_id_dbm);
    std::vector<double> rss(ch.num_ues());
    for (std::size_t u = 0; u < rss.size(); ++u) rss[u] = p * std::norm(ch.f(u));
    std::vector<std::size_t> order(rss.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rss[a] > rss[b]; });
    return order;
}

ClusterState initialize_clusters(const ChannelSet& ch, const NetworkConfig& cfg) {
    const auto structure = derive_structure(cfg);
    if (ch.num_ues() < cfg.num_rbs) throw ConfigError("U: must be >= R (each cluster is seeded with one UE)");
    ClusterState state(ch.num_ues(), structure.clusters, ch.num_blocks());
    const auto order = rss_order(ch, cfg);
    for (std::size_t r = 0; r < structure.clusters; ++r) state.admit(order[r], r);
    return state;
}

namespace {

constexpr std::size_t kSmallCluster = 32;

// Sum of W log2(1 + SINR) under SIC for up to kSmallCluster members, same
// ordering rule as sic_sinrs.
double small_sic_rate(const std::size_t* ids, const double* powers, std::size_t n, const PhyParams& p) {
    std::size_t idx[kSmallCluster];
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx, idx + n, [&](std::size_t a, std::size_t b) {
        if (powers[a] != powers[b]) return powers[a] > powers[b];
        return ids[a] < ids[b];
    });
    double later = 0.0;
    double rate = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        const double pw = powers[idx[k]];
        rate += std::log2(1.0 + pw / (later + p.noise_w));
        later += pw;
    }
    return p.bandwidth_hz * rate;
}

}  // namespace

Alignment best_alignment(std::span<const std::size_t> members, std::optional<std::size_t> block,
                         const CascadeTable& table, const PhyParams& p) {
    const std::size_t n = members.size();
    if (n == 0) return {0.0, kNoBlock};
    if (n > kSmallCluster) throw std::invalid_argument("best_alignment: cluster too large");
    double powers[kSmallCluster];
    if (!block) {
        for (std::size_t i = 0; i < n; ++i) powers[i] = table.received_power(members[i], std::nullopt, 0, p);
        return {small_sic_rate(members.data(), powers, n, p), kNoBlock};
    }
    Alignment best{-1.0, kNoBlock};
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) powers[i] = table.received_power(members[i], block, members[j], p);
        const double rate = small_sic_rate(members.data(), powers, n, p);
        if (rate > best.rate_bps) best = {rate, members[j]};
    }
    return best;
}

CostTensor build_cost_matrix(const ClusterState& state, std::span<const std::size_t> awaiting,
                             std::size_t stay_columns, const CascadeTable& table, const PhyParams& p,
                             std::size_t max_cluster, bool use_ris) {
    const std::size_t R = state.num_clusters();
    const std::size_t A = awaiting.size();
    const std::size_t B = use_ris ? state.num_blocks() : 1;
    CostTensor q(R, A + stay_columns, B);
    std::vector<std::size_t> temp;
    for (std::size_t r = 0; r < R; ++r) {
        const auto& members = state.members(r);
        const bool full = members.size() >= max_cluster;
        for (std::size_t col = 0; col < A + stay_columns; ++col) {
            const bool admits = col < A;
            if (admits && full) {
                for (std::size_t b = 0; b < B; ++b) q.q(r, col, b) = kForbidden;
                continue;
            }
            temp.assign(members.begin(), members.end());
            if (admits) temp.push_back(awaiting[col]);
            for (std::size_t b = 0; b < B; ++b) {
                const Alignment a = best_alignment(temp, use_ris ? std::optional<std::size_t>(b) : std::nullopt,
                                                   table, p);
                q.q(r, col, b) = a.rate_bps;
                q.iota(r, col, b) = a.aligned_ue;
            }
        }
    }
    return q;
}

NetworkEvaluation evaluate_network(const ClusterState& state, const CascadeTable& table, const PhyParams& p,
                                   SinrModel model) {
    const std::size_t U = state.num_ues();
    const std::size_t R = state.num_clusters();
    NetworkEvaluation ev;
    ev.sinr.assign(U, 0.0);
    ev.cluster_rate.assign(R, 0.0);

    struct Active {
        std::size_t block;
        std::size_t aligned;
        std::size_t cluster;
    };
    std::vector<Active> active;
    for (std::size_t b = 0; b < state.num_blocks(); ++b) {
        if (state.aligned_ue(b) != kNoBlock) active.push_back({b, state.aligned_ue(b), state.cluster_of_block(b)});
    }

    double total_power = 0.0;
    double foreign_power = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
        const auto& members = state.members(r);
        std::vector<double> powers;
        powers.reserve(members.size());
        for (std::size_t z : members) {
            const cd f = table.direct(z);
            cd coherent_sum = f;
            double incoherent = std::norm(f);
            double foreign = 0.0;
            for (const auto& a : active) {
                const bool own = a.cluster == r;
                if (model == SinrModel::simplified && !own) continue;
                const cd c = table.gain(a.block, a.aligned, z);
                coherent_sum += c;
                incoherent += std::norm(c);
                if (!own) foreign += std::norm(c);
            }
            const double pw = p.tx_power_w * (p.coherent ? std::norm(coherent_sum) : incoherent);
            powers.push_back(pw);
            total_power += p.tx_power_w * incoherent;
            foreign_power += p.tx_power_w * foreign;
        }
        const auto sinrs = sic_sinrs(members, powers, p.noise_w);
        for (std::size_t i = 0; i < members.size(); ++i) {
            ev.sinr[members[i]] = sinrs[i];
            ev.cluster_rate[r] += p.bandwidth_hz * std::log2(1.0 + sinrs[i]);
        }
        ev.sum_rate_bps += ev.cluster_rate[r];
    }
    ev.cross_block_fraction = total_power > 0.0 ? foreign_power / total_power : 0.0;
    return ev;
}

namespace {

class JointScheduler {
public:
    JointScheduler(const ChannelSet& ch, const CascadeTable& table, const NetworkConfig& cfg,
                   const SchedulerOptions& opts)
        : ch_(ch),
          table_(table),
          cfg_(cfg),
          opts_(opts),
          params_(make_phy_params(cfg)),
          structure_(derive_structure(cfg)) {}

    JointResult run() {
        JointResult out;
        out.state = initialize_clusters(ch_, cfg_);
        const auto order = rss_order(ch_, cfg_);
        const std::size_t K = structure_.max_cluster;

        for (std::size_t k = 1; k + 1 <= K; ++k) {
            std::vector<std::size_t> awaiting;
            for (std::size_t u : order)
                if (out.state.cluster_of_ue(u) == kNoBlock) awaiting.push_back(u);
            pass(out.state, awaiting, out.stats);
        }
        if (K == 1 && opts_.use_ris) pass(out.state, {}, out.stats);

        for (std::size_t u = 0; u < out.state.num_ues(); ++u) {
            if (out.state.cluster_of_ue(u) == kNoBlock) {
                throw std::logic_error("run_joint_clustering: UE left unadmitted after all iterations");
            }
        }
        out.evaluation = evaluate_network(out.state, table_, params_, SinrModel::full);
        out.qos = make_qos_report(out.evaluation.sinr, cfg_);
        return out;
    }

private:
    Assignment3D solve(const CostTensor& q, SchedulerStats& stats) {
        const std::size_t v = q.max_dim();
        Assignment3D a;
        const bool exact = opts_.solver == SolverChoice::exact ||
                           (opts_.solver == SolverChoice::automatic && v <= 6);
        if (exact) {
            a = solve_exact(q);
        } else {
            HeuristicOptions h;
            h.rounds = cfg_.relaxation_rounds;
            a = solve_heuristic(q, h);
        }
        stats.assignment_value += a.value;
        stats.greedy_value += solve_greedy(q).value;
        if (opts_.compare_exact && v <= 8) {
            stats.exact_value = stats.exact_value.value_or(0.0) + (exact ? a.value : solve_exact(q).value);
        }
        return a;
    }

    void pass(ClusterState& state, const std::vector<std::size_t>& awaiting, SchedulerStats& stats) {
        const std::size_t R = state.num_clusters();
        const std::size_t A = awaiting.size();
        const std::size_t K = structure_.max_cluster;
        const std::size_t stay = A < R ? R - A : 0;
        const CostTensor q = build_cost_matrix(state, awaiting, stay, table_, params_, K, opts_.use_ris);
        const Assignment3D y = solve(q, stats);
        ++stats.passes;

        std::vector<char> cluster_admitted(R, 0);
        std::vector<char> ue_admitted(A, 0);
        state.clear_assignments();
        for (const auto& t : y.triples) {
            if (t.u < A) {
                if (state.members(t.r).size() >= K) throw std::logic_error("run_joint_clustering: cluster over capacity");
                state.admit(awaiting[t.u], t.r);
                cluster_admitted[t.r] = 1;
                ue_admitted[t.u] = 1;
            }
        }

        // Every pass admits min(A, open clusters) UEs; top up if the solver
        // paired real UEs with padding clusters.
        std::size_t open = 0;
        for (std::size_t r = 0; r < R; ++r) open += !cluster_admitted[r] && state.members(r).size() < K;
        std::size_t target = std::min(A, open + static_cast<std::size_t>(std::count(cluster_admitted.begin(),
                                                                                     cluster_admitted.end(), 1)));
        std::size_t admitted = static_cast<std::size_t>(std::count(ue_admitted.begin(), ue_admitted.end(), 1));
        while (admitted < target) {
            double best = -1.0;
            std::size_t br = 0, bu = 0;
            for (std::size_t r = 0; r < R; ++r) {
                if (cluster_admitted[r] || state.members(r).size() >= K) continue;
                for (std::size_t col = 0; col < A; ++col) {
                    if (ue_admitted[col]) continue;
                    for (std::size_t b = 0; b < q.blocks(); ++b) {
                        if (q.q(r, col, b) > best) {
                            best = q.q(r, col, b);
                            br = r;
                            bu = col;
                        }
                    }
                }
            }
            if (best < 0.0) break;
            state.admit(awaiting[bu], br);
            cluster_admitted[br] = 1;
            ue_admitted[bu] = 1;
            ++admitted;
            ++stats.admission_repairs;
        }

        if (!opts_.use_ris) return;

        // Blocks: alignment chosen by the cost matrix for the admitted pairing.
        std::vector<char> block_used(state.num_blocks(), 0);
        std::vector<char> cluster_has_block(R, 0);
        for (const auto& t : y.triples) {
            if (t.b == kNoBlock) continue;
            const bool admitted_here = t.u < A && ue_admitted[t.u] && state.cluster_of_ue(awaiting[t.u]) == t.r;
            const bool stayed = t.u >= A && !cluster_admitted[t.r];
            if (!admitted_here && !stayed) continue;
            state.assign_block(t.r, t.b, q.iota(t.r, t.u, t.b));
            block_used[t.b] = 1;
            cluster_has_block[t.r] = 1;
        }
        for (std::size_t r = 0; r < R; ++r) {
            if (cluster_has_block[r]) continue;
            double best = -1.0;
            Alignment pick{0.0, kNoBlock};
            std::size_t pick_b = kNoBlock;
            for (std::size_t b = 0; b < state.num_blocks(); ++b) {
                if (block_used[b]) continue;
                const Alignment a = best_alignment(state.members(r), b, table_, params_);
                if (a.rate_bps > best) {
                    best = a.rate_bps;
                    pick = a;
                    pick_b = b;
                }
            }
            if (pick_b == kNoBlock) continue;
            state.assign_block(r, pick_b, pick.aligned_ue);
            block_used[pick_b] = 1;
            ++stats.block_repairs;
        }

        if (opts_.trace) {
            auto& os = *opts_.trace;
            os << "pass " << stats.passes << ": awaiting=" << A << " assignment_value=" << y.value << '\n';
            for (std::size_t r = 0; r < R; ++r) {
                os << "  cluster " << r << " {";
                for (std::size_t i = 0; i < state.members(r).size(); ++i)
                    os << (i ? "," : "") << state.members(r)[i];
                os << "}";
                const std::size_t b = state.block_of_cluster(r);
                if (b != kNoBlock) os << " block " << b << " aligned to UE " << state.aligned_ue(b);
                os << '\n';
            }
        }
    }

    const ChannelSet& ch_;
    const CascadeTable& table_;
    const NetworkConfig& cfg_;
    SchedulerOptions opts_;
    PhyParams params_;
    NetworkStructure structure_;
};

}  // namespace

JointResult run_joint_clustering(const ChannelSet& ch, const NetworkConfig& cfg, const SchedulerOptions& opts) {
    AlignmentDiagnostics diag;
    const CascadeTable table(ch, &diag);
    JointResult out = run_joint_clustering(ch, table, cfg, opts);
    out.stats.zero_phase_elements = diag.zero_magnitude;
    return out;
}

JointResult run_joint_clustering(const ChannelSet& ch, const CascadeTable& table, const NetworkConfig& cfg,
                                 const SchedulerOptions& opts) {
    cfg.validate();
    if (ch.num_ues() != cfg.num_ues || ch.num_blocks() != cfg.num_blocks()) {
        throw std::invalid_argument("run_joint_clustering: channel dimensions do not match the configuration");
    }
    return JointScheduler(ch, table, cfg, opts).run();
}

}  // namespace risnoma
