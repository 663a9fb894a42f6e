#include "risnoma/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "risnoma/phy.hpp"

namespace risnoma {

namespace {

std::vector<std::size_t> gain_order(const ChannelSet& ch) {
    std::vector<std::size_t> order(ch.num_ues());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::norm(ch.f(a)) > std::norm(ch.f(b)); });
    return order;
}

}  // namespace

ClusterList benchmark_clusters(const ChannelSet& ch, std::size_t clusters, std::size_t max_cluster) {
    if (clusters == 0) throw std::invalid_argument("benchmark_clusters: no clusters");
    if (ch.num_ues() > clusters * max_cluster) throw std::invalid_argument("benchmark_clusters: U exceeds R*K");
    ClusterList out(clusters);
    const auto order = gain_order(ch);
    for (std::size_t i = 0; i < order.size(); ++i) out[i % clusters].push_back(order[i]);
    return out;
}

SchemeOutcome evaluate_direct(const ClusterList& clusters, const ChannelSet& ch, std::span<const double> power_w,
                              const NetworkConfig& cfg) {
    const double noise = noise_power_watt(cfg);
    const double threshold = qos_sinr_threshold(cfg.qos_bps, cfg.bandwidth_hz);
    SchemeOutcome out;
    out.power_w.assign(power_w.begin(), power_w.end());
    out.sinr.assign(ch.num_ues(), 0.0);
    for (const auto& members : clusters) {
        std::vector<double> rx;
        rx.reserve(members.size());
        for (std::size_t u : members) rx.push_back(power_w[u] * std::norm(ch.f(u)));
        const auto sinrs = sic_sinrs(members, rx, noise);
        for (std::size_t i = 0; i < members.size(); ++i) {
            out.sinr[members[i]] = sinrs[i];
            out.sum_rate_bps += cfg.bandwidth_hz * std::log2(1.0 + sinrs[i]);
            if (sinrs[i] < threshold) ++out.qos_violations;
        }
    }
    return out;
}

SchemeOutcome sgf_noma_rate(const ClusterList& clusters, const ChannelSet& ch, const NetworkConfig& cfg) {
    const std::vector<double> power(ch.num_ues(), dbm_to_watt(cfg.p_id_dbm));
    return evaluate_direct(clusters, ch, power, cfg);
}

std::vector<double> mgf_levels_dbm(std::size_t levels, double p_min_dbm, double p_max_dbm) {
    if (levels == 0) throw std::invalid_argument("mgf_levels_dbm: no levels");
    if (levels == 1) return {p_max_dbm};
    std::vector<double> out(levels);
    const double step = (p_max_dbm - p_min_dbm) / static_cast<double>(levels - 1);
    for (std::size_t i = 0; i < levels; ++i) out[i] = p_max_dbm - static_cast<double>(i) * step;
    out.back() = p_min_dbm;
    return out;
}

std::vector<double> mgf_powers_dbm(const ChannelSet& ch, const NetworkConfig& cfg) {
    const std::size_t U = ch.num_ues();
    const std::size_t R = cfg.num_rbs;
    const auto levels = mgf_levels_dbm(R, cfg.p_min_dbm, cfg.p_max_dbm);
    const auto order = gain_order(ch);
    std::vector<double> power(U);
    for (std::size_t s = 0; s < U; ++s) power[order[s]] = levels[s * R / U];
    return power;
}

SchemeOutcome mgf_noma_rate(const ChannelSet& ch, const NetworkConfig& cfg) {
    const std::size_t K = (ch.num_ues() + cfg.num_rbs - 1) / cfg.num_rbs;
    const auto clusters = benchmark_clusters(ch, cfg.num_rbs, K);
    auto power = mgf_powers_dbm(ch, cfg);
    for (double& p : power) p = dbm_to_watt(p);
    return evaluate_direct(clusters, ch, power, cfg);
}

PowerSolution evaluate_powers(const PowerProblem& prob, std::vector<double> power_w) {
    PowerSolution sol;
    sol.power_w = std::move(power_w);
    std::vector<double> rx(prob.members.size());
    for (std::size_t i = 0; i < rx.size(); ++i) rx[i] = sol.power_w[i] * prob.gains[i];
    sol.sinr = sic_sinrs(prob.members, rx, prob.noise_w);
    sol.feasible = true;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sol.rate_bps += prob.bandwidth_hz * std::log2(1.0 + sol.sinr[i]);
        // Relative slack absorbs rounding at floors met with equality.
        if (sol.sinr[i] < prob.floors[i] * (1.0 - 1e-9)) sol.feasible = false;
    }
    return sol;
}

PowerSolution optimize_cluster_powers(const PowerProblem& prob) {
    const std::size_t n = prob.members.size();
    if (prob.gains.size() != n || prob.floors.size() != n) throw std::invalid_argument("optimize_cluster_powers: size mismatch");
    if (n == 0) return {};

    const std::vector<double> all_max(n, prob.p_max_w);
    PowerSolution corner = evaluate_powers(prob, all_max);
    if (corner.feasible) return corner;

    // Decoding order at all-P_max: strongest received first.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double pa = prob.gains[a] * prob.p_max_w;
        const double pb = prob.gains[b] * prob.p_max_w;
        if (pa != pb) return pa > pb;
        return prob.members[a] < prob.members[b];
    });

    // Smallest received power each position needs given minimal later members.
    std::vector<double> need(n);
    double tail = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t i = order[k];
        need[k] = std::max(prob.p_min_w * prob.gains[i], prob.floors[i] * (tail + prob.noise_w));
        tail += need[k];
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (need[k] > prob.p_max_w * prob.gains[order[k]] * (1.0 + 1e-12)) {
            corner.feasible = false;
            return corner;
        }
    }

    // Project onto each floor in decoding order: every member takes as much
    // received power as the budget left by earlier members allows.
    std::vector<double> rx(n);
    double budget = std::numeric_limits<double>::infinity();
    double tail_need = std::accumulate(need.begin(), need.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = order[k];
        tail_need -= need[k];
        const double hi = prob.p_max_w * prob.gains[i];
        const double take = std::clamp(budget - std::max(tail_need, 0.0), need[k], hi);
        rx[k] = take;
        budget = std::min(budget - take, take / prob.floors[i] - prob.noise_w);
    }
    std::vector<double> power(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = order[k];
        power[i] = std::clamp(rx[k] / prob.gains[i], prob.p_min_w, prob.p_max_w);
    }
    PowerSolution sol = evaluate_powers(prob, std::move(power));
    if (!sol.feasible) {
        corner.feasible = false;
        return corner;
    }
    return sol;
}

SchemeOutcome opt_pdnoma_rate(const ClusterList& clusters, const ChannelSet& ch, const NetworkConfig& cfg) {
    const double threshold = qos_sinr_threshold(cfg.qos_bps, cfg.bandwidth_hz);
    std::vector<double> power(ch.num_ues(), dbm_to_watt(cfg.p_max_dbm));
    std::size_t infeasible = 0;
    for (const auto& members : clusters) {
        if (members.size() > kMaxOptClusterSize) {
            throw std::invalid_argument("opt_pdnoma_rate: cluster size exceeds " + std::to_string(kMaxOptClusterSize));
        }
        PowerProblem prob;
        prob.members = members;
        for (std::size_t u : members) prob.gains.push_back(std::norm(ch.f(u)));
        prob.floors.assign(members.size(), threshold);
        prob.p_min_w = dbm_to_watt(cfg.p_min_dbm);
        prob.p_max_w = dbm_to_watt(cfg.p_max_dbm);
        prob.noise_w = noise_power_watt(cfg);
        prob.bandwidth_hz = cfg.bandwidth_hz;
        const PowerSolution sol = optimize_cluster_powers(prob);
        if (!sol.feasible) ++infeasible;
        for (std::size_t i = 0; i < members.size(); ++i) power[members[i]] = sol.power_w[i];
    }
    SchemeOutcome out = evaluate_direct(clusters, ch, power, cfg);
    out.infeasible_clusters = infeasible;
    return out;
}

}  // namespace risnoma
