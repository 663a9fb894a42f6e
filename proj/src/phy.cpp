#include "risnoma/phy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace risnoma {

namespace {

// z / |z|, with the undefined phase of 0 taken as 0.
cd unit_phase(cd z, bool* undefined = nullptr) {
    const double mag = std::abs(z);
    if (mag == 0.0) {
        if (undefined) *undefined = true;
        return {1.0, 0.0};
    }
    return z / mag;
}

std::size_t position_of(std::span<const std::size_t> cluster, std::size_t ue) {
    const auto it = std::find(cluster.begin(), cluster.end(), ue);
    if (it == cluster.end()) throw std::invalid_argument("UE is not a member of the cluster");
    return static_cast<std::size_t>(it - cluster.begin());
}

}  // namespace

PhaseVector align_phases(cd f_m, std::span<const cd> g, std::span<const cd> h, AlignmentDiagnostics* diag) {
    if (g.size() != h.size()) throw std::invalid_argument("align_phases: g and h lengths differ");
    const cd direct = unit_phase(f_m);
    PhaseVector out;
    out.phases.resize(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        bool undefined = false;
        const cd ug = unit_phase(g[n], &undefined);
        const cd uh = unit_phase(h[n], &undefined);
        if (undefined) {
            if (diag) ++diag->zero_magnitude;
            out.phases[n] = {1.0, 0.0};
        } else {
            out.phases[n] = direct * std::conj(ug) * std::conj(uh);
        }
    }
    return out;
}

cd cascade_gain(std::span<const cd> g, const PhaseVector& phi, std::span<const cd> h) {
    if (g.size() != h.size() || g.size() != phi.size()) {
        throw std::invalid_argument("cascade_gain: dimension mismatch");
    }
    cd acc{0.0, 0.0};
    for (std::size_t n = 0; n < g.size(); ++n) acc += g[n] * phi.phases[n] * h[n];
    return acc;
}

PhyParams make_phy_params(const NetworkConfig& cfg) {
    return {dbm_to_watt(cfg.p_id_dbm), noise_power_watt(cfg), cfg.bandwidth_hz, cfg.coherent_combining};
}

double received_power(const ChannelSet& ch, std::size_t ue, const Reflection* assigned, const PhyParams& p) {
    const cd f = ch.f(ue);
    const cd c = assigned ? cascade_gain(ch.g(assigned->block), assigned->phases, ch.h(ue, assigned->block)) : cd{};
    if (p.coherent) return p.tx_power_w * std::norm(c + f);
    return p.tx_power_w * (std::norm(c) + std::norm(f));
}

double received_power_full(const ChannelSet& ch, std::size_t ue, std::span<const Reflection> active,
                           const PhyParams& p) {
    const cd f = ch.f(ue);
    if (p.coherent) {
        cd sum = f;
        for (const auto& r : active) sum += cascade_gain(ch.g(r.block), r.phases, ch.h(ue, r.block));
        return p.tx_power_w * std::norm(sum);
    }
    double sum = std::norm(f);
    for (const auto& r : active) sum += std::norm(cascade_gain(ch.g(r.block), r.phases, ch.h(ue, r.block)));
    return p.tx_power_w * sum;
}

SicOrder sic_order(std::span<const std::size_t> members, std::span<const double> powers) {
    if (members.size() != powers.size()) throw std::invalid_argument("sic_order: size mismatch");
    std::vector<std::size_t> idx(members.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (powers[a] != powers[b]) return powers[a] > powers[b];
        return members[a] < members[b];
    });
    SicOrder order;
    order.ordered_ues.reserve(idx.size());
    for (std::size_t i : idx) order.ordered_ues.push_back(members[i]);
    return order;
}

std::vector<double> sic_sinrs(std::span<const std::size_t> members, std::span<const double> powers, double noise_w) {
    if (members.size() != powers.size()) throw std::invalid_argument("sic_sinrs: size mismatch");
    std::vector<std::size_t> idx(members.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (powers[a] != powers[b]) return powers[a] > powers[b];
        return members[a] < members[b];
    });
    std::vector<double> sinr(members.size());
    double later = 0.0;  // power of members decoded after the current one
    for (std::size_t k = idx.size(); k-- > 0;) {
        const std::size_t i = idx[k];
        sinr[i] = powers[i] / (later + noise_w);
        later += powers[i];
    }
    return sinr;
}

double sinr_full(const ChannelSet& ch, std::span<const std::size_t> cluster, std::size_t ue,
                 std::span<const Reflection> active, const PhyParams& p) {
    if (cluster.empty()) throw std::invalid_argument("sinr_full: empty cluster");
    const std::size_t pos = position_of(cluster, ue);
    std::vector<double> powers;
    powers.reserve(cluster.size());
    for (std::size_t m : cluster) powers.push_back(received_power_full(ch, m, active, p));
    return sic_sinrs(cluster, powers, p.noise_w)[pos];
}

double sinr_simplified(const ChannelSet& ch, std::span<const std::size_t> cluster, std::size_t ue,
                       const Reflection* assigned, const PhyParams& p) {
    if (cluster.empty()) throw std::invalid_argument("sinr_simplified: empty cluster");
    const std::size_t pos = position_of(cluster, ue);
    std::vector<double> powers;
    powers.reserve(cluster.size());
    for (std::size_t m : cluster) powers.push_back(received_power(ch, m, assigned, p));
    return sic_sinrs(cluster, powers, p.noise_w)[pos];
}

ClusterRate sic_rate(std::span<const std::size_t> members, std::span<const double> powers, const PhyParams& p) {
    ClusterRate out;
    out.order = sic_order(members, powers);
    out.sinrs = sic_sinrs(members, powers, p.noise_w);
    for (double s : out.sinrs) out.rate_bps += p.bandwidth_hz * std::log2(1.0 + s);
    return out;
}

ClusterRate cluster_sum_rate(const ChannelSet& ch, std::span<const std::size_t> cluster,
                             std::optional<std::size_t> block, std::optional<std::size_t> aligned_ue,
                             const PhyParams& p) {
    std::optional<Reflection> refl;
    if (block && aligned_ue) {
        position_of(cluster, *aligned_ue);
        refl = Reflection{*block, align_phases(ch.f(*aligned_ue), ch.g(*block), ch.h(*aligned_ue, *block))};
    }
    std::vector<double> powers;
    powers.reserve(cluster.size());
    for (std::size_t m : cluster) powers.push_back(received_power(ch, m, refl ? &*refl : nullptr, p));
    return sic_rate(cluster, powers, p);
}

CascadeTable::CascadeTable(const ChannelSet& ch, AlignmentDiagnostics* diag)
    : ues_(ch.num_ues()), blocks_(ch.num_blocks()), table_(blocks_ * ues_ * ues_), f_(ues_) {
    const std::size_t N = ch.num_elements();
    std::vector<cd> weights(N);
    for (std::size_t u = 0; u < ues_; ++u) f_[u] = ch.f(u);
    for (std::size_t b = 0; b < blocks_; ++b) {
        const auto g = ch.g(b);
        for (std::size_t a = 0; a < ues_; ++a) {
            const PhaseVector phi = align_phases(ch.f(a), g, ch.h(a, b), diag);
            for (std::size_t n = 0; n < N; ++n) weights[n] = g[n] * phi.phases[n];
            cd* row = table_.data() + (b * ues_ + a) * ues_;
            for (std::size_t u = 0; u < ues_; ++u) {
                const cd* h = ch.h(u, b).data();
                double re = 0.0;
                double im = 0.0;
                for (std::size_t n = 0; n < N; ++n) {
                    re += weights[n].real() * h[n].real() - weights[n].imag() * h[n].imag();
                    im += weights[n].real() * h[n].imag() + weights[n].imag() * h[n].real();
                }
                row[u] = {re, im};
            }
        }
    }
}

double CascadeTable::received_power(std::size_t ue, std::optional<std::size_t> block, std::size_t aligned,
                                    const PhyParams& p) const {
    const cd f = f_[ue];
    const cd c = block ? gain(*block, aligned, ue) : cd{};
    if (p.coherent) return p.tx_power_w * std::norm(c + f);
    return p.tx_power_w * (std::norm(c) + std::norm(f));
}

}  // namespace risnoma
