#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "risnoma/config.hpp"
#include "risnoma/rng.hpp"
#include "risnoma/topology.hpp"

namespace risnoma {

using cd = std::complex<double>;

/// Large-scale parameters of one link.
struct LinkStats {
    double pathloss_linear = 1.0;  // lambda, >= 1 for physical links
    double rician_k = 0.0;         // 0 whenever the link is NLoS
    bool is_los = false;
};

/// Heights of the two terminals of a link; `bs` is the elevated end.
struct LinkHeights {
    double bs;
    double ut;
};

/// UMa line-of-sight probability for horizontal distance d2d and terminal
/// height ue_height (m).
double los_probability(double d2d, double ue_height);

/// UMa path loss in dB. Frequencies outside [0.5, 100] GHz are rejected.
double pathloss_db(double d3d, double d2d, double carrier_hz, bool is_los, LinkHeights heights);

/// Coefficients sqrt(1/lambda) * (sqrt(K/(K+1)) * los[n] + sqrt(1/(K+1)) * CN(0,1)).
/// One coefficient per entry of `los`, which must hold unit-modulus phasors.
std::vector<cd> draw_link(const LinkStats& stats, std::span<const cd> los, RandomStream& rng);

/// Same with an all-ones LoS phasor of length dim.
std::vector<cd> draw_link(const LinkStats& stats, std::size_t dim, RandomStream& rng);

/// All small- and large-scale channels of one trial.
class ChannelSet {
public:
    ChannelSet() = default;
    ChannelSet(std::size_t ues, std::size_t blocks, std::size_t elements);

    std::size_t num_ues() const { return ues_; }
    std::size_t num_blocks() const { return blocks_; }
    std::size_t num_elements() const { return elements_; }

    /// UE u -> elements of block b.
    std::span<cd> h(std::size_t u, std::size_t b) { return {h_.data() + (u * blocks_ + b) * elements_, elements_}; }
    std::span<const cd> h(std::size_t u, std::size_t b) const {
        return {h_.data() + (u * blocks_ + b) * elements_, elements_};
    }
    /// Elements of block b -> BS.
    std::span<cd> g(std::size_t b) { return {g_.data() + b * elements_, elements_}; }
    std::span<const cd> g(std::size_t b) const { return {g_.data() + b * elements_, elements_}; }
    /// UE u -> BS.
    cd& f(std::size_t u) { return f_[u]; }
    cd f(std::size_t u) const { return f_[u]; }

    bool operator==(const ChannelSet&) const = default;

private:
    std::size_t ues_ = 0;
    std::size_t blocks_ = 0;
    std::size_t elements_ = 0;
    std::vector<cd> h_;
    std::vector<cd> g_;
    std::vector<cd> f_;
};

/// Large-scale state of every link of a trial, kept for diagnostics.
struct LinkBudget {
    std::vector<LinkStats> direct;   // per UE
    std::vector<LinkStats> ris_bs;   // per physical RIS
    std::vector<LinkStats> ue_ris;   // per (UE, physical RIS), row-major
};

/// Draws LoS states, path losses and fading for every link. Each link class
/// uses its own child stream of rng, so the direct channels f do not depend
/// on N, M or the RIS geometry.
ChannelSet generate_channels(const Placement& placement, const NetworkConfig& cfg, RandomStream& rng,
                             LinkBudget* budget = nullptr);

}  // namespace risnoma
