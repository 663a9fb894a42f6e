#include "risnoma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace risnoma {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kEffectiveEnvHeight = 1.0;  // h_E for UT below 13 m

enum StreamTag : std::uint64_t { kDirect = 1, kRisBsLos = 2, kUeRisLos = 3, kRisBsFading = 4, kUeRisFading = 5 };

double c_prime(double h_ut) {
    if (h_ut <= 13.0) return 0.0;
    return std::pow((h_ut - 13.0) / 10.0, 1.5);
}

LinkStats make_link(double d2d, double d3d, LinkHeights heights, const NetworkConfig& cfg, RandomStream& rng,
                    bool force_los = false) {
    LinkStats s;
    s.is_los = force_los || rng.bernoulli(los_probability(d2d, heights.ut));
    s.rician_k = s.is_los ? cfg.k_los : 0.0;
    s.pathloss_linear = std::pow(10.0, pathloss_db(d3d, std::max(d2d, 1e-9), cfg.carrier_hz, s.is_los, heights) / 10.0);
    return s;
}

// Unit-modulus LoS phasors of an N-element half-wavelength line array. The
// array axis is tangential (broadside faces the BS); sin_theta is the
// projection of the unit direction towards the far terminal on that axis.
void fill_array_phasors(std::span<cd> out, double d3d, double wavelength, double sin_theta) {
    const double base = -2.0 * std::numbers::pi * d3d / wavelength;
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = std::polar(1.0, base - std::numbers::pi * static_cast<double>(n) * sin_theta);
    }
}

double tangential_sine(const Point3& ris, const Point3& other) {
    const double r = std::hypot(ris.x, ris.y);
    const double dx = other.x - ris.x;
    const double dy = other.y - ris.y;
    const double d = std::hypot(dx, dy);
    if (r == 0.0 || d == 0.0) return 0.0;
    // tangent = (-y, x) / r
    return (-ris.y * dx + ris.x * dy) / (r * d);
}

}  // namespace

double los_probability(double d2d, double ue_height) {
    if (!(d2d >= 0.0)) throw std::invalid_argument("los_probability: negative distance");
    if (d2d <= 18.0) return 1.0;
    const double base = 18.0 / d2d + std::exp(-d2d / 63.0) * (1.0 - 18.0 / d2d);
    const double boost = 1.0 + c_prime(ue_height) * 1.25 * std::pow(d2d / 100.0, 3) * std::exp(-d2d / 150.0);
    return std::clamp(base * boost, 0.0, 1.0);
}

double pathloss_db(double d3d, double d2d, double carrier_hz, bool is_los, LinkHeights heights) {
    if (carrier_hz < 0.5e9 || carrier_hz > 100e9) {
        throw std::invalid_argument("pathloss_db: carrier frequency outside [0.5, 100] GHz");
    }
    if (!(d2d > 0.0) || d3d < d2d) throw std::invalid_argument("pathloss_db: requires d3d >= d2d > 0");

    const double fc_ghz = carrier_hz / 1e9;
    const double h_bs = std::max(heights.bs - kEffectiveEnvHeight, 1e-3);
    const double h_ut = std::max(heights.ut - kEffectiveEnvHeight, 1e-3);
    const double breakpoint = 4.0 * h_bs * h_ut * carrier_hz / kSpeedOfLight;

    double pl_los;
    if (d2d <= breakpoint) {
        pl_los = 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz);
    } else {
        const double dh = heights.bs - heights.ut;
        pl_los = 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) -
                 9.0 * std::log10(breakpoint * breakpoint + dh * dh);
    }
    if (is_los) return pl_los;

    const double pl_nlos =
        13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) - 0.6 * (heights.ut - 1.5);
    return std::max(pl_los, pl_nlos);
}

std::vector<cd> draw_link(const LinkStats& stats, std::span<const cd> los, RandomStream& rng) {
    const double amp = std::sqrt(1.0 / stats.pathloss_linear);
    const double k = stats.rician_k;
    const double w_los = std::isinf(k) ? 1.0 : std::sqrt(k / (k + 1.0));
    const double w_nlos = std::isinf(k) ? 0.0 : std::sqrt(1.0 / (k + 1.0));
    std::vector<cd> out(los.size());
    for (std::size_t n = 0; n < los.size(); ++n) {
        out[n] = amp * (w_los * los[n] + w_nlos * rng.complex_normal());
    }
    return out;
}

std::vector<cd> draw_link(const LinkStats& stats, std::size_t dim, RandomStream& rng) {
    const std::vector<cd> ones(dim, cd{1.0, 0.0});
    return draw_link(stats, ones, rng);
}

ChannelSet::ChannelSet(std::size_t ues, std::size_t blocks, std::size_t elements)
    : ues_(ues),
      blocks_(blocks),
      elements_(elements),
      h_(ues * blocks * elements),
      g_(blocks * elements),
      f_(ues) {}

ChannelSet generate_channels(const Placement& placement, const NetworkConfig& cfg, RandomStream& rng,
                             LinkBudget* budget) {
    const std::size_t U = placement.ue_pos.size();
    const std::size_t M = placement.ris_pos.size();
    const std::size_t B = placement.block_owner.size();
    const std::size_t N = cfg.elements_per_block;
    const double wavelength = kSpeedOfLight / cfg.carrier_hz;

    ChannelSet ch(U, B, N);
    LinkBudget local;
    LinkBudget& lb = budget ? *budget : local;
    lb.direct.assign(U, {});
    lb.ris_bs.assign(M, {});
    lb.ue_ris.assign(U * M, {});

    // Direct links: LoS state and fading from one stream.
    RandomStream direct_rng = rng.split(kDirect);
    const LinkHeights bs_ue{cfg.bs_height_m, cfg.ue_height_m};
    for (std::size_t u = 0; u < U; ++u) {
        const Point3& ue = placement.ue_pos[u];
        const double d2d = horizontal_distance(ue, placement.bs_pos);
        const double d3d = distance_3d(ue, placement.bs_pos);
        lb.direct[u] = make_link(d2d, d3d, bs_ue, cfg, direct_rng);
        const cd los = std::polar(1.0, -2.0 * std::numbers::pi * d3d / wavelength);
        ch.f(u) = draw_link(lb.direct[u], std::span<const cd>(&los, 1), direct_rng)[0];
    }

    // LoS states are drawn per physical link before any N-dependent fading.
    RandomStream ris_bs_los = rng.split(kRisBsLos);
    const LinkHeights bs_ris{cfg.bs_height_m, cfg.ris_height_m};
    for (std::size_t m = 0; m < M; ++m) {
        const Point3& ris = placement.ris_pos[m];
        lb.ris_bs[m] = make_link(horizontal_distance(ris, placement.bs_pos), distance_3d(ris, placement.bs_pos),
                                 bs_ris, cfg, ris_bs_los, cfg.force_ris_bs_los);
    }
    RandomStream ue_ris_los = rng.split(kUeRisLos);
    const LinkHeights ris_ue{std::max(cfg.ris_height_m, cfg.ue_height_m), std::min(cfg.ris_height_m, cfg.ue_height_m)};
    for (std::size_t u = 0; u < U; ++u) {
        for (std::size_t m = 0; m < M; ++m) {
            const Point3& ue = placement.ue_pos[u];
            const Point3& ris = placement.ris_pos[m];
            lb.ue_ris[u * M + m] =
                make_link(horizontal_distance(ue, ris), distance_3d(ue, ris), ris_ue, cfg, ue_ris_los);
        }
    }

    std::vector<cd> phasors(N);
    RandomStream g_rng = rng.split(kRisBsFading);
    for (std::size_t b = 0; b < B; ++b) {
        const std::size_t m = placement.block_owner[b];
        const Point3& ris = placement.ris_pos[m];
        fill_array_phasors(phasors, distance_3d(ris, placement.bs_pos), wavelength,
                           tangential_sine(ris, placement.bs_pos));
        const auto coeffs = draw_link(lb.ris_bs[m], phasors, g_rng);
        std::copy(coeffs.begin(), coeffs.end(), ch.g(b).begin());
    }

    RandomStream h_rng = rng.split(kUeRisFading);
    for (std::size_t u = 0; u < U; ++u) {
        const Point3& ue = placement.ue_pos[u];
        for (std::size_t b = 0; b < B; ++b) {
            const std::size_t m = placement.block_owner[b];
            const Point3& ris = placement.ris_pos[m];
            fill_array_phasors(phasors, distance_3d(ue, ris), wavelength, tangential_sine(ris, ue));
            const auto coeffs = draw_link(lb.ue_ris[u * M + m], phasors, h_rng);
            std::copy(coeffs.begin(), coeffs.end(), ch.h(u, b).begin());
        }
    }
    return ch;
}

}  // namespace risnoma
