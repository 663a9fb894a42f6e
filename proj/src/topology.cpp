#include "risnoma/topology.hpp"

#include <cmath>
#include <numbers>

namespace risnoma {

double horizontal_distance(const Point3& a, const Point3& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double distance_3d(const Point3& a, const Point3& b) {
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

NetworkStructure derive_structure(const NetworkConfig& cfg) {
    if (cfg.num_rbs == 0) throw ConfigError("R: must be at least 1");
    if (cfg.num_ues < cfg.num_rbs) throw ConfigError("U: must be >= R (each cluster is seeded with one UE)");
    return {cfg.num_rbs, (cfg.num_ues + cfg.num_rbs - 1) / cfg.num_rbs, cfg.num_blocks()};
}

namespace {

// Area-uniform radius on [inner, outer]: inverse CDF of r^2.
double annulus_radius(double inner, double outer, double u) {
    return std::sqrt(inner * inner + u * (outer * outer - inner * inner));
}

Point3 polar(double r, double theta, double z) {
    return {r * std::cos(theta), r * std::sin(theta), z};
}

}  // namespace

Placement generate_topology(const NetworkConfig& cfg, RandomStream& rng) {
    cfg.validate();
    constexpr double two_pi = 2.0 * std::numbers::pi;

    Placement p;
    p.bs_pos = {0.0, 0.0, cfg.bs_height_m};

    p.ue_pos.reserve(cfg.num_ues);
    for (std::size_t u = 0; u < cfg.num_ues; ++u) {
        const double r = cfg.cell_radius_m * std::sqrt(rng.uniform());
        const double theta = two_pi * rng.uniform();
        p.ue_pos.push_back(polar(r, theta, cfg.ue_height_m));
    }

    p.ris_pos.reserve(cfg.num_ris);
    for (std::size_t m = 0; m < cfg.num_ris; ++m) {
        const double r = annulus_radius(cfg.ris_inner_m, cfg.ris_outer_m, rng.uniform());
        const double theta = two_pi * rng.uniform();
        p.ris_pos.push_back(polar(r, theta, cfg.ris_height_m));
    }

    p.block_owner.resize(cfg.num_blocks());
    for (std::size_t b = 0; b < p.block_owner.size(); ++b) p.block_owner[b] = b / cfg.blocks_per_ris;
    return p;
}

}  // namespace risnoma
