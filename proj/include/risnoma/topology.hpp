#pragma once

#include <cstddef>
#include <vector>

#include "risnoma/config.hpp"
#include "risnoma/rng.hpp"

namespace risnoma {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double horizontal_distance(const Point3& a, const Point3& b);
double distance_3d(const Point3& a, const Point3& b);

struct NetworkStructure {
    std::size_t clusters;      // C = R
    std::size_t max_cluster;   // K = ceil(U / R)
    std::size_t blocks;        // B = M * G
};

/// Cluster count, cluster-size cap and block count implied by cfg.
NetworkStructure derive_structure(const NetworkConfig& cfg);

/// Positions of the BS (origin), UEs and physical RISs. Blocks of one RIS
/// share its position.
struct Placement {
    Point3 bs_pos;
    std::vector<Point3> ue_pos;
    std::vector<Point3> ris_pos;
    std::vector<std::size_t> block_owner;  // physical RIS of each block, b / G

    const Point3& block_pos(std::size_t b) const { return ris_pos[block_owner[b]]; }
};

/// UEs area-uniform over the disk of radius D, RISs area-uniform over the
/// annulus [D_in, D_out]. UEs are drawn first with two draws each, so UE
/// positions do not depend on the RIS parameters.
Placement generate_topology(const NetworkConfig& cfg, RandomStream& rng);

}  // namespace risnoma
