#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "risnoma/assignment.hpp"

namespace oracle {

// Optimum of a 3D axial assignment by enumerating every (UE permutation,
// block permutation) pair of the zero-padded square tensor.
inline double axial_brute_force(const risnoma::CostTensor& q) {
    const std::size_t v = std::max({q.clusters(), q.ues(), q.blocks()});
    auto at = [&](std::size_t r, std::size_t u, std::size_t b) {
        if (r >= q.clusters() || u >= q.ues() || b >= q.blocks()) return 0.0;
        return q.q(r, u, b);
    };
    std::vector<std::size_t> pu(v), pb(v);
    std::iota(pu.begin(), pu.end(), 0);
    double best = -std::numeric_limits<double>::infinity();
    do {
        std::iota(pb.begin(), pb.end(), 0);
        do {
            double s = 0.0;
            for (std::size_t r = 0; r < v; ++r) s += at(r, pu[r], pb[r]);
            best = std::max(best, s);
        } while (std::next_permutation(pb.begin(), pb.end()));
    } while (std::next_permutation(pu.begin(), pu.end()));
    return best;
}

// Two-user SIC sum rate (bit/s/Hz) with decoding by received power and unit
// noise; -1 when a floor is missed.
inline double two_user_rate(double p1, double p2, double g1, double g2, double f1, double f2, double noise = 1.0) {
    const double r1 = p1 * g1, r2 = p2 * g2;
    double s1, s2;
    if (r1 >= r2) {
        s1 = r1 / (r2 + noise);
        s2 = r2 / noise;
    } else {
        s2 = r2 / (r1 + noise);
        s1 = r1 / noise;
    }
    if (s1 < f1 || s2 < f2) return -1.0;
    return std::log2(1.0 + s1) + std::log2(1.0 + s2);
}

// Best two-user rate on a 50x50 grid of powers in dBm, zoomed three times
// around the incumbent; -1 when no grid point meets both floors.
inline double two_user_grid(double g1, double g2, double f1, double f2, double lo_dbm, double hi_dbm,
                            double noise = 1.0) {
    auto watt = [](double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); };
    double lo1 = lo_dbm, hi1 = hi_dbm, lo2 = lo_dbm, hi2 = hi_dbm;
    double best = -1.0;
    for (int level = 0; level <= 3; ++level) {
        const int n = 50;
        const double s1 = (hi1 - lo1) / (n - 1), s2 = (hi2 - lo2) / (n - 1);
        double b1 = lo1, b2 = lo2;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double d1 = lo1 + i * s1, d2 = lo2 + j * s2;
                const double v = two_user_rate(watt(d1), watt(d2), g1, g2, f1, f2, noise);
                if (v > best) {
                    best = v;
                    b1 = d1;
                    b2 = d2;
                }
            }
        }
        lo1 = std::max(lo_dbm, b1 - s1);
        hi1 = std::min(hi_dbm, b1 + s1);
        lo2 = std::max(lo_dbm, b2 - s2);
        hi2 = std::min(hi_dbm, b2 + s2);
    }
    return best;
}

}  // namespace oracle
