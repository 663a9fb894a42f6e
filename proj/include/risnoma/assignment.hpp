#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <vector>

namespace risnoma {

/// Marks a (cluster, UE, block) triple that must not be selected.
inline constexpr double kForbidden = -std::numeric_limits<double>::infinity();

/// Index value meaning "no block".
inline constexpr std::size_t kNoBlock = std::numeric_limits<std::size_t>::max();

/// Profit tensor of a three-dimensional axial assignment over
/// clusters x candidate UEs x blocks, together with the alignment target
/// that produced each profit.
class CostTensor {
public:
    CostTensor() = default;
    CostTensor(std::size_t clusters, std::size_t ues, std::size_t blocks);

    std::size_t clusters() const { return r_; }
    std::size_t ues() const { return a_; }
    std::size_t blocks() const { return b_; }
    std::size_t max_dim() const;

    double& q(std::size_t r, std::size_t u, std::size_t b) { return q_[index(r, u, b)]; }
    double q(std::size_t r, std::size_t u, std::size_t b) const { return q_[index(r, u, b)]; }
    std::size_t& iota(std::size_t r, std::size_t u, std::size_t b) { return iota_[index(r, u, b)]; }
    std::size_t iota(std::size_t r, std::size_t u, std::size_t b) const { return iota_[index(r, u, b)]; }

    bool operator==(const CostTensor&) const = default;

private:
    std::size_t index(std::size_t r, std::size_t u, std::size_t b) const { return (r * a_ + u) * b_ + b; }

    std::size_t r_ = 0;
    std::size_t a_ = 0;
    std::size_t b_ = 0;
    std::vector<double> q_;
    std::vector<std::size_t> iota_;
};

struct Triple {
    std::size_t r;
    std::size_t u;
    std::size_t b;  // kNoBlock when the UE was paired with a padding block

    bool operator==(const Triple&) const = default;
};

/// Selected triples over real clusters and real UEs, sorted by cluster.
/// Each real UE appears at most once, each block at most once and each
/// cluster at most once; a UE missing from the list was paired with a
/// padding cluster.
struct Assignment3D {
    std::vector<Triple> triples;
    double value = 0.0;
};

class SizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Pads every axis to V = max(R, A, B) with zero-profit entries.
CostTensor pad_tensor(const CostTensor& q);

/// Total profit of a selection, or -inf when it uses a forbidden triple.
double assignment_value(const CostTensor& q, const std::vector<Triple>& triples);

/// Throws unless the selection respects the three axial constraints.
void check_axial(const CostTensor& q, const Assignment3D& a);

/// Exhaustive branch and bound; globally optimal. Rejects V > 8.
Assignment3D solve_exact(const CostTensor& q);

/// Highest-profit-first greedy selection.
Assignment3D solve_greedy(const CostTensor& q);

struct HeuristicOptions {
    std::size_t rounds = 20;           // Lagrangian relaxation rounds
    std::vector<double>* trace = nullptr;  // incumbent value after every accepted move
};

/// Lagrangian relaxation of the block axis with an exact 2D matching per
/// round, greedy block repair, then 2-swap and 2D re-matching local search.
Assignment3D solve_heuristic(const CostTensor& q, const HeuristicOptions& opts = {});

/// Maximum-profit perfect matching of a square matrix (row-major, n x n).
/// Returns the column matched to each row. O(n^3).
std::vector<std::size_t> max_weight_matching(const std::vector<double>& profit, std::size_t n);

/// Plain-text tensor format: a header "R A B" followed by R*A*B profits in
/// (r, u, b) row-major order, one per line; "-inf" marks forbidden triples.
void write_tensor(std::ostream& os, const CostTensor& q);
CostTensor read_tensor(std::istream& is);

}  // namespace risnoma
