#include "risnoma/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace risnoma {

CostTensor::CostTensor(std::size_t clusters, std::size_t ues, std::size_t blocks)
    : r_(clusters), a_(ues), b_(blocks), q_(clusters * ues * blocks, 0.0), iota_(clusters * ues * blocks, 0) {}

std::size_t CostTensor::max_dim() const { return std::max({r_, a_, b_}); }

CostTensor pad_tensor(const CostTensor& q) {
    const std::size_t v = q.max_dim();
    if (q.clusters() == v && q.ues() == v && q.blocks() == v) return q;
    CostTensor out(v, v, v);
    for (std::size_t r = 0; r < q.clusters(); ++r)
        for (std::size_t u = 0; u < q.ues(); ++u)
            for (std::size_t b = 0; b < q.blocks(); ++b) {
                out.q(r, u, b) = q.q(r, u, b);
                out.iota(r, u, b) = q.iota(r, u, b);
            }
    return out;
}

double assignment_value(const CostTensor& q, const std::vector<Triple>& triples) {
    double v = 0.0;
    for (const auto& t : triples) {
        if (t.b == kNoBlock) continue;
        const double c = q.q(t.r, t.u, t.b);
        if (c == kForbidden) return kForbidden;
        v += c;
    }
    return v;
}

void check_axial(const CostTensor& q, const Assignment3D& a) {
    std::vector<char> r_used(q.clusters()), u_used(q.ues()), b_used(q.blocks());
    for (const auto& t : a.triples) {
        if (t.r >= q.clusters() || t.u >= q.ues()) throw std::logic_error("assignment: index out of range");
        if (r_used[t.r]++) throw std::logic_error("assignment: cluster used twice");
        if (u_used[t.u]++) throw std::logic_error("assignment: UE used twice");
        if (t.b != kNoBlock) {
            if (t.b >= q.blocks()) throw std::logic_error("assignment: block out of range");
            if (b_used[t.b]++) throw std::logic_error("assignment: block used twice");
            if (q.q(t.r, t.u, t.b) == kForbidden) throw std::logic_error("assignment: forbidden triple selected");
        }
    }
}

namespace {

// Square working copy of a tensor. Forbidden entries become a finite penalty
// larger in magnitude than any feasible total, so the solvers only pick them
// when nothing else completes the assignment.
struct Square {
    std::size_t v = 0;
    std::vector<double> p;

    double at(std::size_t r, std::size_t u, std::size_t b) const { return p[(r * v + u) * v + b]; }
};

Square make_square(const CostTensor& q, double scale) {
    Square s;
    s.v = q.max_dim();
    s.p.assign(s.v * s.v * s.v, 0.0);
    const double penalty = -2.0 * static_cast<double>(s.v + 1);
    for (std::size_t r = 0; r < q.clusters(); ++r)
        for (std::size_t u = 0; u < q.ues(); ++u)
            for (std::size_t b = 0; b < q.blocks(); ++b) {
                const double c = q.q(r, u, b);
                s.p[(r * s.v + u) * s.v + b] = c == kForbidden ? penalty * scale : c;
            }
    return s;
}

double max_abs_finite(const CostTensor& q) {
    double m = 0.0;
    for (std::size_t r = 0; r < q.clusters(); ++r)
        for (std::size_t u = 0; u < q.ues(); ++u)
            for (std::size_t b = 0; b < q.blocks(); ++b) {
                const double c = q.q(r, u, b);
                if (c != kForbidden) m = std::max(m, std::abs(c));
            }
    return m;
}

// Solution over the padded square: slot r holds (u[r], b[r]).
struct Slots {
    std::vector<std::size_t> u;
    std::vector<std::size_t> b;
};

double slots_value(const Square& s, const Slots& x) {
    double v = 0.0;
    for (std::size_t r = 0; r < s.v; ++r) v += s.at(r, x.u[r], x.b[r]);
    return v;
}

Assignment3D strip(const CostTensor& q, const Slots& x) {
    Assignment3D out;
    for (std::size_t r = 0; r < x.u.size(); ++r) {
        if (r >= q.clusters() || x.u[r] >= q.ues()) continue;
        out.triples.push_back({r, x.u[r], x.b[r] < q.blocks() ? x.b[r] : kNoBlock});
    }
    out.value = assignment_value(q, out.triples);
    return out;
}

Slots greedy_slots(const Square& s) {
    const std::size_t v = s.v;
    std::vector<std::uint32_t> order(v * v * v);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return s.p[a] > s.p[b]; });
    Slots x{std::vector<std::size_t>(v, v), std::vector<std::size_t>(v, v)};
    std::vector<char> u_used(v), b_used(v);
    std::size_t placed = 0;
    for (std::uint32_t idx : order) {
        const std::size_t r = idx / (v * v);
        const std::size_t u = (idx / v) % v;
        const std::size_t b = idx % v;
        if (x.u[r] != v || u_used[u] || b_used[b]) continue;
        x.u[r] = u;
        x.b[r] = b;
        u_used[u] = b_used[b] = 1;
        if (++placed == v) break;
    }
    return x;
}

class LocalSearch {
public:
    LocalSearch(const Square& s, double eps, std::vector<double>* trace, double trace_scale = 1.0)
        : s_(s), eps_(eps), trace_(trace), trace_scale_(trace_scale) {}

    double run(Slots& x) {
        double value = slots_value(s_, x);
        bool improved = true;
        while (improved) {
            improved = false;
            improved |= two_swap(x, value);
            improved |= rematch_blocks(x, value);
            improved |= rematch_ues(x, value);
            improved |= rematch_clusters(x, value);
        }
        return value;
    }

private:
    void accept(double& value, double delta) {
        value += delta;
        if (trace_) trace_->push_back(value * trace_scale_);
    }

    bool two_swap(Slots& x, double& value) {
        bool any = false;
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t i = 0; i < s_.v; ++i) {
                for (std::size_t j = i + 1; j < s_.v; ++j) {
                    const double before = s_.at(i, x.u[i], x.b[i]) + s_.at(j, x.u[j], x.b[j]);
                    const double swap_u = s_.at(i, x.u[j], x.b[i]) + s_.at(j, x.u[i], x.b[j]);
                    const double swap_b = s_.at(i, x.u[i], x.b[j]) + s_.at(j, x.u[j], x.b[i]);
                    if (swap_u - before > eps_ && swap_u >= swap_b) {
                        std::swap(x.u[i], x.u[j]);
                        accept(value, swap_u - before);
                        improved = any = true;
                    } else if (swap_b - before > eps_) {
                        std::swap(x.b[i], x.b[j]);
                        accept(value, swap_b - before);
                        improved = any = true;
                    }
                }
            }
        }
        return any;
    }

    // Re-solves one axis exactly while the pairing of the other two is held.
    template <typename Profit, typename Apply>
    bool rematch(double& value, Profit profit, Apply apply) {
        const std::size_t v = s_.v;
        std::vector<double> m(v * v);
        for (std::size_t i = 0; i < v; ++i)
            for (std::size_t j = 0; j < v; ++j) m[i * v + j] = profit(i, j);
        const auto match = max_weight_matching(m, v);
        double current = 0.0;
        double proposed = 0.0;
        for (std::size_t i = 0; i < v; ++i) {
            current += m[i * v + i];
            proposed += m[i * v + match[i]];
        }
        if (proposed - current <= eps_) return false;
        apply(match);
        accept(value, proposed - current);
        return true;
    }

    bool rematch_blocks(Slots& x, double& value) {
        // Rows: slots; columns: slot whose block is taken. Identity = current.
        const Slots old = x;
        return rematch(
            value, [&](std::size_t i, std::size_t j) { return s_.at(i, old.u[i], old.b[j]); },
            [&](const std::vector<std::size_t>& m) {
                for (std::size_t i = 0; i < s_.v; ++i) x.b[i] = old.b[m[i]];
            });
    }

    bool rematch_ues(Slots& x, double& value) {
        const Slots old = x;
        return rematch(
            value, [&](std::size_t i, std::size_t j) { return s_.at(i, old.u[j], old.b[i]); },
            [&](const std::vector<std::size_t>& m) {
                for (std::size_t i = 0; i < s_.v; ++i) x.u[i] = old.u[m[i]];
            });
    }

    bool rematch_clusters(Slots& x, double& value) {
        // Moving the (u, b) pair of slot j into slot i.
        const Slots old = x;
        return rematch(
            value, [&](std::size_t i, std::size_t j) { return s_.at(i, old.u[j], old.b[j]); },
            [&](const std::vector<std::size_t>& m) {
                for (std::size_t i = 0; i < s_.v; ++i) {
                    x.u[i] = old.u[m[i]];
                    x.b[i] = old.b[m[i]];
                }
            });
    }

    const Square& s_;
    double eps_;
    std::vector<double>* trace_;
    double trace_scale_;
};

}  // namespace

std::vector<std::size_t> max_weight_matching(const std::vector<double>& profit, std::size_t n) {
    if (profit.size() != n * n) throw std::invalid_argument("max_weight_matching: matrix is not n x n");
    if (n == 0) return {};
    // Shortest augmenting path with potentials on cost = -profit, 1-based.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> pot_row(n + 1, 0.0), pot_col(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> match_col(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        match_col[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match_col[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -profit[(i0 - 1) * n + (j - 1)] - pot_row[i0] - pot_col[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    pot_row[match_col[j]] += delta;
                    pot_col[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match_col[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match_col[j0] = match_col[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j) row_to_col[match_col[j] - 1] = j - 1;
    return row_to_col;
}

Assignment3D solve_greedy(const CostTensor& q) {
    const Square s = make_square(q, std::max(1.0, max_abs_finite(q)));
    return strip(q, greedy_slots(s));
}

Assignment3D solve_exact(const CostTensor& q) {
    const std::size_t v = q.max_dim();
    if (v > 8) throw SizeError("solve_exact: largest dimension " + std::to_string(v) + " exceeds 8");
    if (v == 0) return {};
    const Square s = make_square(q, std::max(1.0, max_abs_finite(q)));

    Slots cur{std::vector<std::size_t>(v), std::vector<std::size_t>(v)};
    Slots best = cur;
    double best_value = -std::numeric_limits<double>::infinity();
    const double eps = 1e-12 * (1.0 + max_abs_finite(q)) * static_cast<double>(v);

    // Optimistic completion: every remaining slot takes its best free pair.
    auto bound = [&](std::size_t from, unsigned u_used, unsigned b_used) {
        double total = 0.0;
        for (std::size_t r = from; r < v; ++r) {
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t u = 0; u < v; ++u) {
                if (u_used >> u & 1u) continue;
                for (std::size_t b = 0; b < v; ++b)
                    if (!(b_used >> b & 1u)) m = std::max(m, s.at(r, u, b));
            }
            total += m;
        }
        return total;
    };

    auto dfs = [&](auto&& self, std::size_t r, unsigned u_used, unsigned b_used, double value) -> void {
        if (r == v) {
            if (value > best_value) {
                best_value = value;
                best = cur;
            }
            return;
        }
        for (std::size_t u = 0; u < v; ++u) {
            if (u_used >> u & 1u) continue;
            for (std::size_t b = 0; b < v; ++b) {
                if (b_used >> b & 1u) continue;
                const double next = value + s.at(r, u, b);
                const unsigned nu = u_used | 1u << u;
                const unsigned nb = b_used | 1u << b;
                if (next + bound(r + 1, nu, nb) <= best_value + eps) continue;
                cur.u[r] = u;
                cur.b[r] = b;
                self(self, r + 1, nu, nb, next);
            }
        }
    };
    dfs(dfs, 0, 0u, 0u, 0.0);
    return strip(q, best);
}

Assignment3D solve_heuristic(const CostTensor& q, const HeuristicOptions& opts) {
    const std::size_t v = q.max_dim();
    if (v == 0) return {};
    // Work on costs normalized to [-1, 1] so the subgradient step is scale free.
    const double scale = max_abs_finite(q) > 0.0 ? max_abs_finite(q) : 1.0;
    Square s = make_square(q, scale);
    for (double& c : s.p) c /= scale;
    const double eps = 1e-12;

    LocalSearch search(s, eps, opts.trace, scale);
    Slots best = greedy_slots(s);
    if (opts.trace) opts.trace->push_back(slots_value(s, best) * scale);
    double best_value = search.run(best);

    std::vector<double> price(v, 0.0);
    std::vector<double> reduced(v * v);
    std::vector<std::size_t> best_block(v * v);
    for (std::size_t t = 1; t <= opts.rounds; ++t) {
        for (std::size_t r = 0; r < v; ++r)
            for (std::size_t u = 0; u < v; ++u) {
                double m = -std::numeric_limits<double>::infinity();
                std::size_t arg = 0;
                for (std::size_t b = 0; b < v; ++b) {
                    const double c = s.at(r, u, b) - price[b];
                    if (c > m) {
                        m = c;
                        arg = b;
                    }
                }
                reduced[r * v + u] = m;
                best_block[r * v + u] = arg;
            }
        const auto match = max_weight_matching(reduced, v);

        // Greedy repair: strongest pairs pick their best free block first.
        std::vector<std::size_t> rows(v);
        std::iota(rows.begin(), rows.end(), 0);
        std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
            return s.at(a, match[a], best_block[a * v + match[a]]) > s.at(b, match[b], best_block[b * v + match[b]]);
        });
        Slots x{std::vector<std::size_t>(v), std::vector<std::size_t>(v, v)};
        std::vector<char> b_used(v);
        for (std::size_t r : rows) {
            x.u[r] = match[r];
            std::size_t arg = v;
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t b = 0; b < v; ++b) {
                if (!b_used[b] && s.at(r, match[r], b) > m) {
                    m = s.at(r, match[r], b);
                    arg = b;
                }
            }
            x.b[r] = arg;
            b_used[arg] = 1;
        }

        LocalSearch round_search(s, eps, nullptr);
        const double value = round_search.run(x);
        if (value > best_value + eps) {
            best_value = value;
            best = x;
            if (opts.trace) opts.trace->push_back(best_value * scale);
        }

        // Subgradient of the relaxed "each block once" constraints.
        std::vector<int> count(v, 0);
        for (std::size_t r = 0; r < v; ++r) ++count[best_block[r * v + match[r]]];
        bool feasible = true;
        const double step = 1.0 / std::sqrt(static_cast<double>(t));
        for (std::size_t b = 0; b < v; ++b) {
            const int g = count[b] - 1;
            if (g != 0) feasible = false;
            price[b] += step * g;
        }
        if (feasible) break;  // relaxed optimum is primal feasible, hence optimal
    }
    return strip(q, best);
}

void write_tensor(std::ostream& os, const CostTensor& q) {
    os << q.clusters() << ' ' << q.ues() << ' ' << q.blocks() << '\n';
    char buf[64];
    for (std::size_t r = 0; r < q.clusters(); ++r)
        for (std::size_t u = 0; u < q.ues(); ++u)
            for (std::size_t b = 0; b < q.blocks(); ++b) {
                const double c = q.q(r, u, b);
                if (c == kForbidden) {
                    os << "-inf\n";
                } else {
                    std::snprintf(buf, sizeof buf, "%.17g", c);
                    os << buf << '\n';
                }
            }
}

CostTensor read_tensor(std::istream& is) {
    std::size_t r = 0, a = 0, b = 0;
    if (!(is >> r >> a >> b)) throw std::runtime_error("read_tensor: missing 'R A B' header");
    CostTensor q(r, a, b);
    std::string tok;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t u = 0; u < a; ++u)
            for (std::size_t k = 0; k < b; ++k) {
                if (!(is >> tok)) throw std::runtime_error("read_tensor: truncated tensor");
                if (tok == "-inf") {
                    q.q(i, u, k) = kForbidden;
                } else {
                    std::size_t used = 0;
                    q.q(i, u, k) = std::stod(tok, &used);
                    if (used != tok.size()) throw std::runtime_error("read_tensor: bad value '" + tok + "'");
                }
            }
    return q;
}

}  // namespace risnoma
