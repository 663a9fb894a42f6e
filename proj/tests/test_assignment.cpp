#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "risnoma/assignment.hpp"
#include "risnoma/rng.hpp"
#include "oracles.hpp"

using namespace risnoma;

namespace {

CostTensor random_tensor(std::size_t r, std::size_t a, std::size_t b, RandomStream& rng) {
    CostTensor q(r, a, b);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < a; ++j)
            for (std::size_t k = 0; k < b; ++k) q.q(i, j, k) = rng.uniform();
    return q;
}

}  // namespace

TEST_CASE("pad_tensor") {
    CostTensor q(2, 1, 2);
    q.q(0, 0, 0) = 1.0;
    q.q(1, 0, 1) = 2.0;
    const auto p = pad_tensor(q);
    CHECK(p.clusters() == 2);
    CHECK(p.ues() == 2);
    CHECK(p.blocks() == 2);
    CHECK(p.q(0, 0, 0) == 1.0);
    CHECK(p.q(1, 0, 1) == 2.0);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t b = 0; b < 2; ++b) CHECK(p.q(r, 1, b) == 0.0);

    RandomStream rng(1);
    const auto sq = random_tensor(3, 3, 3, rng);
    CHECK(pad_tensor(sq) == sq);
}

TEST_CASE("solve_exact small cases") {
    CostTensor one(1, 1, 1);
    one.q(0, 0, 0) = 7.0;
    const auto a = solve_exact(one);
    CHECK(a.value == 7.0);
    REQUIRE(a.triples.size() == 1);
    CHECK(a.triples[0] == Triple{0, 0, 0});

    CostTensor two(2, 2, 2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t u = 0; u < 2; ++u)
            for (std::size_t b = 0; b < 2; ++b) two.q(r, u, b) = 1.0;
    two.q(0, 0, 0) = 5.0;
    two.q(1, 1, 1) = 5.0;
    CHECK(solve_exact(two).value == 10.0);
}

TEST_CASE("solve_exact against permutation enumeration") {
    RandomStream rng(2024);
    for (int rep = 0; rep < 100; ++rep) {
        const auto q = random_tensor(4, 4, 4, rng);
        const auto a = solve_exact(q);
        check_axial(q, a);
        CHECK(a.value == doctest::Approx(oracle::axial_brute_force(q)).epsilon(1e-12));
        CHECK(assignment_value(q, a.triples) == doctest::Approx(a.value).epsilon(1e-12));
    }
    for (int rep = 0; rep < 30; ++rep) {
        const auto q = random_tensor(3, 2, 3, rng);
        CHECK(solve_exact(q).value == doctest::Approx(oracle::axial_brute_force(q)).epsilon(1e-12));
    }
}

TEST_CASE("solve_exact rejects large tensors") {
    CHECK_THROWS_AS(solve_exact(CostTensor(9, 2, 2)), SizeError);
    CHECK_NOTHROW(solve_exact(CostTensor(8, 1, 1)));
}

TEST_CASE("exact selection is invariant to positive scaling") {
    RandomStream rng(6);
    for (int rep = 0; rep < 20; ++rep) {
        auto q = random_tensor(4, 4, 4, rng);
        const auto a = solve_exact(q);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t u = 0; u < 4; ++u)
                for (std::size_t b = 0; b < 4; ++b) q.q(r, u, b) *= 1e5;
        const auto s = solve_exact(q);
        CHECK(s.value == doctest::Approx(a.value * 1e5).epsilon(1e-12));
        CHECK(s.triples == a.triples);
        const auto h = solve_heuristic(q);
        CHECK(h.value > 0.0);
    }
}

TEST_CASE("heuristic on structured instances") {
    SUBCASE("block diagonal") {
        RandomStream rng(9);
        for (int rep = 0; rep < 20; ++rep) {
            auto q = random_tensor(5, 5, 5, rng);
            std::vector<std::size_t> pu(5), pb(5);
            std::iota(pu.begin(), pu.end(), 0);
            std::iota(pb.begin(), pb.end(), 0);
            std::shuffle(pu.begin(), pu.end(), rng.engine());
            std::shuffle(pb.begin(), pb.end(), rng.engine());
            for (std::size_t r = 0; r < 5; ++r) q.q(r, pu[r], pb[r]) = 10.0;
            const auto h = solve_heuristic(q);
            check_axial(q, h);
            CHECK(h.value == doctest::Approx(solve_exact(q).value).epsilon(1e-12));
        }
    }
    SUBCASE("all equal") {
        CostTensor q(5, 5, 5);
        for (std::size_t r = 0; r < 5; ++r)
            for (std::size_t u = 0; u < 5; ++u)
                for (std::size_t b = 0; b < 5; ++b) q.q(r, u, b) = 2.5;
        const auto h = solve_heuristic(q);
        check_axial(q, h);
        CHECK(h.value == doctest::Approx(12.5));
    }
}

TEST_CASE("heuristic quality and trace") {
    RandomStream rng(31);
    int good = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto q = random_tensor(5, 5, 5, rng);
        std::vector<double> trace;
        HeuristicOptions opts;
        opts.trace = &trace;
        const auto h = solve_heuristic(q, opts);
        check_axial(q, h);
        const auto g = solve_greedy(q);
        check_axial(q, g);
        CHECK(h.value >= g.value - 1e-12);
        REQUIRE(!trace.empty());
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1] - 1e-12);
        CHECK(trace.back() == doctest::Approx(h.value).epsilon(1e-12));
        if (h.value >= 0.95 * solve_exact(q).value) ++good;
    }
    CHECK(good >= 190);
}

TEST_CASE("rectangular instances and forbidden triples") {
    RandomStream rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        auto q = random_tensor(4, 3, 5, rng);
        for (std::size_t b = 0; b < 5; ++b) q.q(1, 2, b) = kForbidden;
        q.q(0, 0, 0) = kForbidden;
        for (const auto& a : {solve_exact(q), solve_heuristic(q), solve_greedy(q)}) {
            check_axial(q, a);
            CHECK(std::isfinite(a.value));
            for (const auto& t : a.triples) {
                CHECK(!(t.r == 1 && t.u == 2));
                CHECK(!(t.r == 0 && t.u == 0 && t.b == 0));
            }
        }
    }
}

TEST_CASE("max_weight_matching against brute force") {
    RandomStream rng(77);
    for (std::size_t n = 1; n <= 6; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> w(n * n);
            for (auto& x : w) x = rng.uniform() * 2.0 - 1.0;
            const auto m = max_weight_matching(w, n);
            double got = 0.0;
            for (std::size_t i = 0; i < n; ++i) got += w[i * n + m[i]];
            std::vector<std::size_t> p(n);
            std::iota(p.begin(), p.end(), 0);
            double best = -1e300;
            do {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += w[i * n + p[i]];
                best = std::max(best, s);
            } while (std::next_permutation(p.begin(), p.end()));
            CHECK(got == doctest::Approx(best).epsilon(1e-12));
        }
    }
}

TEST_CASE("tensor text round trip") {
    RandomStream rng(3);
    auto q = random_tensor(2, 3, 4, rng);
    q.q(1, 1, 1) = kForbidden;
    std::stringstream ss;
    write_tensor(ss, q);
    const auto back = read_tensor(ss);
    CHECK(back.clusters() == 2);
    CHECK(back.ues() == 3);
    CHECK(back.blocks() == 4);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t u = 0; u < 3; ++u)
            for (std::size_t b = 0; b < 4; ++b) CHECK(back.q(r, u, b) == q.q(r, u, b));
    std::istringstream bad("2 2");
    CHECK_THROWS(read_tensor(bad));
}
