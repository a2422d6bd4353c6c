#include <doctest.h>

#include "dco/errors.hpp"
#include "dco/rational.hpp"
#include "dco/rng.hpp"
#include "dco/sets.hpp"
#include "dco/stats.hpp"
#include "dco/xos.hpp"
#include "support.hpp"

using namespace dco;

TEST_CASE("pow2 and floor_pow2") {
    CHECK(pow2(0) == Rat(1));
    CHECK(pow2(-3) == Rat(1, 8));
    CHECK(pow2(4) == Rat(16));
    CHECK(floor_pow2(Rat(1, 2)) == Rat(1, 2));
    CHECK(floor_pow2(Rat(7, 10)) == Rat(1, 2));
    CHECK(floor_pow2(Rat(3)) == Rat(2));
    CHECK(floor_pow2(Rat(1)) == Rat(1));
    CHECK(is_pow2(Rat(1, 1024)));
    CHECK(!is_pow2(Rat(3, 4)));
    CHECK_THROWS_AS(floor_pow2(Rat(0)), InputError);
}

TEST_CASE("lex order on sets") {
    ElemSet a = make_set(5, {0});
    ElemSet b = make_set(5, {0, 1});
    ElemSet c = make_set(5, {1});
    CHECK(lex_less(a, b));   // prefix first
    CHECK(lex_less(a, c));
    CHECK(lex_less(b, c));
    CHECK(!lex_less(c, b));
    CHECK(!lex_less(a, a));
}

TEST_CASE("prf determinism and bernoulli threshold") {
    CHECK(prf(1, 2, 3) == prf(1, 2, 3));
    CHECK(prf(1, 2, 3) != prf(1, 3, 2));
    CHECK(!bernoulli_prf(~0ULL, Rat(1, 2)));
    CHECK(bernoulli_prf(0, Rat(1, 2)));
    CHECK(bernoulli_prf(~0ULL, Rat(1)));
    CHECK(!bernoulli_prf(0, Rat(0)));
    // Empirical frequency of an exact rational threshold.
    int hits = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i)
        if (bernoulli_prf(prf(42, i), Rat(2, 9))) ++hits;
    double freq = static_cast<double>(hits) / trials;
    CHECK(freq == doctest::Approx(2.0 / 9.0).epsilon(0.05));
}

TEST_CASE("rng uniform below and permutation") {
    Rng rng(7);
    std::vector<uint64_t> counts(5, 0);
    for (int i = 0; i < 20000; ++i) ++counts[rng.below(5)];
    CHECK(chi_square_uniform_pvalue(counts) > 0.001);
    auto p = rng.permutation(10);
    std::vector<char> seen(10, 0);
    for (int x : p) seen[static_cast<size_t>(x)] = 1;
    for (char s : seen) CHECK(s == 1);
}

TEST_CASE("stats helpers") {
    std::vector<double> xs{1, 2, 3, 4, 5};
    MeanCI ci = mean_ci(xs, 0.95);
    CHECK(ci.mean == doctest::Approx(3.0));
    CHECK(ci.half_width > 0);
    CHECK_THROWS_AS(mean_ci({}, 0.95), InputError);
    CHECK(ls_slope({1, 2, 3}, {2, 4, 6}) == doctest::Approx(2.0));
    // Chi-square p-value sanity: uniform counts give p near 1.
    CHECK(chi_square_uniform_pvalue({100, 100, 100, 100}) > 0.9);
    CHECK(chi_square_uniform_pvalue({1000, 10, 10, 10}) < 1e-6);
}

TEST_CASE("xos_value basic examples") {
    XosFunction f;
    f.n = 2;
    f.clauses.push_back({{Rat(1), Rat(0)}});
    f.clauses.push_back({{Rat(0), Rat(1)}});
    auto [v, j] = xos_value(f, make_set(2, {0, 1}));
    CHECK(v == Rat(1));
    CHECK(j == 0);  // tie broken to the smaller clause index
    auto [v0, j0] = xos_value(f, make_set(2));
    CHECK(v0 == Rat(0));
    CHECK(j0 == 0);
    CHECK_THROWS_AS(xos_value(f, make_set(3, {0})), InputError);
}

TEST_CASE("xos_value matches exhaustive clause enumeration") {
    Rng rng(11);
    ScaleLadder ladder = scale_ladder(5);
    for (int rep = 0; rep < 50; ++rep) {
        XosFunction f = test::random_ladder_xos(5, 3, ladder, rng);
        ElemSet s(5);
        for (int t = 0; t < 5; ++t)
            if (rng.coin()) s.set(static_cast<size_t>(t));
        Rat best(0);
        int best_j = 0;
        for (int j = 0; j < 3; ++j) {
            Rat sum = f.clause_sum(j, s);
            if (sum > best) {
                best = sum;
                best_j = j;
            }
        }
        auto [v, j] = xos_value(f, s);
        CHECK(v == best);
        CHECK(j == best_j);
    }
}

TEST_CASE("scale ladder shape") {
    ScaleLadder l4 = scale_ladder(4);
    REQUIRE(l4.size() == 5);
    CHECK(l4.at(0) == Rat(1));
    CHECK(l4.at(4) == Rat(1, 16));
    ScaleLadder l2 = scale_ladder(2);
    REQUIRE(l2.size() == 3);
    CHECK(l2.at(2) == Rat(1, 4));
    ScaleLadder l1000 = scale_ladder(1000);
    CHECK(l1000.size() == 21);
    CHECK(l1000.at(20) == pow2(-20));
    CHECK_THROWS_AS(scale_ladder(1), InputError);
    // Consecutive ratio exactly 2.
    for (int i = 0; i + 1 < l1000.size(); ++i) CHECK(l1000.at(i) == l1000.at(i + 1) * Rat(2));
}

TEST_CASE("preprocess normalization cases") {
    // a* = 4/5, n = 10: floor threshold a*/100 = 1/125.
    XosFunction f;
    f.n = 10;
    XosClause c;
    c.values.assign(10, Rat(0));
    c.values[0] = Rat(2);             // above a* -> 1
    c.values[1] = Rat(2, 5);          // 0.4 -> 1/2
    c.values[2] = Rat(1, 1000000);    // below threshold -> 0
    c.values[3] = Rat(4, 5);          // equals a* -> 1
    f.clauses.push_back(c);
    std::vector<Rat> presample{Rat(4, 5), Rat(1, 10)};
    auto [g, report] = preprocess(f, presample, false, 10);
    CHECK(report.branch == Branch::kMain);
    CHECK(report.a_star == Rat(4, 5));
    CHECK(g.clauses[0].values[0] == Rat(1));
    CHECK(g.clauses[0].values[1] == Rat(1, 2));
    CHECK(g.clauses[0].values[2] == Rat(0));
    CHECK(g.clauses[0].values[3] == Rat(1));
    CHECK(report.dropped_mass == Rat(1, 1000000) / Rat(4, 5));
    CHECK(report.dummy_count == 2);  // 10 -> 12
    CHECK(g.n == 12);
    for (const auto& clause : g.clauses) {
        CHECK(clause.values[10] == Rat(0));
        CHECK(clause.values[11] == Rat(0));
    }
}

TEST_CASE("preprocess branches") {
    XosFunction f;
    f.n = 3;
    f.clauses.push_back({{Rat(1), Rat(1), Rat(1)}});
    auto [g, report] = preprocess(f, {Rat(1)}, true, 3);
    CHECK(report.branch == Branch::kSingleChoice);
    CHECK(g.n == 3);  // untouched
    auto [g2, degenerate] = preprocess(f, {Rat(0), Rat(0)}, false, 3);
    CHECK(degenerate.branch == Branch::kSingleChoice);
    CHECK(degenerate.degenerate);
    CHECK_THROWS_AS(preprocess(f, {}, false, 3), InputError);
}

TEST_CASE("round_down_pow2 keeps powers and halves at worst") {
    XosFunction f;
    f.n = 2;
    f.clauses.push_back({{Rat(1, 2), Rat(7, 10)}});
    XosFunction g = round_down_pow2(f);
    CHECK(g.clauses[0].values[0] == Rat(1, 2));  // fixed point
    CHECK(g.clauses[0].values[1] == Rat(1, 2));  // 0.7 -> 0.5

    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        XosFunction h;
        h.n = 8;
        for (int j = 0; j < 2; ++j) {
            XosClause c;
            for (int t = 0; t < 8; ++t)
                c.values.push_back(Rat(static_cast<long long>(rng.below(50)), 7));
            h.clauses.push_back(std::move(c));
        }
        XosFunction hr = round_down_pow2(h);
        for (int rep_s = 0; rep_s < 100; ++rep_s) {
            ElemSet s(8);
            for (int t = 0; t < 8; ++t)
                if (rng.coin()) s.set(static_cast<size_t>(t));
            Rat orig = xos_value(h, s).first;
            Rat rounded = xos_value(hr, s).first;
            CHECK(rounded * Rat(2) >= orig);
            CHECK(rounded <= orig);
        }
    }
}

TEST_CASE("normalization zeroes less than a*/n per clause") {
    Rng rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 10;
        XosFunction f;
        f.n = n;
        for (int j = 0; j < 3; ++j) {
            XosClause c;
            for (int t = 0; t < n; ++t) {
                // Mix of tiny and ordinary values around the floor threshold.
                long long num = static_cast<long long>(rng.below(2000));
                long long den = rng.coin() ? 1 : 100000;
                c.values.push_back(Rat(num, den * 7));
            }
            f.clauses.push_back(std::move(c));
        }
        std::vector<Rat> presample{Rat(static_cast<long long>(1 + rng.below(50)), 7)};
        auto [g, report] = preprocess(f, presample, false, n);
        if (report.branch != Branch::kMain) continue;
        Rat threshold = report.a_star / Rat(static_cast<long long>(n) * n);
        for (const auto& clause : f.clauses) {
            Rat zeroed(0);
            for (const auto& a : clause.values)
                if (a < threshold) zeroed += a;
            CHECK(zeroed < report.a_star / Rat(n));
        }
    }
}

TEST_CASE("xos monotone and subadditive on small instances") {
    Rng rng(19);
    ScaleLadder ladder = scale_ladder(8);
    XosFunction f = test::random_ladder_xos(8, 3, ladder, rng);
    // Monotonicity: all nested pairs via subset enumeration.
    for (uint32_t t = 0; t < 256; ++t) {
        ElemSet st(8);
        for (int i = 0; i < 8; ++i)
            if (t & (1u << i)) st.set(static_cast<size_t>(i));
        Rat ft = xos_value(f, st).first;
        for (uint32_t s = t; s > 0; s = (s - 1) & t) {
            ElemSet ss(8);
            for (int i = 0; i < 8; ++i)
                if (s & (1u << i)) ss.set(static_cast<size_t>(i));
            CHECK(xos_value(f, ss).first <= ft);
        }
    }
    // Subadditivity on sampled pairs.
    for (int rep = 0; rep < 500; ++rep) {
        ElemSet a(8), b(8);
        for (int i = 0; i < 8; ++i) {
            if (rng.coin()) a.set(static_cast<size_t>(i));
            if (rng.coin()) b.set(static_cast<size_t>(i));
        }
        CHECK(xos_value(f, a | b).first <= xos_value(f, a).first + xos_value(f, b).first);
    }
}
