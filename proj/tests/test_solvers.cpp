#include <doctest.h>

#include "dco/errors.hpp"
#include "dco/oracles.hpp"
#include "dco/secretary.hpp"
#include "support.hpp"

using namespace dco;

namespace {

FeasibilityOracle two_pair_oracle() {
    MaximalFamily fam;
    fam.sets.push_back(make_set(4, {0, 1}));
    fam.sets.push_back(make_set(4, {2, 3}));
    return FeasibilityOracle::explicit_family(4, fam);
}

XosFunction capped_clause() {
    XosFunction f;
    f.n = 4;
    f.clauses.push_back({{Rat(1, 2), Rat(1, 4), Rat(1), Rat(1)}});
    return f;
}

}  // namespace

TEST_CASE("opt_leq_c caps I elements at C") {
    XosFunction f = capped_clause();
    FeasibilityOracle oracle = two_pair_oracle();
    ElemSet all = make_set(4, {0, 1, 2, 3});
    ConstrainedOptResult res = solve_opt_leq_c(all, make_set(4), Rat(0), Rat(1, 2), f, oracle);
    CHECK(res.satisfiable);
    CHECK(res.set == make_set(4, {0, 1}));
    CHECK(res.value == Rat(3, 4));  // elements 2,3 exceed the cap
    CHECK(res.clause == 0);
}

TEST_CASE("opt_leq_c with empty I is the offline optimum") {
    XosFunction f = capped_clause();
    FeasibilityOracle oracle = two_pair_oracle();
    ConstrainedOptResult res = solve_opt_leq_c(make_set(4), make_set(4), Rat(0), Rat(1), f, oracle);
    CHECK(res.value == Rat(2));
    CHECK(res.set == make_set(4, {2, 3}));
    auto [bset, bval] = brute_force_offline_opt(f, oracle);
    CHECK(bval == res.value);
    CHECK(bset == res.set);
}

TEST_CASE("opt_leq_c unsatisfiable threshold sentinel") {
    XosFunction f = capped_clause();
    FeasibilityOracle oracle = two_pair_oracle();
    ElemSet a = make_set(4, {0});
    ConstrainedOptResult res = solve_opt_leq_c(make_set(4), a, Rat(1), Rat(1), f, oracle);
    CHECK(!res.satisfiable);
    CHECK(res.set == a);
    CHECK(res.value == Rat(0));
    CHECK_THROWS_AS(solve_opt_leq_c(make_set(4), make_set(4, {0, 2}), Rat(0), Rat(1), f, oracle),
                    InputError);  // infeasible A
}

TEST_CASE("opt_c selects the exact-scale set with a lower witness") {
    XosFunction f;
    f.n = 3;
    f.clauses.push_back({{Rat(1, 2), Rat(1, 2), Rat(1, 4)}});
    MaximalFamily fam;
    fam.sets.push_back(make_set(3, {0, 1, 2}));
    auto oracle = FeasibilityOracle::explicit_family(3, fam);
    ElemSet i_cur = make_set(3, {0, 1});
    ElemSet i_lower = make_set(3, {2});
    ConstrainedOptResult res =
        solve_opt_c(i_cur, make_set(3), Rat(0), Rat(1, 2), i_lower, Rat(1, 4), f, oracle);
    CHECK(res.satisfiable);
    CHECK(res.set == i_cur);
    CHECK(res.witness == i_lower);
    CHECK(res.value == Rat(1));

    // Vacuous witness when tau_lower = 0.
    ConstrainedOptResult vac = solve_opt_c(i_cur, make_set(3), Rat(0), Rat(1, 2), i_lower, Rat(0), f, oracle);
    CHECK(vac.satisfiable);
    CHECK(vac.set == i_cur);

    // No witness can reach tau_lower.
    ConstrainedOptResult none =
        solve_opt_c(i_cur, make_set(3), Rat(0), Rat(1, 2), i_lower, Rat(2), f, oracle);
    CHECK(!none.satisfiable);
    CHECK(none.set.none());
    CHECK(none.value == Rat(0));
}

TEST_CASE("opt_c rejects overlapping index sets") {
    XosFunction f;
    f.n = 2;
    f.clauses.push_back({{Rat(1), Rat(1)}});
    MaximalFamily fam;
    fam.sets.push_back(make_set(2, {0, 1}));
    auto oracle = FeasibilityOracle::explicit_family(2, fam);
    CHECK_THROWS_AS(solve_opt_c(make_set(2, {0}), make_set(2), Rat(0), Rat(1), make_set(2, {0}), Rat(0), f,
                                oracle),
                    InputError);
}

TEST_CASE("solvers agree with brute force on random queries") {
    for (uint64_t seed = 0; seed < 120; ++seed) {
        auto lq = test::random_leq_query(seed);
        ConstrainedOptResult fast = solve_opt_leq_c(lq.q.I, lq.q.A, lq.q.tau_A, lq.q.C, lq.f, lq.oracle);
        ConstrainedOptResult slow = brute_force_constrained_opt(lq.q, lq.f, lq.oracle);
        CAPTURE(seed);
        CHECK(test::same_result(fast, slow));
    }
    for (uint64_t seed = 0; seed < 120; ++seed) {
        auto eq = test::random_exact_query(seed);
        ConstrainedOptResult fast = solve_opt_c(eq.q.I_cur, eq.q.A, eq.q.tau_A, eq.q.C, eq.q.I_lower,
                                                eq.q.tau_lower, eq.f, eq.oracle);
        ConstrainedOptResult slow = brute_force_constrained_opt(eq.q, eq.f, eq.oracle);
        CAPTURE(seed);
        CHECK(test::same_result(fast, slow));
    }
}

TEST_CASE("opt_c structural contract on random queries") {
    for (uint64_t seed = 200; seed < 260; ++seed) {
        auto eq = test::random_exact_query(seed);
        ConstrainedOptResult res = solve_opt_c(eq.q.I_cur, eq.q.A, eq.q.tau_A, eq.q.C, eq.q.I_lower,
                                               eq.q.tau_lower, eq.f, eq.oracle);
        if (!res.satisfiable) continue;
        const auto& vals = eq.f.clauses[static_cast<size_t>(res.clause)].values;
        for (size_t t = res.set.find_first(); t != ElemSet::npos; t = res.set.find_next(t)) {
            CHECK(eq.q.I_cur.test(t));
            CHECK(vals[t] == eq.q.C);
        }
        Rat wsum(0);
        for (size_t t = res.witness.find_first(); t != ElemSet::npos; t = res.witness.find_next(t)) {
            CHECK(eq.q.I_lower.test(t));
            CHECK(vals[t] <= eq.q.C / Rat(2));
            wsum += vals[t];
        }
        CHECK(wsum >= eq.q.tau_lower);
        CHECK(is_feasible(eq.oracle, eq.q.A | res.set | res.witness));
        CHECK(eq.f.clause_sum(res.clause, eq.q.A) >= eq.q.tau_A);
    }
}

TEST_CASE("brute force offline examples") {
    XosFunction empty;
    empty.n = 3;
    MaximalFamily fam;
    fam.sets.push_back(make_set(3, {0, 1}));
    auto oracle = FeasibilityOracle::explicit_family(3, fam);
    auto [eset, evalue] = brute_force_offline_opt(empty, oracle);
    CHECK(evalue == Rat(0));

    XosFunction single;
    single.n = 3;
    single.clauses.push_back({{Rat(1, 2), Rat(1, 4), Rat(1)}});
    auto [sset, svalue] = brute_force_offline_opt(single, oracle);
    CHECK(svalue == Rat(3, 4));
    CHECK(sset == make_set(3, {0, 1}));

    XosFunction big;
    big.n = 16;
    big.clauses.push_back({std::vector<Rat>(16, Rat(1))});
    MaximalFamily bigfam;
    bigfam.sets.push_back(make_set(16, {0}));
    CHECK_THROWS_AS(brute_force_offline_opt(big, FeasibilityOracle::explicit_family(16, bigfam)),
                    CapacityError);
}

TEST_CASE("optimal online value on degenerate instances") {
    // One Bernoulli(q) element of value 1: online = hindsight = q.
    TinyOnlineInstance one;
    one.n = 1;
    one.value_units = {1};
    one.unit_den = 1;
    one.active_prob = {Rat(1, 3)};
    one.maximal.push_back(make_set(1, {0}));
    CHECK(optimal_online_value(one) == Rat(1, 3));
    CHECK(exact_hindsight_value(one) == Rat(1, 3));

    // Deterministic values: optimal online collects the best feasible set.
    TinyOnlineInstance det;
    det.n = 3;
    det.value_units = {3, 2, 2};
    det.unit_den = 1;
    det.active_prob.assign(3, Rat(1));
    det.maximal.push_back(make_set(3, {0}));
    det.maximal.push_back(make_set(3, {1, 2}));
    CHECK(optimal_online_value(det) == Rat(4));
    CHECK(exact_hindsight_value(det) == Rat(4));
}

TEST_CASE("caps-vacuous queries collapse to the offline optimum over supersets of A") {
    Rng rng(71);
    ScaleLadder ladder = scale_ladder(9);
    for (int rep = 0; rep < 10; ++rep) {
        XosFunction f = test::random_ladder_xos(9, 2, ladder, rng);
        auto oracle = FeasibilityOracle::explicit_family(9, test::random_family(9, 3, rng));
        const ElemSet& host = oracle.family.sets[rng.below(oracle.family.sets.size())];
        ElemSet a(9);
        for (size_t t = host.find_first(); t != ElemSet::npos; t = host.find_next(t))
            if (rng.below(3) == 0) a.set(t);
        OptLeqCQuery q{make_set(9), a, Rat(0), Rat(1)};
        ConstrainedOptResult res = brute_force_constrained_opt(ConstrainedQuery{q}, f, oracle);
        // Reference: direct enumeration of feasible supersets of A.
        ConstrainedOptResult ref;
        ref.set = a;
        ref.witness = make_set(9);
        for (uint32_t mask = 0; mask < (1u << 9); ++mask) {
            ElemSet s(9);
            for (int i = 0; i < 9; ++i)
                if (mask & (1u << i)) s.set(static_cast<size_t>(i));
            if (!a.is_subset_of(s) || !is_feasible(oracle, s)) continue;
            for (int j = 0; j < 2; ++j) {
                ConstrainedOptResult cand{s, j, make_set(9), f.clause_sum(j, s), true};
                if (result_better(cand, ref)) ref = cand;
            }
        }
        CHECK(test::same_result(res, ref));
    }
}

TEST_CASE("brute force matches solve with vacuous caps") {
    Rng rng(31);
    ScaleLadder ladder = scale_ladder(10);
    for (int rep = 0; rep < 10; ++rep) {
        XosFunction f = test::random_ladder_xos(10, 2, ladder, rng);
        auto oracle = FeasibilityOracle::explicit_family(10, test::random_family(10, 3, rng));
        auto [bset, bval] = brute_force_offline_opt(f, oracle);
        ConstrainedOptResult res = solve_opt_leq_c(make_set(10), make_set(10), Rat(0), Rat(1), f, oracle);
        CHECK(res.value == bval);
        CHECK(res.set == bset);
    }
}
