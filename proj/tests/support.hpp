#pragma once

// Shared helpers for the unit and acceptance suites: random instances,
// random constrained-optimum queries and small reference computations that
// stay independent of the solvers under test.

#include <utility>
#include <vector>

#include "dco/constraints.hpp"
#include "dco/oracles.hpp"
#include "dco/rng.hpp"
#include "dco/secretary.hpp"
#include "dco/xos.hpp"

namespace dco::test {

inline XosFunction random_ladder_xos(int n, int num_clauses, const ScaleLadder& ladder, Rng& rng) {
    XosFunction f;
    f.n = n;
    for (int j = 0; j < num_clauses; ++j) {
        XosClause c;
        for (int t = 0; t < n; ++t) {
            if (rng.below(3) == 0)
                c.values.push_back(Rat(0));
            else
                c.values.push_back(ladder.at(static_cast<int>(rng.below(static_cast<uint64_t>(ladder.size())))));
        }
        f.clauses.push_back(std::move(c));
    }
    return f;
}

inline MaximalFamily random_family(int n, int num_sets, Rng& rng) {
    MaximalFamily fam;
    for (int s = 0; s < num_sets; ++s) {
        ElemSet m(static_cast<size_t>(n));
        for (int t = 0; t < n; ++t)
            if (rng.coin()) m.set(static_cast<size_t>(t));
        if (m.none()) m.set(rng.below(static_cast<uint64_t>(n)));
        fam.sets.push_back(std::move(m));
    }
    return fam;
}

inline RootedTree random_tree(int nodes, Rng& rng) {
    std::vector<int> parent{-1};
    for (int v = 1; v < nodes; ++v)
        parent.push_back(static_cast<int>(rng.below(static_cast<uint64_t>(v))));
    return RootedTree::from_parents(std::move(parent));
}

struct LeqQuery {
    XosFunction f;
    FeasibilityOracle oracle;
    OptLeqCQuery q;
};

struct ExactQuery {
    XosFunction f;
    FeasibilityOracle oracle;
    OptCQuery q;
};

// Random query against a ladder-valued instance; A is a feasible subset of a
// random maximal set, so solver preconditions hold.
inline LeqQuery random_leq_query(uint64_t seed) {
    Rng rng(prf(seed, tag("leq-query")));
    int n = 6 + static_cast<int>(rng.below(7));  // 6..12
    ScaleLadder ladder = scale_ladder(n);
    LeqQuery out;
    out.f = random_ladder_xos(n, 1 + static_cast<int>(rng.below(3)), ladder, rng);
    out.oracle = FeasibilityOracle::explicit_family(n, random_family(n, 1 + static_cast<int>(rng.below(4)), rng));
    out.q.I = ElemSet(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t)
        if (rng.coin()) out.q.I.set(static_cast<size_t>(t));
    const ElemSet& host = out.oracle.family.sets[rng.below(out.oracle.family.sets.size())];
    out.q.A = ElemSet(static_cast<size_t>(n));
    for (size_t t = host.find_first(); t != ElemSet::npos; t = host.find_next(t))
        if (rng.below(3) == 0) out.q.A.set(t);
    out.q.C = ladder.at(static_cast<int>(rng.below(static_cast<uint64_t>(ladder.size()))));
    switch (rng.below(3)) {
        case 0:
            out.q.tau_A = Rat(0);
            break;
        case 1:
            out.q.tau_A = out.f.clause_sum(static_cast<int>(rng.below(out.f.clauses.size())), out.q.A);
            break;
        default:
            out.q.tau_A = Rat(1 + static_cast<long long>(rng.below(3)), 2);
            break;
    }
    return out;
}

inline ExactQuery random_exact_query(uint64_t seed) {
    Rng rng(prf(seed, tag("exact-query")));
    int n = 6 + static_cast<int>(rng.below(7));
    ScaleLadder ladder = scale_ladder(n);
    ExactQuery out;
    out.f = random_ladder_xos(n, 1 + static_cast<int>(rng.below(3)), ladder, rng);
    out.oracle = FeasibilityOracle::explicit_family(n, random_family(n, 1 + static_cast<int>(rng.below(4)), rng));
    out.q.I_cur = ElemSet(static_cast<size_t>(n));
    out.q.I_lower = ElemSet(static_cast<size_t>(n));
    out.q.A = ElemSet(static_cast<size_t>(n));
    const ElemSet& host = out.oracle.family.sets[rng.below(out.oracle.family.sets.size())];
    for (int t = 0; t < n; ++t) {
        switch (rng.below(4)) {
            case 0:
                out.q.I_cur.set(static_cast<size_t>(t));
                break;
            case 1:
                out.q.I_lower.set(static_cast<size_t>(t));
                break;
            case 2:
                if (host.test(static_cast<size_t>(t)) && rng.coin()) out.q.A.set(static_cast<size_t>(t));
                break;
            default:
                break;
        }
    }
    // Keep the scale in the upper rungs so the eq-C pool is usually nonempty.
    out.q.C = ladder.at(static_cast<int>(rng.below(std::min<uint64_t>(4, ladder.size()))));
    out.q.tau_A = rng.coin() ? Rat(0)
                             : out.f.clause_sum(static_cast<int>(rng.below(out.f.clauses.size())), out.q.A);
    switch (rng.below(3)) {
        case 0:
            out.q.tau_lower = Rat(0);
            break;
        case 1:
            out.q.tau_lower = out.q.C / Rat(2);
            break;
        default:
            out.q.tau_lower = Rat(2);
            break;
    }
    return out;
}

inline bool same_result(const ConstrainedOptResult& a, const ConstrainedOptResult& b) {
    return a.satisfiable == b.satisfiable && a.value == b.value && a.set == b.set && a.clause == b.clause &&
           a.witness == b.witness;
}

}  // namespace dco::test
