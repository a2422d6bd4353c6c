#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "dco/constraints.hpp"
#include "dco/rational.hpp"
#include "dco/secretary.hpp"
#include "dco/sets.hpp"
#include "dco/xos.hpp"

namespace dco {

// Ground-truth solvers for desk-scale instances. Inputs over cap are refused
// with a capacity error, never silently truncated.
struct TinyInstanceCap {
    int max_elements = 15;
    int max_maximal_sets = 64;
    long max_dp_states = 1'000'000;
};

// Exact offline optimum by exhaustive subset enumeration; tie-broken exactly
// like the main solvers.
std::pair<ElemSet, Rat> brute_force_offline_opt(const XosFunction& f, const FeasibilityOracle& oracle,
                                                const TinyInstanceCap& cap = {});

struct OptLeqCQuery {
    ElemSet I;
    ElemSet A;
    Rat tau_A;
    Rat C;
};

struct OptCQuery {
    ElemSet I_cur;
    ElemSet A;
    Rat tau_A;
    Rat C;
    ElemSet I_lower;
    Rat tau_lower;
};

using ConstrainedQuery = std::variant<OptLeqCQuery, OptCQuery>;

// Exhaustive enumeration over all subsets, clauses and witnesses satisfying
// the constrained-optimum definitions verbatim.
ConstrainedOptResult brute_force_constrained_opt(const ConstrainedQuery& query, const XosFunction& f,
                                                 const FeasibilityOracle& oracle,
                                                 const TinyInstanceCap& cap = {});

// A small sequential-arrival instance with Bernoulli element values, explicit
// downward-closed feasibility. Elements are indexed in arrival order; values
// are integer multiples of 1/unit_den.
struct TinyOnlineInstance {
    int n = 0;
    std::vector<long long> value_units;
    long long unit_den = 1;
    std::vector<Rat> active_prob;
    std::vector<ElemSet> maximal;

    void validate(const TinyInstanceCap& cap) const;
    bool feasible(uint32_t selected_mask) const;
    Rat outcome_prob(uint32_t active_mask) const;
};

// Expected value of the optimal online policy, by backward induction over
// (arrival position, selected set) with exact rational expectations.
Rat optimal_online_value(const TinyOnlineInstance& inst, const TinyInstanceCap& cap = {});

// Exact expected hindsight optimum, enumerating all activation outcomes.
Rat exact_hindsight_value(const TinyOnlineInstance& inst, const TinyInstanceCap& cap = {});

// Exact expectation of any deterministic online policy given as a map from
// the full activation outcome to collected units. (The policy itself must
// only use causally available information; the oracle just integrates it.)
Rat exact_policy_value(const TinyOnlineInstance& inst,
                       const std::function<long long(uint32_t active_mask)>& policy_units,
                       const TinyInstanceCap& cap = {});

// Tiny stochastic-probing instance: outer sets constrain what may be probed,
// inner sets what may be finally selected.
struct TinyProbingInstance {
    int n = 0;
    std::vector<long long> value_units;
    long long unit_den = 1;
    std::vector<Rat> active_prob;
    std::vector<ElemSet> outer;
    std::vector<ElemSet> inner;

    void validate(const TinyInstanceCap& cap) const;
    bool outer_feasible(uint32_t probe_mask) const;
    // Best inner-feasible total over probed active elements.
    long long best_inner_units(uint32_t probed_active_mask) const;
    Rat outcome_prob(uint32_t active_mask, uint32_t support_mask) const;
};

// Expected value of the optimal adaptive probing policy: exhaustive recursion
// over probe choices and observed outcomes, memoized on the knowledge state.
Rat optimal_adaptive_value(const TinyProbingInstance& inst, const TinyInstanceCap& cap = {});

// Expected value of the best non-adaptive probe set.
Rat optimal_nonadaptive_value(const TinyProbingInstance& inst, const TinyInstanceCap& cap = {});

}  // namespace dco
