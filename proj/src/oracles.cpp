#include "dco/oracles.hpp"

#include <optional>
#include <string>

#include "dco/errors.hpp"

namespace dco {

namespace {

void check_instance_cap(int n, size_t num_sets, const TinyInstanceCap& cap, const char* who) {
    if (n > cap.max_elements)
        throw CapacityError(std::string(who) + ": " + std::to_string(n) + " elements exceed cap of " +
                            std::to_string(cap.max_elements));
    if (static_cast<long>(num_sets) > cap.max_maximal_sets)
        throw CapacityError(std::string(who) + ": " + std::to_string(num_sets) +
                            " maximal sets exceed cap of " + std::to_string(cap.max_maximal_sets));
}

ElemSet mask_to_set(uint32_t mask, int n) {
    ElemSet s(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) s.set(static_cast<size_t>(i));
    return s;
}

uint32_t set_to_mask(const ElemSet& s) {
    uint32_t m = 0;
    for (size_t i = s.find_first(); i != ElemSet::npos; i = s.find_next(i)) m |= 1u << i;
    return m;
}

}  // namespace

std::pair<ElemSet, Rat> brute_force_offline_opt(const XosFunction& f, const FeasibilityOracle& oracle,
                                                const TinyInstanceCap& cap) {
    size_t num_sets = oracle.kind == OracleKind::kExplicit ? oracle.family.sets.size() : 0;
    check_instance_cap(f.n, num_sets, cap, "brute_force_offline_opt");
    ConstrainedOptResult best;
    best.set = make_set(f.n);
    best.witness = make_set(f.n);
    for (uint32_t mask = 0; mask < (1u << f.n); ++mask) {
        ElemSet s = mask_to_set(mask, f.n);
        if (!is_feasible(oracle, s)) continue;
        auto [value, clause] = xos_value(f, s);
        ConstrainedOptResult cand{s, clause, make_set(f.n), value, true};
        if (result_better(cand, best)) best = std::move(cand);
    }
    return {best.set, best.value};
}

namespace {

ConstrainedOptResult brute_leq_c(const OptLeqCQuery& q, const XosFunction& f,
                                 const FeasibilityOracle& oracle, const TinyInstanceCap& cap) {
    check_instance_cap(f.n, oracle.kind == OracleKind::kExplicit ? oracle.family.sets.size() : 0, cap,
                       "brute_force_constrained_opt");
    ConstrainedOptResult best;
    best.set = q.A;
    best.witness = make_set(f.n);

    uint32_t a_mask = set_to_mask(q.A);
    std::vector<int> free_ids;
    for (int t = 0; t < f.n; ++t)
        if (!q.A.test(static_cast<size_t>(t))) free_ids.push_back(t);

    for (uint32_t fm = 0; fm < (1u << free_ids.size()); ++fm) {
        uint32_t mask = a_mask;
        for (size_t b = 0; b < free_ids.size(); ++b)
            if (fm & (1u << b)) mask |= 1u << free_ids[b];
        ElemSet s = mask_to_set(mask, f.n);
        if (!is_feasible(oracle, s)) continue;
        for (int j = 0; j < static_cast<int>(f.clauses.size()); ++j) {
            const auto& vals = f.clauses[static_cast<size_t>(j)].values;
            if (f.clause_sum(j, q.A) < q.tau_A) continue;
            bool cap_ok = true;
            for (size_t t = s.find_first(); t != ElemSet::npos && cap_ok; t = s.find_next(t))
                if (q.I.test(t) && vals[t] > q.C) cap_ok = false;
            if (!cap_ok) continue;
            ConstrainedOptResult cand{s, j, make_set(f.n), f.clause_sum(j, s), true};
            if (result_better(cand, best)) best = std::move(cand);
        }
    }
    return best;
}

ConstrainedOptResult brute_opt_c(const OptCQuery& q, const XosFunction& f,
                                 const FeasibilityOracle& oracle, const TinyInstanceCap& cap) {
    check_instance_cap(f.n, oracle.kind == OracleKind::kExplicit ? oracle.family.sets.size() : 0, cap,
                       "brute_force_constrained_opt");
    ConstrainedOptResult best;
    best.set = make_set(f.n);
    best.witness = make_set(f.n);
    Rat half_c = q.C / Rat(2);

    for (int j = 0; j < static_cast<int>(f.clauses.size()); ++j) {
        const auto& vals = f.clauses[static_cast<size_t>(j)].values;
        if (f.clause_sum(j, q.A) < q.tau_A) continue;
        std::vector<int> s_pool, t_pool;
        for (int t = 0; t < f.n; ++t) {
            if (q.I_cur.test(static_cast<size_t>(t)) && vals[static_cast<size_t>(t)] == q.C)
                s_pool.push_back(t);
            if (q.I_lower.test(static_cast<size_t>(t)) && vals[static_cast<size_t>(t)] <= half_c)
                t_pool.push_back(t);
        }
        long states = (1L << s_pool.size()) * (1L << t_pool.size());
        if (states > cap.max_dp_states)
            throw CapacityError("brute_force_constrained_opt: " + std::to_string(states) +
                                " subset pairs exceed cap of " + std::to_string(cap.max_dp_states));
        for (uint32_t sm = 0; sm < (1u << s_pool.size()); ++sm) {
            ElemSet s = make_set(f.n);
            for (size_t b = 0; b < s_pool.size(); ++b)
                if (sm & (1u << b)) s.set(static_cast<size_t>(s_pool[b]));
            for (uint32_t tm = 0; tm < (1u << t_pool.size()); ++tm) {
                ElemSet w = make_set(f.n);
                Rat w_sum(0);
                for (size_t b = 0; b < t_pool.size(); ++b)
                    if (tm & (1u << b)) {
                        w.set(static_cast<size_t>(t_pool[b]));
                        w_sum += vals[static_cast<size_t>(t_pool[b])];
                    }
                if (w_sum < q.tau_lower) continue;
                if (!is_feasible(oracle, q.A | s | w)) continue;
                ConstrainedOptResult cand{s, j, w, q.C * Rat(static_cast<long long>(s.count())), true};
                if (result_better(cand, best)) best = std::move(cand);
            }
        }
    }
    return best;
}

}  // namespace

ConstrainedOptResult brute_force_constrained_opt(const ConstrainedQuery& query, const XosFunction& f,
                                                 const FeasibilityOracle& oracle,
                                                 const TinyInstanceCap& cap) {
    if (std::holds_alternative<OptLeqCQuery>(query))
        return brute_leq_c(std::get<OptLeqCQuery>(query), f, oracle, cap);
    return brute_opt_c(std::get<OptCQuery>(query), f, oracle, cap);
}

// ---------------------------------------------------------------------------

void TinyOnlineInstance::validate(const TinyInstanceCap& cap) const {
    check_instance_cap(n, maximal.size(), cap, "optimal_online_value");
    if (static_cast<int>(value_units.size()) != n || static_cast<int>(active_prob.size()) != n)
        throw InputError("tiny online instance shape mismatch");
    long states = static_cast<long>(n + 1) << n;
    if (states > cap.max_dp_states)
        throw CapacityError("optimal_online_value: " + std::to_string(states) + " DP states exceed cap");
}

bool TinyOnlineInstance::feasible(uint32_t selected_mask) const {
    if (selected_mask == 0) return true;
    for (const auto& m : maximal) {
        uint32_t mm = set_to_mask(m);
        if ((selected_mask & ~mm) == 0) return true;
    }
    return false;
}

Rat TinyOnlineInstance::outcome_prob(uint32_t active_mask) const {
    Rat p(1);
    for (int i = 0; i < n; ++i) {
        const Rat& q = active_prob[static_cast<size_t>(i)];
        p *= (active_mask & (1u << i)) ? q : Rat(1) - q;
    }
    return p;
}

Rat optimal_online_value(const TinyOnlineInstance& inst, const TinyInstanceCap& cap) {
    inst.validate(cap);
    // Precompute feasibility of every selected-set mask.
    std::vector<char> feas(1u << inst.n, 0);
    for (uint32_t m = 0; m < (1u << inst.n); ++m) feas[m] = inst.feasible(m) ? 1 : 0;

    std::vector<std::optional<Rat>> memo(static_cast<size_t>(inst.n + 1) << inst.n);
    std::function<Rat(int, uint32_t)> go = [&](int pos, uint32_t sel) -> Rat {
        if (pos == inst.n) return Rat(0);
        size_t key = (static_cast<size_t>(pos) << inst.n) | sel;
        if (memo[key]) return *memo[key];
        Rat skip = go(pos + 1, sel);
        Rat active_best = skip;
        uint32_t with = sel | (1u << pos);
        if (feas[with]) {
            Rat take = Rat(inst.value_units[static_cast<size_t>(pos)], inst.unit_den) + go(pos + 1, with);
            if (take > active_best) active_best = take;
        }
        const Rat& q = inst.active_prob[static_cast<size_t>(pos)];
        Rat v = q * active_best + (Rat(1) - q) * skip;
        memo[key] = v;
        return v;
    };
    return go(0, 0);
}

Rat exact_hindsight_value(const TinyOnlineInstance& inst, const TinyInstanceCap& cap) {
    inst.validate(cap);
    Rat total(0);
    for (uint32_t act = 0; act < (1u << inst.n); ++act) {
        long long best = 0;
        for (const auto& m : inst.maximal) {
            uint32_t mm = set_to_mask(m) & act;
            long long sum = 0;
            for (int i = 0; i < inst.n; ++i)
                if (mm & (1u << i)) sum += inst.value_units[static_cast<size_t>(i)];
            if (sum > best) best = sum;
        }
        if (best > 0) total += inst.outcome_prob(act) * Rat(best, inst.unit_den);
    }
    return total;
}

Rat exact_policy_value(const TinyOnlineInstance& inst,
                       const std::function<long long(uint32_t)>& policy_units,
                       const TinyInstanceCap& cap) {
    inst.validate(cap);
    Rat total(0);
    for (uint32_t act = 0; act < (1u << inst.n); ++act) {
        long long units = policy_units(act);
        if (units != 0) total += inst.outcome_prob(act) * Rat(units, inst.unit_den);
    }
    return total;
}

// ---------------------------------------------------------------------------

void TinyProbingInstance::validate(const TinyInstanceCap& cap) const {
    if (n > 8) throw CapacityError("optimal adaptive probing caps at 8 elements, got " + std::to_string(n));
    check_instance_cap(n, outer.size() + inner.size(), cap, "tiny probing instance");
    if (static_cast<int>(value_units.size()) != n || static_cast<int>(active_prob.size()) != n)
        throw InputError("tiny probing instance shape mismatch");
}

bool TinyProbingInstance::outer_feasible(uint32_t probe_mask) const {
    if (probe_mask == 0) return true;
    for (const auto& m : outer)
        if ((probe_mask & ~set_to_mask(m)) == 0) return true;
    return false;
}

long long TinyProbingInstance::best_inner_units(uint32_t probed_active_mask) const {
    long long best = 0;
    for (const auto& m : inner) {
        uint32_t mm = set_to_mask(m) & probed_active_mask;
        long long sum = 0;
        for (int i = 0; i < n; ++i)
            if (mm & (1u << i)) sum += value_units[static_cast<size_t>(i)];
        if (sum > best) best = sum;
    }
    return best;
}

Rat TinyProbingInstance::outcome_prob(uint32_t active_mask, uint32_t support_mask) const {
    Rat p(1);
    for (int i = 0; i < n; ++i) {
        if (!(support_mask & (1u << i))) continue;
        const Rat& q = active_prob[static_cast<size_t>(i)];
        p *= (active_mask & (1u << i)) ? q : Rat(1) - q;
    }
    return p;
}

Rat optimal_adaptive_value(const TinyProbingInstance& inst, const TinyInstanceCap& cap) {
    inst.validate(cap);
    // Knowledge state: 2 bits per element (0 unprobed, 1 active, 2 inactive).
    size_t states = 1;
    for (int i = 0; i < inst.n; ++i) states *= 4;
    if (static_cast<long>(states) > cap.max_dp_states)
        throw CapacityError("optimal_adaptive_value: DP states exceed cap");
    std::vector<std::optional<Rat>> memo(states);

    std::function<Rat(uint32_t)> go = [&](uint32_t know) -> Rat {
        if (memo[know]) return *memo[know];
        uint32_t probed = 0, active = 0;
        for (int i = 0; i < inst.n; ++i) {
            uint32_t s = (know >> (2 * i)) & 3u;
            if (s != 0) probed |= 1u << i;
            if (s == 1) active |= 1u << i;
        }
        Rat best(inst.best_inner_units(active), inst.unit_den);
        for (int e = 0; e < inst.n; ++e) {
            if (probed & (1u << e)) continue;
            if (!inst.outer_feasible(probed | (1u << e))) continue;
            const Rat& q = inst.active_prob[static_cast<size_t>(e)];
            Rat v = q * go(know | (1u << (2 * e))) + (Rat(1) - q) * go(know | (2u << (2 * e)));
            if (v > best) best = v;
        }
        memo[know] = best;
        return best;
    };
    return go(0);
}

Rat optimal_nonadaptive_value(const TinyProbingInstance& inst, const TinyInstanceCap& cap) {
    inst.validate(cap);
    Rat best(0);
    for (uint32_t probe = 0; probe < (1u << inst.n); ++probe) {
        if (!inst.outer_feasible(probe)) continue;
        // Enumerate outcomes of the probed elements only.
        std::vector<int> ids;
        for (int i = 0; i < inst.n; ++i)
            if (probe & (1u << i)) ids.push_back(i);
        Rat value(0);
        for (uint32_t om = 0; om < (1u << ids.size()); ++om) {
            uint32_t act = 0;
            for (size_t b = 0; b < ids.size(); ++b)
                if (om & (1u << b)) act |= 1u << ids[b];
            long long units = inst.best_inner_units(act);
            if (units != 0) value += inst.outcome_prob(act, probe) * Rat(units, inst.unit_den);
        }
        if (value > best) best = value;
    }
    return best;
}

}  // namespace dco
