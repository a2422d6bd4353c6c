#include "dco/secretary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dco/errors.hpp"
#include "dco/rng.hpp"

namespace dco {

StreamPartition StreamPartition::make(std::vector<int> order) {
    StreamPartition p;
    p.n = static_cast<int>(order.size());
    if (p.n < 3 || p.n % 3 != 0) throw InputError("stream length must be a positive multiple of 3");
    std::vector<char> seen(static_cast<size_t>(p.n), 0);
    for (int x : order) {
        if (x < 0 || x >= p.n || seen[static_cast<size_t>(x)]) throw InputError("order is not a permutation");
        seen[static_cast<size_t>(x)] = 1;
    }
    p.order = std::move(order);
    return p;
}

ElemSet StreamPartition::i1_elements() const {
    ElemSet s(static_cast<size_t>(n));
    for (int pos = 0; pos < third(); ++pos) s.set(static_cast<size_t>(order[static_cast<size_t>(pos)]));
    return s;
}

ElemSet StreamPartition::i2_elements() const {
    ElemSet s(static_cast<size_t>(n));
    for (int pos = third(); pos < 2 * third(); ++pos) s.set(static_cast<size_t>(order[static_cast<size_t>(pos)]));
    return s;
}

ElemSet StreamPartition::i3_elements() const {
    ElemSet s(static_cast<size_t>(n));
    for (int pos = 2 * third(); pos < n; ++pos) s.set(static_cast<size_t>(order[static_cast<size_t>(pos)]));
    return s;
}

ElemSet StreamPartition::i1_suffix_elements(int t) const {
    ElemSet s(static_cast<size_t>(n));
    for (int pos = t + 1; pos < third(); ++pos) s.set(static_cast<size_t>(order[static_cast<size_t>(pos)]));
    return s;
}

LabelAssignment assign_labels(int n, const ScaleLadder& ladder, uint64_t seed) {
    if (n < 3) throw InputError("labels need n >= 3");
    int count = n / 3;
    uint64_t k = static_cast<uint64_t>(ladder.size());
    LabelAssignment out;
    out.scale_index.resize(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        // Rejection sampling keeps the draw exactly uniform.
        uint64_t threshold = (0 - k) % k;
        uint64_t r;
        for (uint64_t attempt = 0;; ++attempt) {
            r = prf(seed, tag("label"), static_cast<uint64_t>(i), attempt);
            if (r >= threshold) break;
        }
        out.scale_index[static_cast<size_t>(i)] = static_cast<int>(r % k);
    }
    return out;
}

bool result_better(const ConstrainedOptResult& a, const ConstrainedOptResult& b) {
    if (a.satisfiable != b.satisfiable) return a.satisfiable;
    if (!a.satisfiable) return false;
    if (a.value != b.value) return a.value > b.value;
    if (a.clause != b.clause) return a.clause < b.clause;
    size_t ac = a.set.count(), bc = b.set.count();
    if (ac != bc) return ac > bc;
    if (a.set != b.set) return lex_less(a.set, b.set);
    size_t at = a.witness.count(), bt = b.witness.count();
    if (at != bt) return at > bt;
    if (a.witness != b.witness) return lex_less(a.witness, b.witness);
    return false;
}

namespace {

void require_explicit(const FeasibilityOracle& oracle) {
    if (oracle.kind != OracleKind::kExplicit)
        throw InputError("constrained-optimum solvers require an explicit-family oracle");
}

}  // namespace

ConstrainedOptResult solve_opt_leq_c(const ElemSet& I, const ElemSet& A, const Rat& tau_A,
                                     const Rat& C, const XosFunction& f,
                                     const FeasibilityOracle& oracle) {
    require_explicit(oracle);
    if (static_cast<int>(I.size()) != f.n || static_cast<int>(A.size()) != f.n)
        throw InputError("set sizes do not match ground set");
    if (!is_feasible(oracle, A)) throw InputError("A must be feasible");

    ConstrainedOptResult best;
    best.set = A;
    best.witness = make_set(f.n);

    MaximalFamily fam = oracle.family.antichain_reduced();
    for (int j = 0; j < static_cast<int>(f.clauses.size()); ++j) {
        const auto& vals = f.clauses[static_cast<size_t>(j)].values;
        // The cap applies to all of I∩S ⊇ I∩A, so an over-cap element of A
        // rules the clause out entirely.
        bool clause_ok = true;
        for (size_t t = A.find_first(); t != ElemSet::npos; t = A.find_next(t))
            if (I.test(t) && vals[t] > C) {
                clause_ok = false;
                break;
            }
        if (!clause_ok) continue;
        if (f.clause_sum(j, A) < tau_A) continue;

        for (const auto& m : fam.sets) {
            if (!A.is_subset_of(m)) continue;
            ConstrainedOptResult cand;
            cand.set = A;
            for (size_t t = m.find_first(); t != ElemSet::npos; t = m.find_next(t))
                if (!I.test(t) || vals[t] <= C) cand.set.set(t);
            cand.clause = j;
            cand.witness = make_set(f.n);
            cand.value = f.clause_sum(j, cand.set);
            cand.satisfiable = true;
            if (result_better(cand, best)) best = std::move(cand);
        }
    }
    return best;
}

ConstrainedOptResult solve_opt_c(const ElemSet& I_cur, const ElemSet& A, const Rat& tau_A,
                                 const Rat& C, const ElemSet& I_lower, const Rat& tau_lower,
                                 const XosFunction& f, const FeasibilityOracle& oracle) {
    require_explicit(oracle);
    if ((I_cur & I_lower).any()) throw InputError("I_cur and I_lower must be disjoint");
    if ((A & I_cur).any() || (A & I_lower).any()) throw InputError("A must be disjoint from both index sets");

    ConstrainedOptResult best;
    best.set = make_set(f.n);
    best.witness = make_set(f.n);
    Rat half_c = C / Rat(2);

    MaximalFamily fam = oracle.family.antichain_reduced();
    for (int j = 0; j < static_cast<int>(f.clauses.size()); ++j) {
        const auto& vals = f.clauses[static_cast<size_t>(j)].values;
        if (f.clause_sum(j, A) < tau_A) continue;
        for (const auto& m : fam.sets) {
            if (!A.is_subset_of(m)) continue;
            ConstrainedOptResult cand;
            cand.set = make_set(f.n);
            cand.witness = make_set(f.n);
            Rat witness_sum(0);
            for (size_t t = m.find_first(); t != ElemSet::npos; t = m.find_next(t)) {
                if (I_cur.test(t) && vals[t] == C) cand.set.set(t);
                if (I_lower.test(t) && vals[t] <= half_c) {
                    cand.witness.set(t);
                    witness_sum += vals[t];
                }
            }
            if (witness_sum < tau_lower) continue;
            cand.clause = j;
            cand.value = C * Rat(static_cast<long long>(cand.set.count()));
            cand.satisfiable = true;
            if (result_better(cand, best)) best = std::move(cand);
        }
    }
    return best;
}

ConstrainedOptResult offline_optimum(const XosFunction& f, const FeasibilityOracle& oracle) {
    return solve_opt_leq_c(make_set(f.n), make_set(f.n), Rat(0), Rat(1), f, oracle);
}

// ---------------------------------------------------------------------------
// Run engine. Instances here are preprocessed (every nonzero clause value is a
// ladder scale), which lets all phase queries run off bitset tables instead of
// per-call scans.

namespace {

struct EngineTables {
    int n = 0;
    int num_clauses = 0;
    int K = 0;  // ladder size
    std::vector<ElemSet> maximal;
    // eq[j][k]: elements with v == ladder[k]; leq0[j][k]: v <= ladder[k] or v == 0.
    std::vector<std::vector<ElemSet>> eq;
    std::vector<std::vector<ElemSet>> leq0;
    // lower_leq[j][m][k]: sum of nonzero values <= ladder[k] over M ∩ I2
    // (index K+1 holds zero: nothing lies below the ladder).
    std::vector<std::vector<std::vector<Rat>>> lower_leq;
    std::vector<std::vector<Rat>> value;  // [j][element]

    static EngineTables build(const XosFunction& f, const FeasibilityOracle& oracle,
                              const ScaleLadder& ladder, const ElemSet& i2) {
        EngineTables tb;
        tb.n = f.n;
        tb.num_clauses = static_cast<int>(f.clauses.size());
        tb.K = ladder.size();
        MaximalFamily fam = oracle.family.antichain_reduced();
        tb.maximal = std::move(fam.sets);
        tb.eq.assign(static_cast<size_t>(tb.num_clauses), {});
        tb.leq0.assign(static_cast<size_t>(tb.num_clauses), {});
        tb.value.assign(static_cast<size_t>(tb.num_clauses), {});
        for (int j = 0; j < tb.num_clauses; ++j) {
            const auto& vals = f.clauses[static_cast<size_t>(j)].values;
            tb.value[static_cast<size_t>(j)] = vals;
            auto& eqj = tb.eq[static_cast<size_t>(j)];
            eqj.assign(static_cast<size_t>(tb.K), make_set(tb.n));
            ElemSet zero = make_set(tb.n);
            for (int t = 0; t < tb.n; ++t) {
                const Rat& v = vals[static_cast<size_t>(t)];
                if (v == Rat(0)) {
                    zero.set(static_cast<size_t>(t));
                    continue;
                }
                int k = ladder.index_of(v);
                if (k < 0)
                    throw InputError("run requires preprocessed values: clause entry " + to_string(v) +
                                     " is not a ladder scale");
                eqj[static_cast<size_t>(k)].set(static_cast<size_t>(t));
            }
            auto& leq0j = tb.leq0[static_cast<size_t>(j)];
            leq0j.assign(static_cast<size_t>(tb.K), zero);
            ElemSet acc = zero;
            for (int k = tb.K - 1; k >= 0; --k) {
                acc |= eqj[static_cast<size_t>(k)];
                leq0j[static_cast<size_t>(k)] = acc;
            }
        }
        tb.lower_leq.assign(static_cast<size_t>(tb.num_clauses), {});
        for (int j = 0; j < tb.num_clauses; ++j) {
            auto& per_m = tb.lower_leq[static_cast<size_t>(j)];
            per_m.assign(tb.maximal.size(), std::vector<Rat>(static_cast<size_t>(tb.K) + 2, Rat(0)));
            for (size_t mi = 0; mi < tb.maximal.size(); ++mi) {
                auto& sums = per_m[mi];
                for (int k = tb.K - 1; k >= 0; --k) {
                    ElemSet hit = tb.eq[static_cast<size_t>(j)][static_cast<size_t>(k)] & tb.maximal[mi] & i2;
                    sums[static_cast<size_t>(k)] =
                        sums[static_cast<size_t>(k) + 1] +
                        ladder.at(k) * Rat(static_cast<long long>(hit.count()));
                }
            }
        }
        return tb;
    }
};

struct PhaseStart {
    bool found = false;
    Rat value = Rat(0);
    Rat tau_below = Rat(0);
    long opt_c_size = 0;
    int clause = -1;
    size_t m_index = 0;
};

// Opt^{<=C}(I2 | ALG, tau_ALG) over the sample universe, by table lookup.
PhaseStart phase_start_opt(const EngineTables& tb, int k, const ElemSet& alg,
                           const std::vector<Rat>& a_sum, const Rat& tau_alg, const ElemSet& i2) {
    PhaseStart best;
    ElemSet best_set;
    ElemSet tmp;
    for (int j = 0; j < tb.num_clauses; ++j) {
        if (a_sum[static_cast<size_t>(j)] < tau_alg) continue;
        for (size_t mi = 0; mi < tb.maximal.size(); ++mi) {
            const ElemSet& m = tb.maximal[mi];
            if (!alg.is_subset_of(m)) continue;
            Rat value = a_sum[static_cast<size_t>(j)] +
                        tb.lower_leq[static_cast<size_t>(j)][mi][static_cast<size_t>(k)];
            if (best.found) {
                if (value < best.value) continue;
                if (value == best.value && j > best.clause) continue;
            }
            tmp = tb.leq0[static_cast<size_t>(j)][static_cast<size_t>(k)];
            tmp &= m;
            tmp &= i2;
            tmp |= alg;
            if (best.found && value == best.value && j == best.clause) {
                size_t tc = tmp.count(), bc = best_set.count();
                if (tc < bc) continue;
                if (tc == bc && !lex_less(tmp, best_set)) continue;
            }
            best.found = true;
            best.value = value;
            best.clause = j;
            best.m_index = mi;
            best_set = tmp;
        }
    }
    if (best.found) {
        ElemSet hits = tb.eq[static_cast<size_t>(best.clause)][static_cast<size_t>(k)] &
                       tb.maximal[best.m_index] & i2;
        best.opt_c_size = static_cast<long>(hits.count());
        best.tau_below = tb.lower_leq[static_cast<size_t>(best.clause)][best.m_index]
                                     [static_cast<size_t>(k) + 1];
    }
    return best;
}

// Membership of `x` in Opt^C({x} ∪ I1-suffix | ALG, tau_ALG | I2, tau_below).
bool opt_c_selects(const EngineTables& tb, int k, int x, const ElemSet& cur_suffix,
                   const ElemSet& alg, const std::vector<Rat>& a_sum, const Rat& tau_alg,
                   const Rat& tau_below) {
    bool found = false;
    size_t best_count = 0;
    int best_clause = -1;
    ElemSet best_set;
    ElemSet cur = cur_suffix;
    cur.set(static_cast<size_t>(x));
    ElemSet tmp;
    for (int j = 0; j < tb.num_clauses; ++j) {
        if (a_sum[static_cast<size_t>(j)] < tau_alg) continue;
        const ElemSet& eq = tb.eq[static_cast<size_t>(j)][static_cast<size_t>(k)];
        for (size_t mi = 0; mi < tb.maximal.size(); ++mi) {
            const ElemSet& m = tb.maximal[mi];
            if (!alg.is_subset_of(m)) continue;
            if (tb.lower_leq[static_cast<size_t>(j)][mi][static_cast<size_t>(k) + 1] < tau_below)
                continue;
            tmp = eq;
            tmp &= m;
            tmp &= cur;
            size_t c = tmp.count();
            if (found) {
                if (c < best_count) continue;
                if (c == best_count && j > best_clause) continue;
                if (c == best_count && j == best_clause && !lex_less(tmp, best_set)) continue;
            }
            found = true;
            best_count = c;
            best_clause = j;
            best_set = tmp;
        }
    }
    return found && best_set.test(static_cast<size_t>(x));
}

bool audit_feasible(const EngineTables& tb, const ElemSet& alg) {
    if (alg.none()) return true;
    for (const auto& m : tb.maximal)
        if (alg.is_subset_of(m)) return true;
    return false;
}

SecretaryRunRecord run_engine(const XosFunction& f, const FeasibilityOracle& oracle,
                              const std::vector<int>& order, const ScaleLadder& ladder,
                              uint64_t seed, bool ideal) {
    f.validate();
    require_explicit(oracle);
    if (f.n != oracle.n) throw InputError("objective and oracle ground sets differ");
    StreamPartition part = StreamPartition::make(order);
    if (part.n != f.n) throw InputError("order length does not match ground set");

    const int n = part.n;
    const int third = part.third();
    LabelAssignment labels = assign_labels(n, ladder, prf(seed, tag("labels")));
    ElemSet i2 = part.i2_elements();
    EngineTables tb = EngineTables::build(f, oracle, ladder, i2);

    SecretaryRunRecord rec;
    rec.seed = seed;
    rec.selected = make_set(n);
    ElemSet alg = make_set(n);
    Rat tau_alg(0);
    std::vector<Rat> a_sum(static_cast<size_t>(tb.num_clauses), Rat(0));
    const double inv_coeff = 1000.0 * std::log2(static_cast<double>(n));
    int cursor = 2 * third;  // next Real arrival position (implementable variant)

    for (int k = 0; k < ladder.size(); ++k) {
        const Rat& C = ladder.at(k);
        PhaseStart ps = phase_start_opt(tb, k, alg, a_sum, tau_alg, i2);
        PhaseDiag diag;
        diag.scale_index = k;
        diag.scale = C;
        diag.tau_alg_start = tau_alg;
        diag.opt_leq_value = ps.found ? ps.value : Rat(0);
        diag.tau_below = ps.found ? ps.tau_below : Rat(0);
        diag.opt_c_size = ps.opt_c_size;
        diag.invariant_lhs = to_double(tau_alg) + to_double(diag.opt_leq_value) / inv_coeff;
        Rat tau_below = diag.tau_below;

        ElemSet suffix = part.i1_elements();
        for (int t = 0; t < third; ++t) {
            suffix.reset(static_cast<size_t>(part.order[static_cast<size_t>(t)]));
            if (labels.scale_index[static_cast<size_t>(t)] != k) continue;
            int x;
            if (ideal) {
                x = part.order[static_cast<size_t>(part.bar(t))];
            } else {
                if (cursor >= n) continue;  // stream exhausted
                x = part.order[static_cast<size_t>(cursor)];
                ++cursor;
            }
            if (opt_c_selects(tb, k, x, suffix, alg, a_sum, tau_alg, tau_below)) {
                alg.set(static_cast<size_t>(x));
                tau_alg += C;
                for (int j = 0; j < tb.num_clauses; ++j)
                    a_sum[static_cast<size_t>(j)] += tb.value[static_cast<size_t>(j)][static_cast<size_t>(x)];
                ++diag.alg_added;
                ++rec.selection_steps;
                if (!audit_feasible(tb, alg)) rec.feasible_throughout = false;
            }
        }
        rec.phases.push_back(diag);
    }

    rec.selected = alg;
    rec.tau_alg = tau_alg;
    rec.value = xos_value(f, alg).first;
    if (rec.value < tau_alg) rec.feasible_throughout = false;

    for (size_t i = 1; i < rec.phases.size(); ++i) {
        const PhaseDiag& prev = rec.phases[i - 1];
        double allowed_drop =
            to_double(prev.scale) * static_cast<double>(prev.opt_c_size) / inv_coeff;
        if (rec.phases[i].invariant_lhs < prev.invariant_lhs - allowed_drop - 1e-12)
            ++rec.invariant_violations;
    }
    return rec;
}

}  // namespace

SecretaryRunRecord run_secretary(const XosFunction& f, const FeasibilityOracle& oracle,
                                 const std::vector<int>& order, const ScaleLadder& ladder,
                                 uint64_t seed) {
    return run_engine(f, oracle, order, ladder, seed, /*ideal=*/false);
}

SecretaryRunRecord run_ideal_secretary(const XosFunction& f, const FeasibilityOracle& oracle,
                                       const std::vector<int>& order, const ScaleLadder& ladder,
                                       uint64_t seed) {
    return run_engine(f, oracle, order, ladder, seed, /*ideal=*/true);
}

std::optional<int> single_choice_select(const std::vector<Rat>& values,
                                        const std::vector<char>* eligible) {
    int n = static_cast<int>(values.size());
    if (n == 0) return std::nullopt;
    int window = static_cast<int>(std::floor(static_cast<double>(n) / 2.718281828459045));
    Rat prefix_max(-1);
    for (int i = 0; i < n; ++i) {
        bool ok = !eligible || (*eligible)[static_cast<size_t>(i)];
        // Strict-inequality convention: ties with the running record are skipped.
        if (i >= window && ok && values[static_cast<size_t>(i)] > prefix_max) return i;
        if (values[static_cast<size_t>(i)] > prefix_max) prefix_max = values[static_cast<size_t>(i)];
    }
    return std::nullopt;
}

namespace {

std::optional<int> record_rule_after_window(const std::vector<Rat>& values,
                                            const std::vector<char>& eligible, int window) {
    Rat prefix_max(-1);
    int n = static_cast<int>(values.size());
    for (int i = 0; i < n; ++i) {
        if (i >= window && eligible[static_cast<size_t>(i)] && values[static_cast<size_t>(i)] > prefix_max)
            return i;
        if (values[static_cast<size_t>(i)] > prefix_max) prefix_max = values[static_cast<size_t>(i)];
    }
    return std::nullopt;
}

}  // namespace

PipelineResult run_pipeline(const XosFunction& f, const FeasibilityOracle& oracle,
                            const std::vector<int>& order, uint64_t seed) {
    f.validate();
    require_explicit(oracle);
    const int n = f.n;
    if (n != oracle.n || static_cast<int>(order.size()) != n) throw InputError("pipeline shape mismatch");

    std::vector<Rat> single_val(static_cast<size_t>(n), Rat(0));
    std::vector<char> singleton_ok(static_cast<size_t>(n), 0);
    for (int x = 0; x < n; ++x) {
        ElemSet s = make_set(n, {x});
        single_val[static_cast<size_t>(x)] = xos_value(f, s).first;
        singleton_ok[static_cast<size_t>(x)] = is_feasible(oracle, s) ? 1 : 0;
    }
    std::vector<Rat> arrival_vals(static_cast<size_t>(n));
    std::vector<char> arrival_ok(static_cast<size_t>(n));
    for (int pos = 0; pos < n; ++pos) {
        arrival_vals[static_cast<size_t>(pos)] = single_val[static_cast<size_t>(order[static_cast<size_t>(pos)])];
        arrival_ok[static_cast<size_t>(pos)] = singleton_ok[static_cast<size_t>(order[static_cast<size_t>(pos)])];
    }

    PipelineResult out;
    out.record.seed = seed;
    bool coin = prf(seed, tag("branch-coin")) & 1;

    auto finish_single_choice = [&](std::optional<int> pos, bool degenerate) {
        out.record.branch = Branch::kSingleChoice;
        out.record.degenerate = degenerate;
        out.record.selected = make_set(n);
        if (pos) {
            out.record.selected.set(static_cast<size_t>(order[static_cast<size_t>(*pos)]));
            out.record.selection_steps = 1;
        }
        out.record.value = xos_value(f, out.record.selected).first;
        out.record.tau_alg = out.record.value;
    };

    if (coin) {
        out.prep.branch = Branch::kSingleChoice;
        finish_single_choice(single_choice_select(arrival_vals, &arrival_ok), false);
        return out;
    }

    int half = n / 2;
    std::vector<Rat> presample(arrival_vals.begin(), arrival_vals.begin() + half);
    if (presample.empty()) presample.push_back(Rat(0));
    auto [pf, prep] = preprocess(f, presample, false, n);
    out.prep = prep;
    if (prep.degenerate) {
        // Nothing to normalize against: the first half doubles as the
        // observation window of a single-choice fallback.
        finish_single_choice(record_rule_after_window(arrival_vals, arrival_ok, half), true);
        return out;
    }

    // Sub-instance over the second-half elements, ids by ascending original id
    // so that tie-breaking stays independent of the arrival order.
    std::vector<int> sub_originals;
    sub_originals.reserve(static_cast<size_t>(n - half));
    for (int pos = half; pos < n; ++pos) sub_originals.push_back(order[static_cast<size_t>(pos)]);
    std::sort(sub_originals.begin(), sub_originals.end());
    std::vector<int> sub_id(static_cast<size_t>(n), -1);
    for (int i = 0; i < static_cast<int>(sub_originals.size()); ++i)
        sub_id[static_cast<size_t>(sub_originals[static_cast<size_t>(i)])] = i;
    int m0 = static_cast<int>(sub_originals.size());
    int pad = (3 - m0 % 3) % 3;
    int m = m0 + pad;

    XosFunction sf;
    sf.n = m;
    sf.clauses.reserve(pf.clauses.size());
    for (const auto& c : pf.clauses) {
        XosClause sc;
        sc.values.assign(static_cast<size_t>(m), Rat(0));
        for (int i = 0; i < m0; ++i)
            sc.values[static_cast<size_t>(i)] = c.values[static_cast<size_t>(sub_originals[static_cast<size_t>(i)])];
        sf.clauses.push_back(std::move(sc));
    }
    MaximalFamily sub_fam;
    for (const auto& mset : oracle.family.sets) {
        ElemSet s(static_cast<size_t>(m));
        for (size_t t = mset.find_first(); t != ElemSet::npos; t = mset.find_next(t))
            if (sub_id[t] >= 0) s.set(static_cast<size_t>(sub_id[t]));
        sub_fam.sets.push_back(std::move(s));
    }
    FeasibilityOracle sub_oracle = FeasibilityOracle::explicit_family(m, std::move(sub_fam));

    std::vector<int> sub_order;
    sub_order.reserve(static_cast<size_t>(m));
    for (int pos = half; pos < n; ++pos)
        sub_order.push_back(sub_id[static_cast<size_t>(order[static_cast<size_t>(pos)])]);
    for (int d = 0; d < pad; ++d) sub_order.push_back(m0 + d);  // dummies arrive last

    SecretaryRunRecord rec =
        run_secretary(sf, sub_oracle, sub_order, scale_ladder(n), prf(seed, tag("main-run")));
    rec.dummy_count = pad;
    rec.seed = seed;
    // Map the selection back and report its value under the original f.
    ElemSet chosen = make_set(n);
    for (size_t t = rec.selected.find_first(); t != ElemSet::npos; t = rec.selected.find_next(t))
        if (static_cast<int>(t) < m0) chosen.set(static_cast<size_t>(sub_originals[t]));
    rec.selected = chosen;
    rec.value = xos_value(f, chosen).first;
    out.record = std::move(rec);
    return out;
}

}  // namespace dco
