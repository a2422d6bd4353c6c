#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dco/constraints.hpp"
#include "dco/rational.hpp"
#include "dco/sets.hpp"
#include "dco/xos.hpp"

namespace dco {

// Arrival stream split into equal thirds: Current-Sample, Lower-Sample, Real.
// Positions are 0-based; order[pos] is the element arriving at pos.
struct StreamPartition {
    std::vector<int> order;
    int n = 0;

    static StreamPartition make(std::vector<int> order);

    int third() const { return n / 3; }
    int bar(int t) const { return t + 2 * n / 3; }  // I1 position t -> paired Real position
    bool in_i1(int pos) const { return pos < third(); }
    bool in_i2(int pos) const { return pos >= third() && pos < 2 * third(); }
    bool in_i3(int pos) const { return pos >= 2 * third(); }

    ElemSet i1_elements() const;
    ElemSet i2_elements() const;
    ElemSet i3_elements() const;
    // Elements at I1 positions t+1 .. n/3-1 (the unprocessed Current-Sample suffix).
    ElemSet i1_suffix_elements(int t) const;
};

// One uniform ladder label per Real position (indexed by pos - 2n/3).
struct LabelAssignment {
    std::vector<int> scale_index;
};

LabelAssignment assign_labels(int n, const ScaleLadder& ladder, uint64_t seed);

// Result of a constrained-optimum query. `set` is S (supersets of A for the
// <=C variant); `witness` is the lower-scale witness T. When no clause meets
// the thresholds the result is the sentinel: satisfiable=false, value 0.
struct ConstrainedOptResult {
    ElemSet set;
    int clause = -1;
    ElemSet witness;
    Rat value = Rat(0);
    bool satisfiable = false;
};

// Strict "better than" order making optima unique: satisfiable first, then
// value desc, clause asc, |S| desc, S lex asc, |T| desc, T lex asc. The
// set-cardinality key realizes the positive infinitesimal perturbations: at
// equal value, supersets win.
bool result_better(const ConstrainedOptResult& a, const ConstrainedOptResult& b);

// Max_{S,j} sum_{t in S} v_{t,j} s.t. S feasible, S >= A with clause-sum on A
// at least tau_A, and v_{t,j} <= C for all t in I∩S. Explicit oracles only.
ConstrainedOptResult solve_opt_leq_c(const ElemSet& I, const ElemSet& A, const Rat& tau_A,
                                     const Rat& C, const XosFunction& f,
                                     const FeasibilityOracle& oracle);

// Max_{S ⊆ I_cur,j} |S| with v_{t,j} = C on S, given a witness T ⊆ I_lower with
// per-element value <= C/2 and total >= tau_lower such that A∪S∪T is feasible
// and the clause-sum on A is at least tau_A. T is all eligible elements of the
// hosting maximal set.
ConstrainedOptResult solve_opt_c(const ElemSet& I_cur, const ElemSet& A, const Rat& tau_A,
                                 const Rat& C, const ElemSet& I_lower, const Rat& tau_lower,
                                 const XosFunction& f, const FeasibilityOracle& oracle);

// Unconstrained offline optimum over an explicit oracle (any size).
ConstrainedOptResult offline_optimum(const XosFunction& f, const FeasibilityOracle& oracle);

struct PhaseDiag {
    int scale_index = 0;
    Rat scale = Rat(0);
    Rat tau_alg_start = Rat(0);
    Rat opt_leq_value = Rat(0);  // Opt^{<=C}(I2 | ALG, tau_ALG) at phase start
    Rat tau_below = Rat(0);      // its value from scales <= C/2 inside I2
    long opt_c_size = 0;         // C-valued elements of that optimum inside I2
    long alg_added = 0;          // elements selected during the phase
    double invariant_lhs = 0.0;  // tau_ALG + opt_leq_value / (1000 log2 n)
};

struct SecretaryRunRecord {
    ElemSet selected;
    Rat value = Rat(0);    // f(selected)
    Rat tau_alg = Rat(0);
    Branch branch = Branch::kMain;
    bool degenerate = false;
    uint64_t seed = 0;
    std::vector<PhaseDiag> phases;
    long selection_steps = 0;
    bool feasible_throughout = true;
    // Phase transitions where the logged invariant dropped by more than
    // C*|Opt_C|/(1000 log2 n); reported, never asserted.
    int invariant_violations = 0;
    int dummy_count = 0;  // pipeline only
};

// Implementable algorithm: phases over descending scales; per phase the Real
// cursor pops the next arrived Real element on every label hit. Requires a
// preprocessed instance (all nonzero clause values on the ladder).
SecretaryRunRecord run_secretary(const XosFunction& f, const FeasibilityOracle& oracle,
                                 const std::vector<int>& order, const ScaleLadder& ladder,
                                 uint64_t seed);

// Analysis-side twin: per phase re-scans the paired Real positions instead of
// popping the cursor. Equivalent in distribution under random arrival order.
SecretaryRunRecord run_ideal_secretary(const XosFunction& f, const FeasibilityOracle& oracle,
                                       const std::vector<int>& order, const ScaleLadder& ladder,
                                       uint64_t seed);

// Classic single-choice rule: observe floor(n/e) values, then take the first
// strict record (strictly above everything seen before). `eligible` masks
// positions that may be selected; ineligible values still inform the record.
std::optional<int> single_choice_select(const std::vector<Rat>& values,
                                        const std::vector<char>* eligible = nullptr);

// Full pipeline for one trial: fair coin to the single-choice branch, else
// first half is the pre-sample used to normalize, and the main algorithm runs
// on the second half (padded with value-0 dummies to a multiple of three).
// Reported value is measured by the ORIGINAL f.
struct PipelineResult {
    SecretaryRunRecord record;
    PreprocessReport prep;
};

PipelineResult run_pipeline(const XosFunction& f, const FeasibilityOracle& oracle,
                            const std::vector<int>& order, uint64_t seed);

}  // namespace dco
