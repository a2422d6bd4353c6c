#pragma once

#include <compare>
#include <utility>
#include <vector>

#include "dco/rational.hpp"
#include "dco/sets.hpp"

namespace dco {

// One clause of an XOS function: a nonnegative value per element.
struct XosClause {
    std::vector<Rat> values;

    int n() const { return static_cast<int>(values.size()); }
};

// f(S) = max over clauses of the clause-sum on S.
struct XosFunction {
    std::vector<XosClause> clauses;
    int n = 0;

    void validate() const;  // shape + nonnegativity

    Rat clause_sum(int clause, const ElemSet& s) const;
};

// Deterministic total-order key standing in for the infinitesimal
// perturbations used to make optima unique. Smaller key = preferred first.
struct TieBreakKey {
    int element = 0;
    int clause = 0;
    auto operator<=>(const TieBreakKey&) const = default;
};

// Descending powers of two, 1 down to 2^-ceil(2*log2(n)).
struct ScaleLadder {
    std::vector<Rat> scales;

    int size() const { return static_cast<int>(scales.size()); }
    const Rat& at(int i) const { return scales[static_cast<size_t>(i)]; }
    // Index of a scale in the ladder, or -1.
    int index_of(const Rat& c) const;
};

ScaleLadder scale_ladder(int n);

// (f(S), index of a maximizing clause; ties to the smallest index).
std::pair<Rat, int> xos_value(const XosFunction& f, const ElemSet& s);

enum class Branch { kSingleChoice, kMain };

struct PreprocessReport {
    Branch branch = Branch::kMain;
    Rat a_star = Rat(0);       // top pre-sample value
    Rat dropped_mass = Rat(0); // normalized mass zeroed by the a*/n^2 floor, all clauses
    int dummy_count = 0;       // zero-value elements appended so n % 3 == 0
    bool degenerate = false;   // all pre-sample values were zero
};

// Round every clause entry down to the nearest power of two (zeros stay).
XosFunction round_down_pow2(const XosFunction& f);

// Full preprocessing: with `coin` set the caller runs the single-choice
// fallback and f is returned untouched. Otherwise entries are normalized by
// the pre-sample top value (floor to 0 below a*/n^2, cap at 1 above a*),
// rounded down to powers of two, and the ground set is padded to a multiple
// of three with all-zero dummy elements.
std::pair<XosFunction, PreprocessReport> preprocess(const XosFunction& f,
                                                    const std::vector<Rat>& presample_values,
                                                    bool coin, int n);

}  // namespace dco
