#include "dco/xos.hpp"

#include <bit>
#include <cstdint>
#include <string>

#include "dco/errors.hpp"

namespace dco {

void XosFunction::validate() const {
    for (const auto& c : clauses) {
        if (c.n() != n) throw InputError("clause length does not match ground-set size");
        for (const auto& v : c.values)
            if (v < Rat(0)) throw InputError("negative clause entry");
    }
}

Rat XosFunction::clause_sum(int clause, const ElemSet& s) const {
    const auto& vals = clauses[static_cast<size_t>(clause)].values;
    Rat sum(0);
    for (size_t i = s.find_first(); i != ElemSet::npos; i = s.find_next(i))
        sum += vals[i];
    return sum;
}

int ScaleLadder::index_of(const Rat& c) const {
    for (int i = 0; i < size(); ++i)
        if (scales[static_cast<size_t>(i)] == c) return i;
    return -1;
}

ScaleLadder scale_ladder(int n) {
    if (n < 2) throw InputError("scale ladder needs n >= 2");
    // ceil(2*log2(n)) = ceil(log2(n^2)) = bit_width(n^2 - 1).
    uint64_t nsq = static_cast<uint64_t>(n) * static_cast<uint64_t>(n);
    int k = std::bit_width(nsq - 1);
    ScaleLadder ladder;
    ladder.scales.reserve(static_cast<size_t>(k) + 1);
    for (int e = 0; e <= k; ++e) ladder.scales.push_back(pow2(-e));
    return ladder;
}

std::pair<Rat, int> xos_value(const XosFunction& f, const ElemSet& s) {
    if (static_cast<int>(s.size()) != f.n) throw InputError("set size does not match ground-set size");
    if (f.clauses.empty()) return {Rat(0), -1};
    Rat best(0);
    int best_idx = 0;
    for (int j = 0; j < static_cast<int>(f.clauses.size()); ++j) {
        Rat v = f.clause_sum(j, s);
        if (j == 0 || v > best) {
            best = v;
            best_idx = j;
        }
    }
    return {best, best_idx};
}

XosFunction round_down_pow2(const XosFunction& f) {
    XosFunction out = f;
    for (auto& c : out.clauses)
        for (auto& v : c.values)
            if (v > Rat(0)) v = floor_pow2(v);
    return out;
}

std::pair<XosFunction, PreprocessReport> preprocess(const XosFunction& f,
                                                    const std::vector<Rat>& presample_values,
                                                    bool coin, int n) {
    f.validate();
    PreprocessReport report;
    if (coin) {
        report.branch = Branch::kSingleChoice;
        return {f, report};
    }
    if (presample_values.empty()) throw InputError("main branch requires a nonempty pre-sample");

    Rat a_star(0);
    for (const auto& v : presample_values)
        if (v > a_star) a_star = v;
    report.a_star = a_star;
    if (a_star == Rat(0)) {
        // Degenerate: nothing to normalize against; caller falls back.
        report.branch = Branch::kSingleChoice;
        report.degenerate = true;
        return {f, report};
    }

    report.branch = Branch::kMain;
    Rat floor_threshold = a_star / Rat(static_cast<long long>(n) * n);
    XosFunction out;
    out.n = f.n;
    out.clauses.reserve(f.clauses.size());
    for (const auto& c : f.clauses) {
        XosClause nc;
        nc.values.reserve(c.values.size());
        for (const auto& a : c.values) {
            Rat hat;
            if (a < floor_threshold) {
                hat = Rat(0);
                report.dropped_mass += a / a_star;
            } else if (a > a_star) {
                hat = Rat(1);
            } else {
                hat = a / a_star;
            }
            if (hat > Rat(0)) hat = floor_pow2(hat);
            nc.values.push_back(hat);
        }
        out.clauses.push_back(std::move(nc));
    }

    report.dummy_count = (3 - out.n % 3) % 3;
    if (report.dummy_count > 0) {
        out.n += report.dummy_count;
        for (auto& c : out.clauses) c.values.resize(static_cast<size_t>(out.n), Rat(0));
    }
    return {out, report};
}

}  // namespace dco
