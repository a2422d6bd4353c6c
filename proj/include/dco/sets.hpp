#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace dco {

// Ground-set subsets as bitsets over element ids [0, n).
using ElemSet = boost::dynamic_bitset<uint64_t>;

inline ElemSet make_set(int n) { return ElemSet(static_cast<size_t>(n)); }

inline ElemSet make_set(int n, std::initializer_list<int> ids) {
    ElemSet s(static_cast<size_t>(n));
    for (int i : ids) s.set(static_cast<size_t>(i));
    return s;
}

inline ElemSet make_set(int n, const std::vector<int>& ids) {
    ElemSet s(static_cast<size_t>(n));
    for (int i : ids) s.set(static_cast<size_t>(i));
    return s;
}

inline std::vector<int> to_indices(const ElemSet& s) {
    std::vector<int> out;
    out.reserve(s.count());
    for (size_t i = s.find_first(); i != ElemSet::npos; i = s.find_next(i))
        out.push_back(static_cast<int>(i));
    return out;
}

// Strict total order on equal-size sets: ascending comparison of sorted id
// lists. Used as the final tie-break key.
inline bool lex_less(const ElemSet& a, const ElemSet& b) {
    size_t ia = a.find_first(), ib = b.find_first();
    while (ia != ElemSet::npos && ib != ElemSet::npos) {
        if (ia != ib) return ia < ib;
        ia = a.find_next(ia);
        ib = b.find_next(ib);
    }
    return ia == ElemSet::npos && ib != ElemSet::npos;
}

}  // namespace dco
