#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

#include "dco/errors.hpp"

namespace dco {

// Exact arithmetic for clause values, scales and thresholds. After
// preprocessing everything is dyadic, so int64 components are ample at the
// instance sizes this toolkit runs.
using Rat = boost::rational<long long>;

inline Rat rat(long long num, long long den = 1) { return Rat(num, den); }

// 2^e for e possibly negative.
inline Rat pow2(int e) {
    long long one = 1;
    if (e >= 0) {
        if (e > 62) throw InputError("pow2 exponent too large: " + std::to_string(e));
        return Rat(one << e, 1);
    }
    if (e < -62) throw InputError("pow2 exponent too small: " + std::to_string(e));
    return Rat(1, one << (-e));
}

// Largest power of two <= x, for x > 0. Values in this codebase live in
// [2^-62, 2^62], which a linear scan covers quickly.
inline Rat floor_pow2(const Rat& x) {
    if (x <= Rat(0)) throw InputError("floor_pow2 requires a positive value");
    int e = 0;
    if (x >= Rat(1)) {
        while (pow2(e + 1) <= x) ++e;
    } else {
        while (pow2(e) > x) --e;
    }
    return pow2(e);
}

inline bool is_pow2(const Rat& x) { return x > Rat(0) && floor_pow2(x) == x; }

inline double to_double(const Rat& x) {
    return static_cast<double>(x.numerator()) / static_cast<double>(x.denominator());
}

inline std::string to_string(const Rat& x) {
    if (x.denominator() == 1) return std::to_string(x.numerator());
    return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

}  // namespace dco
