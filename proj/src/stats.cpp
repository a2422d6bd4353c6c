#include "dco/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstddef>

#include "dco/errors.hpp"

namespace dco {

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) throw InputError("mean of empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

MeanCI mean_ci(const std::vector<double>& xs, double confidence) {
    if (xs.empty()) throw InputError("mean_ci of empty sample");
    double z;
    if (confidence == 0.95)
        z = 1.959963984540054;
    else if (confidence == 0.99)
        z = 2.5758293035489004;
    else
        throw InputError("unsupported confidence level");
    double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    size_t n = xs.size();
    double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    return MeanCI{m, z * sd / std::sqrt(static_cast<double>(n)), n};
}

RatioCI ratio_ci(const MeanCI& num, const MeanCI& den) {
    RatioCI r;
    if (den.mean == 0.0) throw InputError("ratio_ci with zero denominator mean");
    r.ratio = num.mean / den.mean;
    double den_lo = den.lo(), den_hi = den.hi();
    if (den_lo <= 0.0) {
        // Denominator CI touches zero: report only the point estimate.
        r.lo = 0.0;
        r.hi = std::numeric_limits<double>::infinity();
        return r;
    }
    r.lo = num.lo() / den_hi;
    r.hi = num.hi() / den_lo;
    return r;
}

double chi_square_pvalue(double stat, double dof) {
    if (stat <= 0.0) return 1.0;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

double chi_square_uniform_pvalue(const std::vector<uint64_t>& counts) {
    if (counts.size() < 2) throw InputError("chi-square needs at least 2 cells");
    uint64_t total = 0;
    for (uint64_t c : counts) total += c;
    if (total == 0) throw InputError("chi-square on empty sample");
    double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    double stat = 0.0;
    for (uint64_t c : counts) {
        double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return chi_square_pvalue(stat, static_cast<double>(counts.size() - 1));
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("ls_slope needs matched samples, n >= 2");
    double mx = mean_of(x), my = mean_of(y);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InputError("ls_slope with degenerate x");
    return sxy / sxx;
}

}  // namespace dco
