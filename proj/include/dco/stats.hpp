#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dco {

struct MeanCI {
    double mean = 0.0;
    double half_width = 0.0;  // z * sd / sqrt(n)
    size_t n = 0;

    double lo() const { return mean - half_width; }
    double hi() const { return mean + half_width; }
    bool overlaps(const MeanCI& other) const { return lo() <= other.hi() && other.lo() <= hi(); }
};

// Normal-approximation CI at the given confidence (0.95 or 0.99).
MeanCI mean_ci(const std::vector<double>& xs, double confidence);

double mean_of(const std::vector<double>& xs);

// Conservative CI for a ratio of means: [lo_num/hi_den, hi_num/lo_den].
struct RatioCI {
    double ratio = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};
RatioCI ratio_ci(const MeanCI& num, const MeanCI& den);

// Upper-tail p-value of a chi-square statistic with `dof` degrees of freedom.
double chi_square_pvalue(double stat, double dof);

// Pearson chi-square uniformity test over `counts` cells.
double chi_square_uniform_pvalue(const std::vector<uint64_t>& counts);

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

// Gap summary shared by the prophet and probing experiments.
struct GapStats {
    std::vector<std::string> policy_names;
    std::vector<MeanCI> policy_values;
    MeanCI benchmark;            // hindsight optimum / adaptive value
    size_t best_policy = 0;      // argmax of policy means
    RatioCI gap;                 // benchmark over best policy
    bool denominator_lower_bound = false;  // set when the policy side is a sampled lower bound
};

}  // namespace dco
