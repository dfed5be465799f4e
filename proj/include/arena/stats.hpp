#ifndef ARENA_STATS_HPP
#define ARENA_STATS_HPP

#include <cstddef>
#include <vector>

namespace arena {

// Two-sided Hoeffding bound for the empirical mean of n i.i.d. [-1,1]
// variables deviating by more than alpha: 2*exp(-alpha^2*n/2).  The bound
// may exceed 1 (vacuous) for small alpha*n; callers get the raw value.
double hoeffding_bound(std::size_t n, double alpha);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Wilson score interval for a binomial proportion (default 95%).
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959964);

double mean_of(const std::vector<double>& xs);
double sample_stddev(const std::vector<double>& xs);
// Median; for even sizes the average of the middle pair.  Copies input.
double median_of(std::vector<double> xs);

}  // namespace arena

#endif  // ARENA_STATS_HPP
