#pragma once

#include <cstddef>
#include <vector>

namespace risia {

// Hartigan's dip statistic: the smallest sup-norm distance between the
// empirical CDF of the sample and any unimodal CDF. Lies in [1/(2n), 1/4]
// for n >= 2 samples that are not all equal; 0 for constant or trivial
// samples. Ties are handled exactly (duplicating every observation leaves
// the statistic unchanged).
double dip_statistic(std::vector<double> sample);

// Monte Carlo (1 - alpha) quantile of the dip under the uniform null, with a
// fixed internal seed; memoized per sample size. Sizes above the bootstrap
// cap are extrapolated with the asymptotic 1/sqrt(n) scaling.
double dip_critical_value(std::size_t n, double alpha = 0.05);

} // namespace risia
