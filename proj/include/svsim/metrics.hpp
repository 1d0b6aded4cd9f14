/**
 * Inequality and diversity metrics reported by the experiment harness:
 * Gini coefficient over non-negative samples and Shannon entropy in bits.
 */

#ifndef SVSIM_METRICS_HPP
#define SVSIM_METRICS_HPP

#include <vector>

namespace svsim {

/// Non-negative observations (views, revenue, counts).
using MetricSample = std::vector<double>;

/**
 * Mean-normalized Gini: half the average absolute pairwise difference
 * (all ordered pairs, self-pairs included) divided by the mean.
 * All-zero input returns 0 by convention. Throws DomainError on negative
 * entries or an empty sample.
 */
double gini(const MetricSample& sample);

/// Shannon entropy of the normalized shares, in bits. Zero-count classes are
/// skipped. Throws DomainError when the total is zero or the sample is empty.
double shannon_entropy_bits(const MetricSample& counts);

/// Sample mean; 0 for empty input.
double mean(const MetricSample& sample);

/// Sample standard deviation with n-1 denominator; 0 when fewer than 2 values.
double sample_std(const MetricSample& sample);

} // namespace svsim

#endif // SVSIM_METRICS_HPP
