#include "svsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "svsim/errors.hpp"

namespace svsim {

double gini(const MetricSample& sample) {
    if (sample.empty()) {
        throw DomainError("gini: empty sample");
    }
    for (double x : sample) {
        if (x < 0.0) {
            throw DomainError("gini: negative entry");
        }
    }
    // Sorted form of the pairwise definition: sum |xi - xj| over ordered pairs
    // equals 2 * sum_i (2i + 1 - n) * x_(i) with 0-based sorted index i.
    // Summing after the sort keeps the result exactly permutation-invariant.
    MetricSample sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    for (double x : sorted) total += x;
    if (total == 0.0) {
        return 0.0;
    }
    const double n = static_cast<double>(sorted.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        acc += (2.0 * static_cast<double>(i) + 1.0 - n) * sorted[i];
    }
    return acc / (n * total);
}

double shannon_entropy_bits(const MetricSample& counts) {
    if (counts.empty()) {
        throw DomainError("entropy: empty sample");
    }
    double total = 0.0;
    for (double c : counts) {
        if (c < 0.0) {
            throw DomainError("entropy: negative count");
        }
        total += c;
    }
    if (total == 0.0) {
        throw DomainError("entropy: zero total");
    }
    double h = 0.0;
    for (double c : counts) {
        if (c <= 0.0) continue;
        double p = c / total;
        h -= p * std::log2(p);
    }
    return h < 0.0 ? 0.0 : h;
}

double mean(const MetricSample& sample) {
    if (sample.empty()) return 0.0;
    double s = 0.0;
    for (double x : sample) s += x;
    return s / static_cast<double>(sample.size());
}

double sample_std(const MetricSample& sample) {
    if (sample.size() < 2) return 0.0;
    double m = mean(sample);
    double acc = 0.0;
    for (double x : sample) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(sample.size() - 1));
}

} // namespace svsim
