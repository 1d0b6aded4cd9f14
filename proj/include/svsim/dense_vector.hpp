#ifndef SVSIM_DENSE_VECTOR_HPP
#define SVSIM_DENSE_VECTOR_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "svsim/errors.hpp"

namespace svsim {

/// Fixed-length real vector. Length is the dimension; entries must stay finite.
struct DenseVector {
    std::vector<double> values;

    DenseVector() = default;
    explicit DenseVector(std::size_t dim, double fill = 0.0) : values(dim, fill) {}
    explicit DenseVector(std::vector<double> v) : values(std::move(v)) {}

    std::size_t dim() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    double norm() const {
        double s = 0.0;
        for (double x : values) s += x * x;
        return std::sqrt(s);
    }

    bool finite() const {
        for (double x : values) {
            if (!std::isfinite(x)) return false;
        }
        return true;
    }
};

struct CosineResult {
    double value = 0.0;
    bool degenerate = false; // a zero-norm input; value forced to 0
};

/// Cosine similarity. Zero-norm inputs yield 0 with the degenerate flag set
/// instead of NaN so ranking scores stay finite.
inline CosineResult cosine_checked(const DenseVector& a, const DenseVector& b) {
    if (a.dim() != b.dim()) {
        throw DomainError("cosine: dimension mismatch");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        return {0.0, true};
    }
    double v = dot / (std::sqrt(na) * std::sqrt(nb));
    if (v > 1.0) v = 1.0;
    if (v < -1.0) v = -1.0;
    return {v, false};
}

inline double cosine(const DenseVector& a, const DenseVector& b) {
    return cosine_checked(a, b).value;
}

/// First n entries of a longer vector (fallback projection onto user space).
inline DenseVector truncate(const DenseVector& v, std::size_t n) {
    if (v.dim() < n) {
        throw DomainError("truncate: vector shorter than requested length");
    }
    return DenseVector(std::vector<double>(v.values.begin(), v.values.begin() + n));
}

} // namespace svsim

#endif // SVSIM_DENSE_VECTOR_HPP
