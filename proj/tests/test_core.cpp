#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "svsim/dense_vector.hpp"
#include "svsim/embedding.hpp"
#include "svsim/errors.hpp"
#include "svsim/metrics.hpp"
#include "svsim/rng.hpp"

using namespace svsim;

namespace {

// Independent O(n^2) oracle: mean-normalized half of the average absolute
// pairwise difference, all ordered pairs.
double gini_pairwise_oracle(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double total = 0.0;
    for (double x : xs) total += x;
    if (total == 0.0) return 0.0;
    double diff_sum = 0.0;
    for (double a : xs)
        for (double b : xs) diff_sum += std::abs(a - b);
    const double mu = total / n;
    return diff_sum / (2.0 * n * n * mu);
}

} // namespace

TEST_CASE("derive_stream is a pure function of its inputs") {
    RngStream probe(99, "probe", {1});
    for (int trial = 0; trial < 100; ++trial) {
        uint64_t seed = probe.next_u64();
        std::string tag = "tag" + std::to_string(probe.next_below(7));
        std::vector<int64_t> ids = {static_cast<int64_t>(probe.next_below(1000)),
                                    static_cast<int64_t>(probe.next_below(1000))};
        RngStream a(seed, tag, ids);
        RngStream b(seed, tag, ids);
        for (int i = 0; i < 100; ++i) {
            REQUIRE(a.next_u64() == b.next_u64());
        }
    }
}

TEST_CASE("streams with different ids or tags diverge") {
    RngStream watch3(7, "watch", {3});
    RngStream watch4(7, "watch", {4});
    RngStream engage3(7, "engage", {3});
    uint64_t w3 = watch3.next_u64();
    CHECK(w3 != watch4.next_u64());
    CHECK(w3 != engage3.next_u64());
}

TEST_CASE("stream doubles are uniform in [0,1)") {
    RngStream s(11, "uniform", {0});
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double d = s.next_double();
        REQUIRE(d >= 0.0);
        REQUIRE(d < 1.0);
        sum += d;
    }
    CHECK(sum / 10000.0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("seeded embedding: identical seed string gives identical vector") {
    DenseVector a = seeded_gaussian_embedding("Archetype: Cooking|Keywords: vegan, pasta", 512);
    DenseVector b = seeded_gaussian_embedding("Archetype: Cooking|Keywords: vegan, pasta", 512);
    REQUIRE(a.dim() == 512);
    CHECK(a.values == b.values);
}

TEST_CASE("seeded embedding: supported dims only") {
    CHECK(seeded_gaussian_embedding("x", 50).dim() == 50);
    CHECK(seeded_gaussian_embedding("x", 128).dim() == 128);
    CHECK(seeded_gaussian_embedding("x", 768).dim() == 768);
    CHECK_THROWS_AS(seeded_gaussian_embedding("x", 64), ConfigError);
    CHECK_THROWS_AS(seeded_gaussian_embedding("x", 0), ConfigError);
}

TEST_CASE("seeded embedding: pooled moments are standard normal") {
    // 10,000+ pooled entries: mean within 0.05 of 0, sd within 0.05 of 1.
    std::vector<double> pool;
    for (int i = 0; i < 20; ++i) {
        DenseVector v = seeded_gaussian_embedding("moment-check-" + std::to_string(i), 512);
        pool.insert(pool.end(), v.values.begin(), v.values.end());
    }
    REQUIRE(pool.size() >= 10000);
    CHECK(std::abs(mean(pool)) < 0.05);
    CHECK(std::abs(sample_std(pool) - 1.0) < 0.05);
}

TEST_CASE("seeded embedding: 1000 distinct seeds give pairwise-distinct vectors") {
    std::set<std::vector<double>> seen;
    for (int i = 0; i < 1000; ++i) {
        DenseVector v = seeded_gaussian_embedding("seed-" + std::to_string(i), 50);
        seen.insert(v.values);
    }
    CHECK(seen.size() == 1000);
}

TEST_CASE("gini: frozen examples") {
    CHECK(gini({5, 5, 5, 5}) == doctest::Approx(0.0));
    CHECK(gini({1, 2, 3, 4}) == doctest::Approx(0.25)); // pairwise oracle value
    CHECK(gini({0, 0, 0, 0}) == 0.0);
    CHECK_THROWS_AS(gini({1.0, -1.0}), DomainError);
    CHECK_THROWS_AS(gini({}), DomainError);
}

TEST_CASE("gini: matches the O(n^2) oracle exhaustively, length <= 8 over {0..4}") {
    // Every sample of length 1..8 with entries in {0..4}.
    for (std::size_t len = 1; len <= 8; ++len) {
        std::vector<double> xs(len, 0.0);
        std::size_t combos = 1;
        for (std::size_t i = 0; i < len; ++i) combos *= 5;
        for (std::size_t code = 0; code < combos; ++code) {
            std::size_t c = code;
            for (std::size_t i = 0; i < len; ++i) {
                xs[i] = static_cast<double>(c % 5);
                c /= 5;
            }
            double expect = gini_pairwise_oracle(xs);
            double got = gini(xs);
            REQUIRE(std::abs(got - expect) < 1e-9);
        }
    }
}

TEST_CASE("gini: permutation and scale invariance") {
    RngStream s(3, "gini-prop", {0});
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t len = 1 + s.next_below(12);
        std::vector<double> xs(len);
        for (double& x : xs) x = s.uniform(0.0, 10.0);
        std::vector<double> perm = xs;
        for (std::size_t i = perm.size(); i > 1; --i) {
            std::swap(perm[i - 1], perm[s.next_below(i)]);
        }
        CHECK(gini(xs) == gini(perm)); // sort-based: exactly equal
        double c = s.uniform(0.1, 50.0);
        std::vector<double> scaled = xs;
        for (double& x : scaled) x *= c;
        CHECK(std::abs(gini(scaled) - gini(xs)) < 1e-12);
    }
}

TEST_CASE("entropy: frozen examples") {
    CHECK(shannon_entropy_bits({10}) == doctest::Approx(0.0));
    CHECK(shannon_entropy_bits({1, 1, 1, 1}) == doctest::Approx(2.0));
    CHECK(shannon_entropy_bits({3, 1}) == doctest::Approx(0.811278).epsilon(1e-6));
    CHECK_THROWS_AS(shannon_entropy_bits({0, 0}), DomainError);
    CHECK_THROWS_AS(shannon_entropy_bits({}), DomainError);
}

TEST_CASE("entropy: bounded by log2 of nonzero classes, equality iff uniform") {
    RngStream s(5, "entropy-prop", {0});
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t len = 1 + s.next_below(16);
        std::vector<double> counts(len);
        std::size_t nonzero = 0;
        for (double& c : counts) {
            c = static_cast<double>(s.next_below(9));
            if (c > 0) ++nonzero;
        }
        if (nonzero == 0) {
            counts[0] = 1;
            nonzero = 1;
        }
        double h = shannon_entropy_bits(counts);
        double bound = std::log2(static_cast<double>(nonzero));
        CHECK(h <= bound + 1e-12);
    }
    CHECK(shannon_entropy_bits({7, 7, 7, 7, 7, 7, 7, 7}) == doctest::Approx(3.0));
}

TEST_CASE("cosine: self, orthogonal, zero-norm convention") {
    DenseVector a(std::vector<double>{1.0, 2.0, 3.0});
    CHECK(cosine(a, a) == doctest::Approx(1.0));

    DenseVector e1(std::vector<double>{1.0, 0.0});
    DenseVector e2(std::vector<double>{0.0, 1.0});
    CHECK(cosine(e1, e2) == doctest::Approx(0.0));

    DenseVector zero(2);
    CosineResult r = cosine_checked(zero, e1);
    CHECK(r.value == 0.0);
    CHECK(r.degenerate);
    CHECK_FALSE(cosine_checked(e1, e2).degenerate);

    DenseVector longer(3);
    CHECK_THROWS_AS(cosine(e1, longer), DomainError);
}
