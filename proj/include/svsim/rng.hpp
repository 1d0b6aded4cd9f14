/**
 * Deterministic RNG substreams for reproducible simulation.
 *
 * A stream is derived by hashing (master_seed, domain_tag, entity_ids) into
 * a splitmix64 state. Draws are a pure function of the derivation key and
 * the draw index, so streams can be created in any order, on any thread,
 * and always reproduce the same sequence.
 */

#ifndef SVSIM_RNG_HPP
#define SVSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace svsim {

/// 64-bit FNV-1a over raw bytes.
inline uint64_t fnv1a(std::string_view bytes, uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline uint64_t fnv1a_u64(uint64_t v, uint64_t h) {
    for (int i = 0; i < 8; ++i) {
        h ^= v & 0xFFu;
        h *= 1099511628211ULL;
        v >>= 8;
    }
    return h;
}

/// splitmix64 finalizer; avalanches FNV output into a well-mixed state.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/**
 * Counter-based random stream. Identical (master_seed, domain_tag, entity_ids)
 * always yields the identical draw sequence; distinct tags or ids give
 * statistically independent streams.
 */
class RngStream {
public:
    RngStream() : key_(0), cursor_(0) {}

    RngStream(uint64_t master_seed, std::string_view domain_tag,
              std::initializer_list<int64_t> entity_ids)
        : RngStream(master_seed, domain_tag,
                    std::vector<int64_t>(entity_ids.begin(), entity_ids.end())) {}

    RngStream(uint64_t master_seed, std::string_view domain_tag,
              const std::vector<int64_t>& entity_ids) {
        uint64_t h = fnv1a_u64(master_seed, 1469598103934665603ULL);
        h = fnv1a(domain_tag, h);
        h = fnv1a("\x1f", h); // separator so ("ab",[1]) != ("a",[?]) collisions stay unlikely
        for (int64_t id : entity_ids) {
            h = fnv1a_u64(static_cast<uint64_t>(id), h);
        }
        key_ = mix64(h);
        cursor_ = 0;
    }

    /// Stream keyed directly by a string (seeded-hashing embeddings).
    static RngStream from_string(std::string_view seed_string) {
        RngStream s;
        s.key_ = mix64(fnv1a(seed_string));
        s.cursor_ = 0;
        return s;
    }

    uint64_t next_u64() {
        ++cursor_;
        return mix64(key_ + cursor_ * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

    bool bernoulli(double p) { return next_double() < p; }

    /// Standard normal via Box-Muller. Two uniforms per draw, no spare cached.
    double normal() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) {
        return n == 0 ? 0 : next_u64() % n;
    }

    uint64_t key() const { return key_; }
    uint64_t cursor() const { return cursor_; }

private:
    uint64_t key_;
    uint64_t cursor_;
};

/// Pure derivation helper, mirrors the RngStream constructor.
inline RngStream derive_stream(uint64_t master_seed, std::string_view domain_tag,
                               const std::vector<int64_t>& entity_ids) {
    return RngStream(master_seed, domain_tag, entity_ids);
}

} // namespace svsim

#endif // SVSIM_RNG_HPP
