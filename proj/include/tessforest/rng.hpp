#pragma once

#include <cstdint>
#include <cmath>
#include <string_view>

namespace tessforest {

// Splittable counter-based random stream.
//
// Every stream is identified by a 64-bit key; the i-th output is
// mix64(key + (i+1)*GAMMA) where mix64 is the SplitMix64 finalizer
// (Vigna 2015) and GAMMA = 2^64/phi. Child streams are derived purely
// from the parent key and a tag:
//
//     child_key = mix64(mix64(key ^ CHILD_SALT) + tag)
//
// so the stream assigned to any logical index path (replicate r, tree m,
// STIT below/above, ...) is a pure function of the master seed and the
// path, independent of how many variates other streams consumed and of
// the order streams are used in. This is what makes results reproducible
// and thread-count independent.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : key_(seed), counter_(0) {}

    std::uint64_t next_u64() {
        counter_ += 1;
        return mix64(key_ + counter_ * kGamma);
    }

    // Uniform on [0,1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on [a,b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Exponential with the given rate (mean 1/rate).
    double exponential(double rate) {
        // 1-u lies in (0,1], so the log is finite.
        return -std::log1p(-uniform()) / rate;
    }

    // Standard normal via Box-Muller (one value per call, no cached state).
    double normal() {
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    // Poisson by summing unit-rate exponential gaps; exact for desk-scale means.
    std::uint64_t poisson(double mean) {
        std::uint64_t n = 0;
        double acc = exponential(1.0);
        while (acc <= mean) {
            ++n;
            acc += exponential(1.0);
        }
        return n;
    }

    RngStream child(std::uint64_t tag) const {
        return RngStream(mix64(mix64(key_ ^ kChildSalt) + tag));
    }

    // Named substream; the tag is the FNV-1a 64-bit hash of the name.
    RngStream child(std::string_view name) const { return child(fnv1a(name)); }

    std::uint64_t key() const { return key_; }

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~static_cast<result_type>(0); }
    result_type operator()() { return next_u64(); }

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001B3ULL;
        }
        return h;
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kChildSalt = 0x53F0E5D157D0BE2FULL;
    static constexpr double kPi = 3.14159265358979323846;

    std::uint64_t key_;
    std::uint64_t counter_;
};

} // namespace tessforest
