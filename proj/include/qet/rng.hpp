// Counter-based seedable random stream.
//
// Every randomized operation in the library takes an explicit RandomStream;
// there is no global RNG.  Identical (seed, stream_id) pairs reproduce the
// same draw sequence, and distinct stream_ids give independent sequences,
// so parallel trials are reproducible by construction.
#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace qet {

// SplitMix64 finalizer; a strong 64-bit mixing function.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RandomStream {
public:
    RandomStream(uint64_t seed = 0, uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id), counter_(0) {}

    uint64_t seed() const { return seed_; }
    uint64_t stream_id() const { return stream_id_; }

    // Derive an independent child stream; deterministic in (seed, ids).
    RandomStream substream(uint64_t id) const {
        return RandomStream(mix64(seed_ ^ mix64(stream_id_ * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL)),
                            mix64(id + 0xd1b54a32d192ed03ULL));
    }

    uint64_t next_u64() {
        uint64_t v = mix64(seed_ ^ mix64(stream_id_ + 0x2545f4914f6cdd1dULL) ^ mix64(counter_));
        ++counter_;
        return v;
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    uint64_t uniform_int(uint64_t n) {
        // Rejection-free for our purposes: n << 2^64 makes the bias negligible,
        // but use rejection anyway to keep draws exact.
        uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do { v = next_u64(); } while (v >= lim);
        return v % n;
    }

    // Standard normal via Box-Muller (no cached spare: keeps the stream
    // position a pure function of the number of calls).
    double normal() {
        double u1 = uniform(), u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Binomial(n, p) sample.  Exact for small counts; a clipped, rounded
    // normal approximation once n*p*(1-p) is large enough that the
    // discrepancy is far below our statistical tolerances.
    uint64_t binomial(uint64_t n, double p) {
        if (p <= 0.0) return 0;
        if (p >= 1.0) return n;
        double npq = double(n) * p * (1.0 - p);
        if (n <= 128) {
            uint64_t k = 0;
            for (uint64_t i = 0; i < n; ++i) k += (uniform() < p);
            return k;
        }
        if (npq <= 4000.0) {
            // Inversion walk over the pmf, expanding outward from the mode so
            // the starting mass never underflows (P[X = 0] can be exp(-n)).
            double q = 1.0 - p;
            uint64_t mode = uint64_t(double(n + 1) * p);
            if (mode > n) mode = n;
            double logpm = std::lgamma(double(n) + 1.0) -
                           std::lgamma(double(mode) + 1.0) -
                           std::lgamma(double(n - mode) + 1.0) +
                           double(mode) * std::log(p) +
                           double(n - mode) * std::log(q);
            double pm = std::exp(logpm);
            double u = uniform();
            double acc = pm;
            if (u <= acc) return mode;
            uint64_t lo = mode, hi = mode;
            double plo = pm, phi = pm;
            while (lo > 0 || hi < n) {
                if (hi < n) {
                    ++hi;
                    phi *= (double(n - hi + 1) / double(hi)) * (p / q);
                    acc += phi;
                    if (u <= acc) return hi;
                }
                if (lo > 0) {
                    plo *= (double(lo) / double(n - lo + 1)) * (q / p);
                    --lo;
                    acc += plo;
                    if (u <= acc) return lo;
                }
            }
            return hi;  // rounding gap at the extreme tail
        }
        double mean = double(n) * p;
        double g = normal();
        double v = std::round(mean + std::sqrt(npq) * g);
        if (v < 0.0) v = 0.0;
        if (v > double(n)) v = double(n);
        return uint64_t(v);
    }

    // Multinomial histogram over probabilities p (need not sum to exactly 1;
    // the remainder chain normalizes).  O(|p|) independent of shots.
    std::vector<uint64_t> multinomial(uint64_t shots, const std::vector<double>& p) {
        std::vector<uint64_t> hist(p.size(), 0);
        double rest = 1.0;
        uint64_t left = shots;
        for (size_t i = 0; i + 1 < p.size() && left > 0; ++i) {
            double cond = (rest > 1e-15) ? p[i] / rest : 1.0;
            if (cond > 1.0) cond = 1.0;
            uint64_t k = binomial(left, cond);
            hist[i] = k;
            left -= k;
            rest -= p[i];
        }
        if (!p.empty()) hist[p.size() - 1] += left;
        return hist;
    }

private:
    uint64_t seed_;
    uint64_t stream_id_;
    uint64_t counter_;
};

} // namespace qet
