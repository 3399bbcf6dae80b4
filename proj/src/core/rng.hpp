#pragma once

#include <cmath>
#include <cstdint>

namespace rpt {

// splitmix64 finalizer; also the sequence generator used for seeding.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Address of one independent random stream: a master seed plus a stream id
// derived by hashing the path taken through sub().  Every Monte-Carlo shot
// owns its own stream, so estimators can re-stream the identical sequence
// in a second pass and results never depend on scheduling.
struct RngStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    RngStream sub(std::uint64_t k) const {
        return RngStream{master_seed, mix64(stream_id ^ mix64(k + 0x632be59bd9b4e019ULL))};
    }
};

// xoshiro256++ with splitmix64 seeding.  Chosen over the standard-library
// engines for its O(1) state setup; shot-per-stream sampling creates one
// engine per shot and mt19937_64 initialization would dominate the runtime.
class Rng {
  public:
    explicit Rng(const RngStream& stream) {
        std::uint64_t x = mix64(stream.master_seed ^ mix64(stream.stream_id));
        for (auto& w : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            w = mix64(x);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe to pass to log().
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the paired deviate is cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_open()));
        const double a = 6.283185307179586476925286766559 * uniform();
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rpt
