#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace sbmlab {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ with counter-based construction: Rng(seed, stream) yields a
/// stream that depends only on the pair, never on thread scheduling.
class Rng {
public:
    Rng() : Rng(0, 0) {}
    Rng(uint64_t seed, uint64_t stream) {
        uint64_t sm = seed ^ (0x5851f42d4c957f2dULL * (stream + 1));
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0,1).
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0,1] (safe under log).
    double uniform_pos() { return ((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double normal();

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<uint64_t, 4> s_;
};

namespace detail {

// Marsaglia-Tsang ziggurat for the standard normal, 128 layers.
// xv[0] is the virtual width of the base strip; xv[1] = R; xv[128] = 0.
struct ZigguratTables {
    std::array<double, 129> xv{};
    std::array<double, 129> fv{};
    ZigguratTables() {
        const double r = 3.442619855899;
        const double v = 9.91256303526217e-3;
        xv[1] = r;
        xv[0] = v * std::exp(0.5 * r * r);
        for (int i = 2; i <= 127; ++i)
            xv[i] = std::sqrt(-2.0 * std::log(v / xv[i - 1] + std::exp(-0.5 * xv[i - 1] * xv[i - 1])));
        xv[128] = 0.0;
        for (int i = 0; i <= 128; ++i) fv[i] = std::exp(-0.5 * xv[i] * xv[i]);
    }
};

inline const ZigguratTables& ziggurat() {
    static const ZigguratTables t;
    return t;
}

}  // namespace detail

inline double Rng::normal() {
    const auto& t = detail::ziggurat();
    for (;;) {
        uint64_t u = next_u64();
        int i = static_cast<int>(u & 127);
        double ux = static_cast<double>(static_cast<int64_t>(u) >> 11) * 0x1.0p-52;  // (-1,1)
        double z = ux * t.xv[i];
        if (std::abs(z) < t.xv[i + 1]) return z;
        if (i == 0) {
            // tail beyond R
            const double r = t.xv[1];
            double a, b;
            do {
                a = -std::log(uniform_pos()) / r;
                b = -std::log(uniform_pos());
            } while (b + b < a * a);
            return z > 0 ? r + a : -(r + a);
        }
        double yy = t.fv[i] + uniform() * (t.fv[i + 1] - t.fv[i]);
        if (yy < std::exp(-0.5 * z * z)) return z;
    }
}

}  // namespace sbmlab
