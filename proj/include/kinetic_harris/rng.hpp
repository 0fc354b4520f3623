#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "domain.hpp"

namespace kh {

// Philox4x32-10 counter-based generator. The key is the run seed, the high
// counter words carry the stream (particle index), the low words a block
// counter. Streams never overlap and any block can be regenerated directly,
// which is what makes results independent of the worker count.
class CounterRng
{
  public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t block = 0)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)}
        , stream_(stream)
        , block_(block)
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()()
    {
        if (pos_ == 2)
        {
            refill();
        }
        return buf_[pos_++];
    }

    // Uniform on the open interval (0, 1).
    double uniform()
    {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double exponential() { return -std::log(uniform()); }

    // Gamma(shape, 1) by Marsaglia-Tsang; boosted for shape < 1.
    double gamma(double shape)
    {
        if (shape < 1.0)
        {
            double g = gamma(shape + 1.0);
            return g * std::pow(uniform(), 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;)
        {
            double z = normal();
            double w = 1.0 + c * z;
            if (w <= 0.0)
                continue;
            w = w * w * w;
            double u = uniform();
            if (std::log(u) < 0.5 * z * z + d - d * w + d * std::log(w))
                return d * w;
        }
    }

    // Next unused block; store it to resume the stream later.
    std::uint64_t next_block() const { return block_; }

    static std::array<std::uint32_t, 4>
    philox(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
    {
        constexpr std::uint32_t m0 = 0xD2511F53u;
        constexpr std::uint32_t m1 = 0xCD9E8D57u;
        constexpr std::uint32_t w0 = 0x9E3779B9u;
        constexpr std::uint32_t w1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round)
        {
            std::uint64_t p0 = std::uint64_t(m0) * ctr[0];
            std::uint64_t p1 = std::uint64_t(m1) * ctr[2];
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += w0;
            key[1] += w1;
        }
        return ctr;
    }

  private:
    void refill()
    {
        auto out = philox({static_cast<std::uint32_t>(block_),
                           static_cast<std::uint32_t>(block_ >> 32),
                           static_cast<std::uint32_t>(stream_),
                           static_cast<std::uint32_t>(stream_ >> 32)},
                          key_);
        ++block_;
        buf_[0] = (std::uint64_t(out[1]) << 32) | out[0];
        buf_[1] = (std::uint64_t(out[3]) << 32) | out[2];
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_;
    std::array<std::uint64_t, 2> buf_{};
    int pos_ = 2;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stream tags keep equilibrium draws, simulation and test hooks disjoint.
enum class StreamTag : std::uint64_t
{
    Simulation = 0,
    Equilibrium = 1,
    Initial = 2,
    Auxiliary = 3,
};

inline std::uint64_t stream_id(StreamTag tag, std::uint64_t index)
{
    return (static_cast<std::uint64_t>(tag) << 56) ^ index;
}

inline Vec sample_maxwellian(CounterRng& rng, int d)
{
    Vec v{};
    for (int i = 0; i < d; ++i)
        v[i] = rng.normal();
    return v;
}

// Uniform direction on S^{d-1}; for d = 1 this is a random sign.
inline Vec sample_sphere(CounterRng& rng, int d)
{
    Vec u{};
    if (d == 1)
    {
        u[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
        return u;
    }
    for (;;)
    {
        for (int i = 0; i < d; ++i)
            u[i] = rng.normal();
        double n = norm(u);
        if (n > 1e-300)
            return (1.0 / n) * u;
    }
}

} // namespace kh
