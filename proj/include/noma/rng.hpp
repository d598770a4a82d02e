#pragma once

#include <cstdint>
#include <random>

namespace noma {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded random stream backed by std::mt19937_64.
///
/// Stream derivation: the engine for (seed, stream) is seeded with
/// splitmix64(seed ^ splitmix64(stream)). Variates are produced from raw
/// engine output only, so sequences are identical across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng for_stream(std::uint64_t seed, std::uint64_t stream)
    {
        return Rng(splitmix64(seed ^ splitmix64(stream)));
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept
    {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Unit-mean exponential.
    double exponential() noexcept;

    /// Gamma variate with integer shape and unit scale (sum of exponentials).
    double gamma_integer(int shape) noexcept;

    std::uint64_t next() noexcept { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

} // namespace noma
