#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace svpath {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Stateless: the output is a pure function of (counter, key).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter apply(Counter ctr, Key key) noexcept;
};

/// Independent stream families. A stream is addressed by (domain, a, b, c) and
/// never shares counters with another address under the same seed.
enum class StreamDomain : std::uint32_t {
    Bridge = 1,
    Price = 2,
    SequentialVariance = 3,
    Euler = 4,
    Test = 0xff,
};

struct StreamAddress {
    StreamDomain domain = StreamDomain::Test;
    std::uint32_t a = 0;  // outer index (e.g. quadrature node)
    std::uint32_t b = 0;  // path index
    std::uint32_t c = 0;  // sub-path index, < 2^24
};

/// Standard normals drawn from one Philox stream via Box-Muller.
/// Draw k of the stream is identical regardless of how draws are batched.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, StreamAddress address);

    double next() noexcept;
    void fill(std::span<double> out) noexcept;

    /// Uniform in the open interval (0, 1), consuming from the same counter sequence.
    double next_uniform() noexcept;

private:
    void refill() noexcept;

    Philox4x32::Key key_{};
    Philox4x32::Counter base_{};
    std::uint32_t block_ = 0;
    std::array<std::uint32_t, 4> words_{};
    std::array<double, 2> cache_{};
    int cached_ = 0;
};

}  // namespace svpath
