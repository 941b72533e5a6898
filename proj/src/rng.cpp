#include "svpath/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace svpath {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept
{
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

// 53-bit uniform strictly inside (0, 1).
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) noexcept
{
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::apply(Counter ctr, Key key) noexcept
{
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

NormalStream::NormalStream(std::uint64_t seed, StreamAddress address)
{
    if (address.c >= (1u << 24)) throw std::out_of_range("stream sub-index exceeds 2^24");
    key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    // Word 0 is the running block counter.
    base_ = {0u, (static_cast<std::uint32_t>(address.domain) << 24) | address.c, address.b, address.a};
}

void NormalStream::refill() noexcept
{
    Philox4x32::Counter ctr = base_;
    ctr[0] = block_++;
    words_ = Philox4x32::apply(ctr, key_);
}

double NormalStream::next() noexcept
{
    if (cached_ == 0) {
        refill();
        const double u1 = to_open_unit(words_[0], words_[1]);
        const double u2 = to_open_unit(words_[2], words_[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cache_ = {radius * std::sin(angle), radius * std::cos(angle)};
        cached_ = 2;
    }
    return cache_[--cached_];
}

void NormalStream::fill(std::span<double> out) noexcept
{
    for (double& v : out) v = next();
}

double NormalStream::next_uniform() noexcept
{
    cached_ = 0;
    refill();
    return to_open_unit(words_[0], words_[1]);
}

}  // namespace svpath
