#include "perfsde/rng.hpp"

#include <cmath>
#include <numbers>

namespace perfsde {

namespace detail {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& x, const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * x[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    x = {hi1 ^ x[1] ^ key[0], lo1, hi0 ^ x[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 2> key, std::array<std::uint32_t, 4> counter) {
    for (int r = 0; r < 10; ++r) {
        round_once(counter, key);
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return counter;
}

}  // namespace detail

double NormalStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                           static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    ++counter_;
    const auto block = detail::philox4x32(key, ctr);
    const std::uint64_t b0 = (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
    const std::uint64_t b1 = (static_cast<std::uint64_t>(block[3]) << 32) | block[2];
    // 53-bit uniforms strictly inside (0,1); the offset keeps log() finite.
    const double u1 = (static_cast<double>(b0 >> 11) + 0.5) * 0x1p-53;
    const double u2 = (static_cast<double>(b1 >> 11) + 0.5) * 0x1p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double NormalStream::wiener_increment(double dt) {
    if (!(dt > 0.0)) throw NonPositiveDt("rng: Wiener increment requires dt > 0");
    return std::sqrt(dt) * normal();
}

}  // namespace perfsde
