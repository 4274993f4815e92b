#pragma once

#include <array>
#include <cstdint>

#include "perfsde/errors.hpp"

namespace perfsde {

namespace detail {

/// Philox-4x32-10 block function (Salmon et al., counter-based).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 2> key, std::array<std::uint32_t, 4> counter);

}  // namespace detail

/// Deterministic stream of standard normals keyed by (seed, stream, counter).
/// Distinct pairs give independent-behaving streams; the same pair replays
/// the identical sequence regardless of what other streams do. Draws are
/// produced by Box-Muller from one Philox block per pair of normals.
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    double normal();

    /// sqrt(dt) * normal(). Throws NonPositiveDt.
    double wiener_increment(double dt);

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace perfsde
