#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace rainweave {

// splitmix64 step: advances `state` by the golden-ratio increment and
// returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

// xoshiro256** (Blackman & Vigna), state filled by four splitmix64 outputs
// of the seed. Every draw in the library goes through uniform_below, which
// uses rejection sampling on the raw 64-bit output, so a seed reproduces the
// same sequence on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for work item `stream` under a run seed.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);
  std::size_t pick(std::size_t count) { return static_cast<std::size_t>(uniform_below(count)); }

  const std::array<std::uint64_t, 4>& state() const { return state_; }
  static Rng from_state(const std::array<std::uint64_t, 4>& state);

private:
  Rng() = default;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace rainweave
