#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

namespace regbench {

using Rng = std::mt19937_64;

// Pipeline stages draw from independent child streams so any stage can be
// replayed without consuming another stage's randomness.  A child seed is
// splitmix64(base ^ splitmix64(stream_tag << 32 | index)); the tags below are
// frozen, renumbering them changes every generated dataset.
enum class Stream : std::uint64_t {
  Eigenvalues = 1,
  Basis = 2,
  Beta = 3,
  Features = 4,
  Noise = 5,
  Split = 6,
  CvFolds = 7,
  Subsample = 8,
  Knockoff = 9,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t child_seed(std::uint64_t base, Stream stream,
                                   std::uint64_t index = 0) {
  const auto tag = (static_cast<std::uint64_t>(stream) << 32) | index;
  return splitmix64(base ^ splitmix64(tag));
}

inline Rng child_rng(std::uint64_t base, Stream stream, std::uint64_t index = 0) {
  return Rng(child_seed(base, stream, index));
}

inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s,
                             std::uint64_t h = 1469598103934665603ull) {
  return fnv1a64(s.data(), s.size(), h);
}

}  // namespace regbench
