#ifndef ZERONOISE_RNG_HPP
#define ZERONOISE_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace zeronoise {

/// Philox-4x32-10 counter-based generator.  A (key, counter) pair maps to
/// 128 output bits with no sequential state, so per-path streams derived from
/// (seed, path index) are reproducible regardless of scheduling.
struct Philox4x32 {
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;

  static std::array<std::uint32_t, 4> block(std::uint64_t key, std::uint64_t counter) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    std::array<std::uint32_t, 4> c = {static_cast<std::uint32_t>(counter),
                                      static_cast<std::uint32_t>(counter >> 32), 0u, 0u};
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
      std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
      std::array<std::uint32_t, 4> next = {
          static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0,
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1,
          static_cast<std::uint32_t>(p0)};
      c = next;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return c;
  }
};

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stream of standard normal deviates, two per Philox block via Box-Muller.
/// The stream identity is the hashed (seed, stream) pair.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64(seed ^ splitmix64(stream + 0x517CC1B727220A95ULL))) {}

  double next() {
    if (!have_) {
      auto c = Philox4x32::block(key_, counter_++);
      std::uint64_t a = (static_cast<std::uint64_t>(c[0]) << 32) | c[1];
      std::uint64_t b = (static_cast<std::uint64_t>(c[2]) << 32) | c[3];
      // Uniforms in (0, 1); the +0.5 offset keeps log() away from 0.
      double u1 = ((a >> 11) + 0.5) * 0x1.0p-53;
      double u2 = ((b >> 11) + 0.5) * 0x1.0p-53;
      double rad = std::sqrt(-2.0 * std::log(u1));
      cached_ = rad * std::sin(2.0 * M_PI * u2);
      have_ = true;
      return rad * std::cos(2.0 * M_PI * u2);
    }
    have_ = false;
    return cached_;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool have_ = false;
};

}  // namespace zeronoise

#endif
