#ifndef SMRSD_RNG_HPP
#define SMRSD_RNG_HPP

#include <complex>
#include <cmath>
#include <cstdint>

namespace smrsd {

/// Labels for independent random-number streams. Streams derived with
/// different kinds never overlap even for equal index pairs.
enum class StreamKind : std::uint64_t {
  SimTrial = 1,       // Monte Carlo sweep trials
  Term2 = 2,          // level-1 miss-probability estimation
  TheoryChannel = 3,  // semi-analytic complexity channel draws
  Generic = 4,
};

/// Counter-seeded pseudo-random stream (splitmix64 core).
///
/// A stream's output is a pure function of (seed, kind, major, minor), so
/// trial-level draws are reproducible regardless of execution order or
/// thread count. The generator is fully portable: no standard-library
/// distributions are involved.
class Stream {
 public:
  explicit Stream(std::uint64_t state) : state_(state) {}

  static Stream derive(std::uint64_t seed, StreamKind kind,
                       std::uint64_t major, std::uint64_t minor) {
    std::uint64_t h = seed;
    h = mix(h + 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(kind));
    h = mix(h + 0xBF58476D1CE4E5B9ULL + major);
    h = mix(h + 0x94D049BB133111EBULL + minor);
    return Stream(h);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Top `n` bits of one draw as an unsigned word, n in [1, 32].
  std::uint32_t bits(int n) {
    return static_cast<std::uint32_t>(next_u64() >> (64 - n));
  }

  /// Standard normal via the Marsaglia polar method.
  double gauss() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Circularly symmetric complex Gaussian with total variance `var`
  /// (var/2 per real dimension).
  std::complex<double> cgauss(double var) {
    const double scale = std::sqrt(0.5 * var);
    const double re = gauss();
    const double im = gauss();
    return {scale * re, scale * im};
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace smrsd

#endif  // SMRSD_RNG_HPP
