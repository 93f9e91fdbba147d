#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tvq {

/// 64-bit Mersenne twister with portable uniform/exponential draws.
/// std::uniform_real_distribution is implementation-defined, so draws are
/// built directly from the raw 64-bit output to keep sample paths identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Independent stream keyed by (base seed, replication, substream).
  static Rng stream(std::uint64_t base, std::uint64_t replication, std::uint64_t substream) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(replication),
                      static_cast<std::uint32_t>(replication >> 32),
                      static_cast<std::uint32_t>(substream), 0x9e3779b9u};
    Rng r(0);
    r.eng_.seed(seq);
    return r;
  }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  /// Standard normal by Box-Muller; caches the second variate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * M_PI * uniform();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace tvq
