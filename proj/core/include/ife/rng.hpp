#pragma once

#include <cstdint>
#include <random>

namespace ife {

/// Seeded 64-bit generator with a portable bounded draw. The standard
/// distributions are implementation-defined, which would make generated
/// graphs and workloads differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound) by multiply-shift; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    __extension__ using Wide = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<Wide>(engine_()) * bound) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ife
