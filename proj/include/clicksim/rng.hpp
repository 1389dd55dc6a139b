#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace clicksim {

/// Reproducible Gaussian source keyed by (seed, stream_id).
///
/// The engine is std::mt19937_64 seeded through std::seed_seq, both of which
/// the standard pins down bit-for-bit, and the Gaussian transform is an
/// in-house polar Box-Muller so that no implementation-defined distribution is
/// involved. Distinct stream ids give statistically independent sequences.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Uniform on (0, 1].
  double uniform() noexcept {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  /// g1 + i g2 with g1, g2 independent standard normals (one Box-Muller pair).
  std::complex<double> complex_normal() noexcept;

  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace clicksim
