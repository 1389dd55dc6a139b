#include "clicksim/rng.hpp"

#include <cmath>

namespace clicksim {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x9e3779b9u};
  engine_.seed(seq);
}

// Polar form of Box-Muller: avoids the trig calls at the cost of rejecting
// about 21% of candidate points.
std::complex<double> RngStream::complex_normal() noexcept {
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  return {u * f, v * f};
}

double RngStream::normal() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const auto pair = complex_normal();
  cached_ = pair.imag();
  has_cached_ = true;
  return pair.real();
}

}  // namespace clicksim
