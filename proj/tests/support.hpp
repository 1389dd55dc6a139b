#pragma once

// Shared fixtures and independent oracles for the test binaries. Nothing in
// here calls into the code paths it is used to check.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/QR>

#include "clicksim/linalg.hpp"
#include "clicksim/rng.hpp"

namespace clicksim::testing {

using cd = std::complex<double>;

inline MatrixXc two_channel_covariance() {
  MatrixXc b(2, 2);
  b << cd(10, 0), cd(5, 2),
       cd(5, -2), cd(9, 0);
  return b;
}

inline MatrixXc two_channel_factor() {
  MatrixXc s(2, 2);
  s << cd(1, 0), cd(0, 3),
       cd(2, -2), cd(0, 1);
  return s;
}

inline MatrixXc four_channel_covariance() {
  MatrixXc b(4, 4);
  b << cd(14, 0),  cd(4, -2), cd(-2, -5), cd(7, -4),
       cd(4, 2),   cd(12, 0), cd(-7, -1), cd(2, 0),
       cd(-2, 5),  cd(-7, 1), cd(8, 0),   cd(1, 4),
       cd(7, 4),   cd(2, 0),  cd(1, -4),  cd(6, 0);
  return b;
}

inline MatrixXc four_channel_factor() {
  MatrixXc s(4, 4);
  s << cd(2, -2), cd(0, 1),  cd(1, 0), cd(2, 0),
       cd(1, 0),  cd(0, 3),  cd(1, 0), cd(-1, 0),
       cd(0, 1),  cd(0, -2), cd(0, 1), cd(1, 1),
       cd(2, 0),  cd(0, 0),  cd(1, 0), cd(1, 0);
  return s;
}

/// (C C*)_ij = sum_k c_ik conj(c_jk), by explicit loops.
inline MatrixXc multiply_out(const MatrixXc& c) {
  const auto m = c.rows();
  MatrixXc out(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      cd s = 0;
      for (Eigen::Index k = 0; k < c.cols(); ++k) s += c(i, k) * std::conj(c(j, k));
      out(i, j) = s;
    }
  }
  return out;
}

inline double max_abs_diff(const MatrixXc& a, const MatrixXc& b) {
  double worst = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

/// Haar-distributed unitary from the QR of a complex Ginibre matrix with the
/// phases of R's diagonal folded back into Q.
inline MatrixXc random_unitary(Eigen::Index m, RngStream& rng) {
  MatrixXc g(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<MatrixXc> qr(g);
  MatrixXc q = qr.householderQ();
  const MatrixXc r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < m; ++j) {
    const cd d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

/// Random Hermitian PSD matrix G G* with G complex Gaussian.
inline MatrixXc random_covariance(Eigen::Index m, RngStream& rng) {
  MatrixXc g(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) g(i, j) = rng.complex_normal();
  MatrixXc b = multiply_out(g);
  // exact Hermitian symmetry
  for (Eigen::Index i = 0; i < m; ++i) {
    b(i, i) = b(i, i).real();
    for (Eigen::Index j = 0; j < i; ++j) b(j, i) = std::conj(b(i, j));
  }
  return b;
}

/// Maximum one-to-one matching between two click lists where a pair needs
/// |t1 - t2| <= tau, via Kuhn's augmenting paths on the full bipartite graph.
inline std::uint64_t max_matching(const std::vector<std::uint64_t>& first,
                                  const std::vector<std::uint64_t>& second, std::uint64_t tau) {
  const auto close = [&](std::size_t a, std::size_t b) {
    const auto x = first[a];
    const auto y = second[b];
    return (x > y ? x - y : y - x) <= tau;
  };
  std::vector<int> owner(second.size(), -1);
  std::function<bool(std::size_t, std::vector<char>&)> augment =
      [&](std::size_t a, std::vector<char>& seen) {
        for (std::size_t b = 0; b < second.size(); ++b) {
          if (!close(a, b) || seen[b]) continue;
          seen[b] = 1;
          if (owner[b] < 0 || augment(static_cast<std::size_t>(owner[b]), seen)) {
            owner[b] = static_cast<int>(a);
            return true;
          }
        }
        return false;
      };
  std::uint64_t size = 0;
  for (std::size_t a = 0; a < first.size(); ++a) {
    std::vector<char> seen(second.size(), 0);
    if (augment(a, seen)) ++size;
  }
  return size;
}

/// Sorted strictly increasing random click steps in [0, horizon).
inline std::vector<std::uint64_t> random_clicks(RngStream& rng, std::size_t max_count,
                                                std::uint64_t horizon) {
  const auto count = static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_count + 1)) %
                     (max_count + 1);
  std::vector<char> used(horizon, 0);
  std::vector<std::uint64_t> out;
  while (out.size() < count && out.size() < horizon) {
    const auto t = static_cast<std::uint64_t>(rng.uniform() * static_cast<double>(horizon)) % horizon;
    if (!used[t]) {
      used[t] = 1;
      out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace clicksim::testing
