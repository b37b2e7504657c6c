#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace qvsum::testing {

double direct_variance_trace(const Instance& inst, const std::vector<double>& z) {
  std::vector<double> vs(inst.dim, 0.0);
  double diag = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    double norm2 = 0.0;
    for (std::size_t k = 0; k < inst.dim; ++k) {
      const double xik = inst.x[i * inst.dim + k];
      norm2 += xik * xik;
      vs[k] += z[i] * xik;
    }
    diag += z[i] * z[i] * norm2;
  }
  double vs2 = 0.0;
  for (double v : vs) vs2 += v * v;
  return diag - vs2;
}

double direct_loss(const Instance& inst, double lambda1, double lambda2, const std::vector<double>& z) {
  double rel = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) rel += z[i] * z[i] * inst.s[i] * inst.s[i];
  return lambda1 * direct_variance_trace(inst, z) - lambda2 * rel;
}

std::vector<double> bits_to_vector(std::uint64_t bits, std::size_t n) {
  std::vector<double> z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i] = ((bits >> i) & 1u) ? 1.0 : 0.0;
  return z;
}

std::vector<double> enumerate_binary_losses(const Instance& inst, double lambda1, double lambda2) {
  const std::uint64_t total = std::uint64_t{1} << inst.n;
  std::vector<double> out(total);
  for (std::uint64_t b = 0; b < total; ++b) out[b] = direct_loss(inst, lambda1, lambda2, bits_to_vector(b, inst.n));
  return out;
}

double brute_force_matching(const std::vector<std::vector<double>>& w) {
  if (w.empty() || w.front().empty()) return 0.0;
  const std::size_t rows = w.size();
  const std::size_t cols = w.front().size();
  std::vector<bool> used(cols, false);
  double best = 0.0;
  // Each row either stays unmatched or takes a free column.
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double acc) {
    if (i == rows) {
      best = std::max(best, acc);
      return;
    }
    rec(i + 1, acc);
    for (std::size_t j = 0; j < cols; ++j) {
      if (used[j]) continue;
      used[j] = true;
      rec(i + 1, acc + w[i][j]);
      used[j] = false;
    }
  };
  rec(0, 0.0);
  return best;
}

}  // namespace qvsum::testing
