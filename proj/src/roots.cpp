#include "heunpull/roots.hpp"

#include <algorithm>

namespace heunpull::detail {

namespace {
using cplx = std::complex<long double>;

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}
}  // namespace

std::vector<cplx> numeric_roots(const std::vector<cplx>& coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n < 1) return {};
  std::vector<cplx> mon(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) mon[i] = coeffs[i] / coeffs.back();
  if (n == 1) return {-mon[0]};

  std::vector<cplx> deriv(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) deriv[static_cast<std::size_t>(i - 1)] = mon[static_cast<std::size_t>(i)] * static_cast<long double>(i);

  // Cauchy bound for the initial circle.
  long double bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(mon[static_cast<std::size_t>(i)]));
  bound += 1;
  std::vector<cplx> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    long double ang = 2.0L * 3.14159265358979323846L * k / n + 0.4L;
    z[static_cast<std::size_t>(k)] = std::polar(bound * 0.7L, ang);
  }
  for (int iter = 0; iter < 500; ++iter) {
    long double change = 0;
    for (int k = 0; k < n; ++k) {
      cplx zk = z[static_cast<std::size_t>(k)];
      cplx p = horner(mon, zk);
      if (std::abs(p) == 0) continue;
      cplx ratio = p / horner(deriv, zk);
      cplx sum = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) sum += 1.0L / (zk - z[static_cast<std::size_t>(j)]);
      cplx w = ratio / (1.0L - ratio * sum);
      z[static_cast<std::size_t>(k)] = zk - w;
      change = std::max(change, std::abs(w) / (1.0L + std::abs(zk)));
    }
    if (change < 1e-18L) break;
  }
  // A few Newton polishing steps.
  for (auto& zk : z) {
    for (int it = 0; it < 5; ++it) {
      cplx d = horner(deriv, zk);
      if (std::abs(d) == 0) break;
      zk -= horner(mon, zk) / d;
    }
  }
  return z;
}

}  // namespace heunpull::detail
