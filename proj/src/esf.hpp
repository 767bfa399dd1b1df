#pragma once

// Internal helpers: elementary symmetric functions by the prefix recurrence
// e_j <- e_j + x e_{j-1}, skipping up to two indices. All additions are of
// positive terms on the positive cone, so no cancellation occurs.

#include <algorithm>

namespace flowlab::detail {

inline void esf_upto(const double* v, int n, int skip_a, int skip_b, int kmax, double* out) {
  out[0] = 1.0;
  for (int j = 1; j <= kmax; ++j) out[j] = 0.0;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    if (i == skip_a || i == skip_b) continue;
    const double x = v[i];
    ++used;
    for (int j = std::min(used, kmax); j >= 1; --j) out[j] += x * out[j - 1];
  }
}

/// sigma_k of v with indices a, b removed (pass -1 for none).
inline double esf(const double* v, int n, int k, int skip_a = -1, int skip_b = -1) {
  if (k < 0) return 0.0;
  if (k == 0) return 1.0;
  const int remaining = n - (skip_a >= 0 ? 1 : 0) - (skip_b >= 0 && skip_b != skip_a ? 1 : 0);
  if (k > remaining) return 0.0;
  double buf[64];
  esf_upto(v, n, skip_a, skip_b, k, buf);
  return buf[k];
}

inline double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace flowlab::detail
