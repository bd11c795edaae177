#ifndef MOMENT_BOUNDS_TESTS_FD_ORACLE_HPP
#define MOMENT_BOUNDS_TESTS_FD_ORACLE_HPP

// Double-precision finite-difference reference for the spiked oscillator,
// independent of the moment machinery. Three-point Laplacian on (0, L) with
// Dirichlet ends, eigenvalue k found by Sturm-count bisection, and one
// Richardson step between grids h and h/2.

#include <cmath>
#include <vector>

namespace fd_oracle {

// Number of eigenvalues of the tridiagonal (d, off) below x.
inline int sturm_count(const std::vector<double>& d, double off, double x) {
  int count = 0;
  double q = 1;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double prev = i ? off * off / q : 0;
    q = d[i] - x - prev;
    if (q == 0) q = -1e-300;
    if (q < 0) ++count;
  }
  return count;
}

inline double level(double b, double gamma, int k, int n, double L) {
  const double h = L / (n + 1);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) {
    double x = (i + 1) * h;
    d[i] = 2 / (h * h) + gamma / (x * x) + (x - b) * (x - b);
  }
  const double off = -1 / (h * h);
  double lo = 0, hi = 4 / (h * h) + gamma / (h * h) + (L + b) * (L + b);
  for (int it = 0; it < 200; ++it) {
    double mid = (lo + hi) / 2;
    if (sturm_count(d, off, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return (lo + hi) / 4;  // eigenvalue of -d2 + V is 2E
}

// Energy E_k of -Psi'' + (gamma/chi^2 + (chi-b)^2) Psi = 2 E Psi.
inline double spiked_energy(double b, int k = 0, double gamma = 0.75, int n = 20000) {
  const double L = b + 12;
  double coarse = level(b, gamma, k, n, L);
  double fine = level(b, gamma, k, 2 * n + 1, L);
  return fine + (fine - coarse) / 3;
}

}  // namespace fd_oracle

#endif
