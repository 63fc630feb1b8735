#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's IET or surface code.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

// Convergent denominators q_0 = 1, q_1, ... of p/q in lowest terms (0 < p < q).
inline std::vector<long> convergent_denominators(long p, long q) {
  std::vector<long> out{1};
  long q_prev = 0, q_cur = 1;
  long num = p, den = q;
  // p/q = [0; a_1, a_2, ...]
  while (num != 0) {
    const long a = den / num;
    const long r = den % num;
    den = num;
    num = r;
    const long q_next = a * q_cur + q_prev;
    q_prev = q_cur;
    q_cur = q_next;
    out.push_back(q_cur);
  }
  return out;
}

// ||k p/q||, distance to the nearest integer, exact.
inline mpq_class circle_norm(long k, long p, long q) {
  const long r = static_cast<long>((static_cast<__int128>(k) * p) % q);
  mpq_class out(std::min(r, q - r), q);
  out.canonicalize();
  return out;
}

// Three-distance oracle for the rotation x -> x + p/q on [0,1): the shortest
// gap of {0, alpha, ..., n alpha} is ||q_k alpha|| for the largest convergent
// denominator q_k <= n, and 0 once n reaches the period q.
inline mpq_class rotation_min_gap(long p, long q, long n) {
  if (n >= q) return 0;
  long best = 1;
  for (long d : convergent_denominators(p, q)) {
    if (d <= n) best = d;
  }
  return circle_norm(best, p, q);
}

// Shortest nonzero lattice vector of Z-span{u, v} in the max norm, by brute
// force over a coefficient box. Adequate for the well-conditioned lattices used
// in tests.
inline double lattice_systole_maxnorm(std::complex<double> u, std::complex<double> v, int box = 60) {
  double best = INFINITY;
  for (int a = -box; a <= box; ++a) {
    for (int b = -box; b <= box; ++b) {
      if (a == 0 && b == 0) continue;
      const std::complex<double> w = static_cast<double>(a) * u + static_cast<double>(b) * v;
      best = std::min(best, std::max(std::abs(w.real()), std::abs(w.imag())));
    }
  }
  return best;
}

}  // namespace oracle
