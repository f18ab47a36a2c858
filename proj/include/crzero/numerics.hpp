#pragma once

// Small numerical utilities shared across the library: compensated summation,
// Gauss-Legendre rules, deterministic RNG streams and a fixed-order parallel map.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace crzero {

using cplx = std::complex<double>;

// Kahan-Babuska compensated accumulator.
struct KahanSum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct KahanSumC {
  KahanSum re, im;
  void add(cplx x) {
    re.add(x.real());
    im.add(x.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
struct GaussRule {
  std::vector<double> x, w;
};

inline GaussRule gauss_legendre(int npts) {
  if (npts < 1) throw std::invalid_argument("gauss_legendre: npts < 1");
  GaussRule r;
  r.x.resize(npts);
  r.w.resize(npts);
  for (int i = 0; i < (npts + 1) / 2; ++i) {
    // Chebyshev-like initial guess.
    double t = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < npts; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      pp = npts * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    r.x[i] = -t;
    r.x[npts - 1 - i] = t;
    r.w[i] = r.w[npts - 1 - i] = 2.0 / ((1.0 - t * t) * pp * pp);
  }
  return r;
}

inline GaussRule gauss_legendre_ab(int npts, double a, double b) {
  GaussRule g = gauss_legendre(npts);
  for (int i = 0; i < npts; ++i) {
    g.w[i] *= 0.5 * (b - a);
    g.x[i] = 0.5 * (a + b) + 0.5 * (b - a) * g.x[i];
  }
  return g;
}

// --- deterministic RNG -----------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream: the sequence depends only on (seed, m_index, trial),
// never on how many draws earlier trials consumed.
struct Rng {
  std::uint64_t state;
  bool have_cached = false;
  double cached = 0.0;

  explicit Rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= 0x6a09e667f3bcc909ULL + a;
    splitmix64(s);
    s ^= 0xbb67ae8584caa73bULL + b;
    splitmix64(s);
    state = s;
  }

  std::uint64_t next_u64() { return splitmix64(state); }

  // uniform in (0,1)
  double next_double() {
    return ((next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal via Box-Muller (fixed algorithm for reproducibility)
  double next_gaussian() {
    if (have_cached) {
      have_cached = false;
      return cached;
    }
    double u1 = next_double();
    double u2 = next_double();
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * M_PI * u2;
    cached = rad * std::sin(ang);
    have_cached = true;
    return rad * std::cos(ang);
  }

  cplx next_cgaussian() { return {next_gaussian(), next_gaussian()}; }
};

// --- parallel map with deterministic combination ---------------------------

int worker_count();  // from CRZERO_WORKERS env var, else hardware_concurrency

// Runs fn(i) for i in [0,nitems); work is partitioned but results must be
// written to preallocated slots so the outcome is independent of scheduling.
inline void parallel_for(std::size_t nitems, const std::function<void(std::size_t)>& fn) {
  int nw = worker_count();
  if (nw <= 1 || nitems < 2) {
    for (std::size_t i = 0; i < nitems; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (nitems + nw - 1) / nw;
  for (int t = 0; t < nw; ++t) {
    std::size_t lo = t * chunk, hi = std::min(nitems, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// log(k!)
inline double log_factorial(long k) { return std::lgamma(double(k) + 1.0); }

}  // namespace crzero
