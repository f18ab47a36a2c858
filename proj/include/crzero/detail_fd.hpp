#pragma once

// Shared stencil: given the four (1,1)-coefficients A11, A12, A21, A22 of a
// 2-form on C^2 as a function of (z1, z2), compute the coefficient G of
// ddbar(form) on dz1 ^ dzbar1 ^ dz2 ^ dzbar2 by centered finite differences,
//   G = d_{z2} d_{zbar2} A11 + d_{z1} d_{zbar1} A22
//     - d_{z2} d_{zbar1} A12 - d_{z1} d_{zbar2} A21.

#include <array>
#include <complex>

namespace crzero::detail {

template <class F>
std::complex<double> ddbar22(F&& coeffs, std::complex<double> z1,
                             std::complex<double> z2, double h) {
  using cplx = std::complex<double>;
  auto at = [&](int dir_a, double ta, int dir_b, double tb) {
    cplx w1 = z1, w2 = z2;
    auto bump = [&](int dir, double t) {
      if (dir == 0) w1 += t;
      if (dir == 1) w1 += cplx(0, t);
      if (dir == 2) w2 += t;
      if (dir == 3) w2 += cplx(0, t);
    };
    if (dir_a >= 0) bump(dir_a, ta);
    if (dir_b >= 0) bump(dir_b, tb);
    return coeffs(w1, w2);
  };
  std::array<cplx, 4> center = at(-1, 0, -1, 0);
  std::array<std::array<cplx, 4>, 4> plus, minus;
  for (int d = 0; d < 4; ++d) {
    plus[d] = at(d, h, -1, 0);
    minus[d] = at(d, -h, -1, 0);
  }
  cplx D2[4][4][4];
  for (int d = 0; d < 4; ++d)
    for (int k = 0; k < 4; ++k)
      D2[d][d][k] = (plus[d][k] - 2.0 * center[k] + minus[d][k]) / (h * h);
  for (int da = 0; da < 4; ++da)
    for (int db = da + 1; db < 4; ++db) {
      auto fpp = at(da, h, db, h), fpm = at(da, h, db, -h);
      auto fmp = at(da, -h, db, h), fmm = at(da, -h, db, -h);
      for (int k = 0; k < 4; ++k) {
        cplx v = (fpp[k] - fpm[k] - fmp[k] + fmm[k]) / (4.0 * h * h);
        D2[da][db][k] = v;
        D2[db][da][k] = v;
      }
    }
  auto W = [&](int l, int m, int k) {
    int xl = 2 * (l - 1), yl = xl + 1, xm = 2 * (m - 1), ym = xm + 1;
    return 0.25 * (D2[xl][xm][k] + D2[yl][ym][k] +
                   cplx(0, 1) * (D2[xl][ym][k] - D2[yl][xm][k]));
  };
  return W(2, 2, 0) + W(1, 1, 3) - W(2, 1, 1) - W(1, 2, 2);
}

}  // namespace crzero::detail
