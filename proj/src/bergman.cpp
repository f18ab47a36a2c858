#include "crzero/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crzero/detail_fd.hpp"

namespace crzero {

double ball_norm(int N, const std::vector<int>& alpha) {
  if (int(alpha.size()) != N) throw std::invalid_argument("alpha size mismatch");
  long total = 0;
  for (int aj : alpha) {
    if (aj < 0) throw std::invalid_argument("negative exponent");
    total += aj;
  }
  if (total <= 30) {
    double num = std::pow(M_PI, N);
    for (int aj : alpha)
      for (int k = 2; k <= aj; ++k) num *= k;
    double den = 1.0;
    for (long k = 2; k <= N + total; ++k) den *= k;
    return num / den;
  }
  double lg = N * std::log(M_PI);
  for (int aj : alpha) lg += log_factorial(aj);
  lg -= log_factorial(N + total);
  return std::exp(lg);
}

double bergman_kernel_closed(int N, const Eigen::VectorXcd& z) {
  double t = z.squaredNorm();
  if (t >= 1.0) throw std::invalid_argument("point outside the open ball");
  double nf = 1.0;
  for (int k = 2; k <= N; ++k) nf *= k;
  return nf / (std::pow(M_PI, N) * std::pow(1.0 - t, N + 1));
}

double boundary_kernel_level(int N) {
  double nf = 1.0;
  for (int k = 2; k <= N; ++k) nf *= k;
  return nf / (std::pow(2.0, N + 1) * std::pow(M_PI, N));
}

BergmanBasis bergman_basis(int N, int max_degree) {
  if (N != 2) throw std::invalid_argument("bergman basis implemented for N = 2");
  BergmanBasis b;
  b.N = N;
  for (int d = 0; d <= max_degree; ++d)
    for (int a = d; a >= 0; --a) {
      std::vector<int> alpha{a, d - a};
      b.norms.push_back(std::sqrt(ball_norm(N, alpha)));
      b.exponents.push_back(std::move(alpha));
    }
  return b;
}

cplx BergmanBasis::eval_element(int j, const Eigen::VectorXcd& z) const {
  cplx v = 1.0;
  for (int k = 0; k < N; ++k)
    for (int e = 0; e < exponents[j][k]; ++e) v *= z[k];
  return v / norms[j];
}

double partial_sum_Pk(const BergmanBasis& basis, int b, const Eigen::VectorXcd& z) {
  if (b < 1 || b > basis.dim()) throw std::invalid_argument("bad basis cut");
  return partial_sum_radial(basis, b, std::abs(z[0]), std::abs(z[1]));
}

double partial_sum_radial(const BergmanBasis& basis, int b, double r1, double r2) {
  // |g_j(z)|^2 depends only on the coordinate moduli
  KahanSum acc;
  double l1 = r1 > 0 ? std::log(r1) : 0.0, l2 = r2 > 0 ? std::log(r2) : 0.0;
  for (int j = 0; j < b; ++j) {
    int ea = basis.exponents[j][0], eb = basis.exponents[j][1];
    if ((ea > 0 && r1 <= 0.0) || (eb > 0 && r2 <= 0.0)) continue;
    acc.add(std::exp(2.0 * (ea * l1 + eb * l2 - std::log(basis.norms[j]))));
  }
  return acc.value();
}

BetaCertificate find_beta_k(const BallModel& model, const BergmanBasis& basis, int k,
                            double c0_target, int ngrid_r, int ngrid_s) {
  if (model.N != 2) throw std::invalid_argument("find_beta_k implemented for N = 2");
  BetaCertificate cert;
  cert.k = k;
  cert.c0_target = c0_target;
  // scan points: |r| in [1/(2k), 1/k], s = |z2|^2/|z|^2 in [0, 1]
  std::vector<double> rr1(ngrid_r * ngrid_s), rr2(ngrid_r * ngrid_s), rfac(ngrid_r * ngrid_s);
  for (int ir = 0; ir < ngrid_r; ++ir) {
    double rabs = 1.0 / (2.0 * k) + (1.0 / k - 1.0 / (2.0 * k)) * ir / (ngrid_r - 1.0);
    double R = std::sqrt(1.0 - 2.0 * rabs);
    for (int is = 0; is < ngrid_s; ++is) {
      double s = double(is) / (ngrid_s - 1.0);
      int idx = ir * ngrid_s + is;
      rr1[idx] = R * std::sqrt(1.0 - s);
      rr2[idx] = R * std::sqrt(s);
      rfac[idx] = std::pow(rabs, model.N + 1);
    }
  }
  // incremental scan over basis cuts: maintain P_b on the whole grid
  std::vector<double> P(rr1.size(), 0.0);
  for (int b = 1; b <= basis.dim(); ++b) {
    int j = b - 1;
    int ea = basis.exponents[j][0], eb = basis.exponents[j][1];
    double ln = std::log(basis.norms[j]);
    double inf = 1e300;
    for (std::size_t i = 0; i < P.size(); ++i) {
      double l1 = rr1[i] > 0 ? std::log(rr1[i]) : -1e60;
      double l2 = rr2[i] > 0 ? std::log(rr2[i]) : -1e60;
      double term = ((ea > 0 && rr1[i] <= 0) || (eb > 0 && rr2[i] <= 0))
                        ? 0.0
                        : std::exp(2.0 * (ea * l1 + eb * l2 - ln));
      P[i] += term;
      inf = std::min(inf, rfac[i] * P[i]);
    }
    if (inf >= c0_target) {
      cert.b_k = b;
      cert.achieved = inf;
      cert.found = true;
      return cert;
    }
  }
  return cert;
}

PeakSection peak_section(const BergmanBasis& basis, int b, const Eigen::VectorXcd& x0) {
  double P = partial_sum_Pk(basis, b, x0);
  if (P <= 1e-300) throw std::invalid_argument("kernel vanishes at the peak point");
  PeakSection h;
  h.sqrtP = std::sqrt(P);
  h.coeffs.resize(b);
  for (int j = 0; j < b; ++j)
    h.coeffs[j] = std::conj(basis.eval_element(j, x0)) / h.sqrtP;
  return h;
}

BallSection sample_ball_section(const BergmanBasis& basis, int b,
                                const SeededStream& stream) {
  if (b < 1 || b > basis.dim()) throw std::invalid_argument("bad basis cut");
  BallSection u;
  u.basis = &basis;
  u.b = b;
  u.coeffs = sample_unit_sphere(b, stream);
  return u;
}

cplx evaluate(const BallSection& u, const Eigen::VectorXcd& z) {
  KahanSumC acc;
  for (int j = 0; j < u.b; ++j) acc.add(u.coeffs[j] * u.basis->eval_element(j, z));
  return acc.value();
}

double bump_psi(double t) {
  // supported in (-1, -1/2), rescaled to peak value 1 at t = -3/4
  if (t <= -1.0 || t >= -0.5) return 0.0;
  return std::exp(16.0 - 1.0 / ((t + 1.0) * (-0.5 - t)));
}

double psi_mass() {
  static const double c0 = [] {
    GaussRule g = gauss_legendre_ab(400, -1.0, -0.5);
    KahanSum acc;
    for (int i = 0; i < 400; ++i) acc.add(g.w[i] * bump_psi(g.x[i]));
    return acc.value();
  }();
  return c0;
}

namespace {

// (1,1)-coefficients of Theta = 2ik r psi(kr) phi * del r wedge delbar r:
// A_{jk} = (ik/2) r psi(kr) phi(z) conj(z_j) z_k
std::array<cplx, 4> boundary_theta11(
    int k, const std::function<cplx(const Eigen::VectorXcd&)>& phi, cplx z1, cplx z2) {
  double r = 0.5 * (std::norm(z1) + std::norm(z2) - 1.0);
  double ps = bump_psi(k * r);
  std::array<cplx, 4> A{};
  if (ps == 0.0) return A;
  Eigen::VectorXcd z(2);
  z[0] = z1;
  z[1] = z2;
  cplx pref = cplx(0.0, 0.5 * k) * r * ps * phi(z);
  A[0] = pref * std::conj(z1) * z1;
  A[1] = pref * std::conj(z1) * z2;
  A[2] = pref * std::conj(z2) * z1;
  A[3] = pref * std::conj(z2) * z2;
  return A;
}

constexpr double kBoundaryOrientation = 1.0;  // fixed against the z1-axis oracle

}  // namespace

BoundaryField build_boundary_field(
    int k, const std::function<cplx(const Eigen::VectorXcd&)>& phi,
    const BoundaryFieldSpec& spec) {
  BoundaryField fld;
  fld.spec = spec;
  fld.k = k;
  GaussRule gs = gauss_legendre_ab(spec.ns, 0.0, 1.0);
  GaussRule gr = gauss_legendre_ab(spec.nr, -1.0 / k, -0.5 / k);
  fld.s_nodes = gs.x;
  fld.r_nodes = gr.x;
  fld.R.resize(spec.nr);
  for (int ir = 0; ir < spec.nr; ++ir) fld.R[ir] = std::sqrt(1.0 + 2.0 * gr.x[ir]);
  int nslab = spec.ns * spec.nr;
  int nphi = spec.nphi;
  fld.w.assign(std::size_t(nslab) * nphi * nphi, 0.0);
  double h = spec.fd_scale / k;
  double wphi = (2.0 * M_PI / nphi) * (2.0 * M_PI / nphi);

  std::vector<double> slab_total(nslab, 0.0), slab_re(nslab, 0.0);
  parallel_for(nslab, [&](std::size_t slab) {
    int is = int(slab) / spec.nr, ir = int(slab) % spec.nr;
    double s = gs.x[is], R = fld.R[ir];
    double rad1 = R * std::sqrt(1.0 - s), rad2 = R * std::sqrt(s);
    // flat volume: dV = R^2 dr (1/2) ds dphi1 dphi2
    double wt = gs.w[is] * gr.w[ir] * wphi * 0.5 * R * R;
    KahanSum tot, retot;
    for (int j1 = 0; j1 < nphi; ++j1)
      for (int j2 = 0; j2 < nphi; ++j2) {
        cplx z1 = std::polar(rad1, 2.0 * M_PI * j1 / nphi);
        cplx z2 = std::polar(rad2, 2.0 * M_PI * j2 / nphi);
        cplx G = detail::ddbar22(
            [&](cplx w1, cplx w2) { return boundary_theta11(k, phi, w1, w2); }, z1,
            z2, h);
        double wv = G.imag() * wt;
        fld.w[(slab * nphi + j1) * nphi + j2] = wv;
        tot.add(wv);
        retot.add(std::abs(G.real()) * wt);
      }
    slab_total[slab] = tot.value();
    slab_re[slab] = retot.value();
  });
  KahanSum tot, retot;
  for (int i = 0; i < nslab; ++i) {
    tot.add(slab_total[i]);
    retot.add(slab_re[i]);
  }
  fld.w_total = tot.value();
  fld.re_residual = retot.value();
  return fld;
}

namespace {

// sum over field nodes of w * g(log |u|) with g = identity (no clipping is
// needed on the shell: clip very defensively at -400)
double field_log_sum(const BallSection& u, const BoundaryField& fld) {
  int nphi = fld.spec.nphi;
  int nslab = fld.spec.ns * fld.spec.nr;
  Eigen::MatrixXcd E(nphi, nphi);
  for (int j = 0; j < nphi; ++j)
    for (int kk = 0; kk < nphi; ++kk)
      E(j, kk) = std::polar(1.0, 2.0 * M_PI * j * kk / nphi);
  std::vector<double> part(nslab, 0.0);
  parallel_for(nslab, [&](std::size_t slab) {
    int is = int(slab) / fld.spec.nr, ir = int(slab) % fld.spec.nr;
    double s = fld.s_nodes[is], R = fld.R[ir];
    double rad1 = R * std::sqrt(1.0 - s), rad2 = R * std::sqrt(s);
    double l1 = rad1 > 0 ? std::log(rad1) : -1e60;
    double l2 = rad2 > 0 ? std::log(rad2) : -1e60;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(nphi, nphi);
    for (int j = 0; j < u.b; ++j) {
      int ea = u.basis->exponents[j][0], eb = u.basis->exponents[j][1];
      cplx amp =
          u.coeffs[j] * std::exp(ea * l1 + eb * l2 - std::log(u.basis->norms[j]));
      M(ea % nphi, eb % nphi) += amp;
    }
    Eigen::MatrixXcd U = E * M * E;
    KahanSum acc;
    const double* wrow = &fld.w[std::size_t(slab) * nphi * nphi];
    for (int j1 = 0; j1 < nphi; ++j1)
      for (int j2 = 0; j2 < nphi; ++j2) {
        double av = std::abs(U(j1, j2));
        double lg = av > 0.0 ? std::log(av) : -400.0;
        acc.add(wrow[j1 * nphi + j2] * std::max(lg, -400.0));
      }
    part[slab] = acc.value();
  });
  KahanSum total;
  for (int i = 0; i < nslab; ++i) total.add(part[i]);
  return total.value();
}

}  // namespace

BoundaryPairing boundary_pair(const BallSection& u, const BoundaryField& fine,
                              const BoundaryField& coarse) {
  double vf = kBoundaryOrientation * (4.0 / M_PI) * field_log_sum(u, fine);
  double vc = kBoundaryOrientation * (4.0 / M_PI) * field_log_sum(u, coarse);
  return {vf, std::abs(vf - vc)};
}

double boundary_limit(const BallModel& model,
                      const std::function<cplx(const Eigen::VectorXcd&)>& phi,
                      const QuadratureGrid& sphere_grid) {
  // -((N+1) c0 / (2 pi)) * int_{S^{2N-1}} phi dsigma
  if (model.N != 2) throw std::invalid_argument("boundary_limit implemented for N = 2");
  KahanSumC acc;
  for (std::size_t i = 0; i < sphere_grid.size(); ++i)
    acc.add(sphere_grid.weights[i] * phi(sphere_grid.nodes[i]));
  return -(model.N + 1) * psi_mass() / (2.0 * M_PI) * acc.value().real();
}

std::vector<double> logP_on_field(const BergmanBasis& basis, int b,
                                  const BoundaryField& field) {
  int nslab = field.spec.ns * field.spec.nr;
  std::vector<double> out(nslab);
  parallel_for(nslab, [&](std::size_t slab) {
    int is = int(slab) / field.spec.nr, ir = int(slab) % field.spec.nr;
    double s = field.s_nodes[is], R = field.R[ir];
    out[slab] =
        std::log(partial_sum_radial(basis, b, R * std::sqrt(1.0 - s), R * std::sqrt(s)));
  });
  return out;
}

double log_kernel_correction(const BallSection& u, const BoundaryField& field,
                             const std::vector<double>& logP_slab) {
  // (i/pi) int (log|u| - (1/2) log P_b) ddbar Theta, all on the same field
  int nphi = field.spec.nphi;
  int nslab = field.spec.ns * field.spec.nr;
  double pairing = field_log_sum(u, field);
  KahanSum mean_term;
  for (int slab = 0; slab < nslab; ++slab) {
    KahanSum wsum;
    const double* wrow = &field.w[std::size_t(slab) * nphi * nphi];
    for (int i = 0; i < nphi * nphi; ++i) wsum.add(wrow[i]);
    mean_term.add(0.5 * logP_slab[slab] * wsum.value());
  }
  return kBoundaryOrientation * (4.0 / M_PI) * (pairing - mean_term.value());
}

}  // namespace crzero
