#include "crzero/currents.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "crzero/detail_fd.hpp"

namespace crzero {

double bump_chi(double t) {
  // integral of exp(1 - 1/(1-t^2)) over (-1,1), computed once
  static const double inv_mass = [] {
    GaussRule g = gauss_legendre_ab(200, -1.0, 1.0);
    KahanSum acc;
    for (int i = 0; i < 200; ++i)
      acc.add(g.w[i] * std::exp(1.0 - 1.0 / (1.0 - g.x[i] * g.x[i])));
    return 1.0 / acc.value();
  }();
  if (std::abs(t) >= 1.0) return 0.0;
  return inv_mass * std::exp(1.0 - 1.0 / (1.0 - t * t));
}

Eigen::VectorXcd cone_point(const WeightedAction& a, const Eigen::VectorXcd& x,
                            double eta) {
  Eigen::VectorXcd z(a.nvars());
  for (int j = 0; j < a.nvars(); ++j) z[j] = std::exp(-a.weights[j] * eta) * x[j];
  return z;
}

double limit_constant(int n, long alpha, const std::vector<int>& k_list) {
  if (k_list.empty() || k_list.front() != 1)
    throw std::invalid_argument("k_list must start with 1");
  double num = 0, den = 0;
  for (int k : k_list) {
    num += std::pow(double(k), n + 1);
    den += std::pow(double(k), n);
  }
  return double(alpha) * num / den;
}

// --- exact evaluator -------------------------------------------------------

namespace {

cplx orbit_integral(const WeightedAction& a,
                    const std::function<cplx(const Eigen::VectorXcd&)>& f,
                    const Eigen::VectorXcd& x, double period, int ntheta) {
  KahanSumC acc;
  for (int k = 0; k < ntheta; ++k)
    acc.add(f(a.act(period * k / ntheta, x)));
  return acc.value() * (period / ntheta);
}

// positive lambda with lambda^{2p1} |r|^2 + lambda^{2p2} = 1
double orbit_scale(int p1, int p2, double rabs) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double v = std::pow(mid, 2 * p1) * rabs * rabs + std::pow(mid, 2 * p2);
    (v < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PairingResult pair_roots(const ExtendedSection& ext, const TestFormPackage& pkg,
                         double cluster_rtol, int ntheta) {
  const WeightedAction& a = ext.action;
  if (a.n != 1) throw std::invalid_argument("pair_roots needs n = 1");
  if (ext.u.components.size() != 1)
    throw std::invalid_argument("pair_roots handles single-component sections");
  const auto& comp = ext.u.components.front();
  const FourierBasis& basis = *comp.basis;
  int m = basis.m;
  int p1 = a.weights[0], p2 = a.weights[1];

  // dehomogenize at z2 = 1: q(w) = sum_a c_a w^a with w = z1
  int atop = 0;
  for (const auto& al : basis.exponents) atop = std::max(atop, al[0]);
  std::vector<cplx> c(atop + 1, 0.0);
  for (int j = 0; j < basis.dim(); ++j)
    c[basis.exponents[j][0]] += comp.coeffs[j] / basis.norms[j];
  double maxabs = 0;
  for (const auto& v : c) maxabs = std::max(maxabs, std::abs(v));
  if (maxabs == 0) throw std::invalid_argument("zero section has no zero divisor");

  PairingResult res;
  res.evaluator = "roots";
  double strip_tol = 1e-13 * maxabs;
  int amin = 0, amax = atop;
  while (amin <= amax && std::abs(c[amin]) <= strip_tol) {
    if (std::abs(c[amin]) > 0) res.ill_conditioned = true;
    ++amin;
  }
  while (amax >= amin && std::abs(c[amax]) <= strip_tol) {
    if (std::abs(c[amax]) > 0) res.ill_conditioned = true;
    --amax;
  }

  struct Orbit {
    Eigen::VectorXcd x;
    double period;
    double mult;
  };
  std::vector<Orbit> orbits;
  auto axis_point = [&](int which) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(2);
    x[which] = 1.0;
    return x;
  };
  if (amin > 0)  // divisor along {z1 = 0}
    orbits.push_back({axis_point(1), 2.0 * M_PI / p2, double(amin)});
  int bmin = (m - p1 * amax) / p2;  // z2-order of the top surviving monomial
  if (bmin > 0)  // divisor along {z2 = 0}
    orbits.push_back({axis_point(0), 2.0 * M_PI / p1, double(bmin)});

  int deg = amax - amin;
  if (deg > 0) {
    Eigen::MatrixXcd comp_mat = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp_mat(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp_mat(i, deg - 1) = -c[amin + i] / c[amax];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp_mat, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    // group roots into weighted orbits: r and r' lie on the same orbit exactly
    // when r^{p2} = r'^{p2} (weights are coprime for n = 1)
    struct Cluster {
      cplx y;
      cplx rep_root;
      int count = 0;
    };
    std::vector<Cluster> clusters;
    for (int i = 0; i < deg; ++i) {
      cplx r = es.eigenvalues()[i];
      cplx y = std::pow(r, p2);
      bool placed = false;
      for (auto& cl : clusters) {
        double scale = std::max({std::abs(cl.y), std::abs(y), 1e-280});
        if (std::abs(cl.y - y) <= cluster_rtol * scale) {
          ++cl.count;
          placed = true;
          break;
        }
      }
      if (!placed) clusters.push_back({y, r, 1});
    }
    for (const auto& cl : clusters) {
      if (cl.count % p2 != 0) res.ill_conditioned = true;
      double lam = orbit_scale(p1, p2, std::abs(cl.rep_root));
      Eigen::VectorXcd x(2);
      x[0] = std::pow(lam, p1) * cl.rep_root;
      x[1] = std::pow(lam, p2);
      orbits.push_back({x, 2.0 * M_PI, double(cl.count) / p2});
    }
  }

  KahanSumC val, val2;
  for (const auto& orb : orbits) {
    val.add(orb.mult * orbit_integral(a, pkg.f, orb.x, orb.period, ntheta));
    val2.add(orb.mult * orbit_integral(a, pkg.f, orb.x, orb.period, 2 * ntheta));
  }
  res.value = val2.value();
  res.err_estimate = std::abs(val2.value() - val.value());
  return res;
}

// --- weak evaluator --------------------------------------------------------

namespace {

// (1,1)-coefficients A_{jk} of f * omega0 wedge (1/eps) chi(eta/eps) deta,
// pushed to flat coordinates; A_{jk} = -2i g d_j conj(d_k) with
// d_j = -(1/2) e^{2 p_j eta} conj(z_j) / rho-tilde and g = f(x) chi(eta/eps)/eps.
struct ThetaCoeffs {
  std::array<cplx, 4> A{};  // order A11, A12, A21, A22
  double eta = 0;
};

ThetaCoeffs theta11(const WeightedAction& a, const TestFormPackage& pkg, double eps,
                    cplx z1, cplx z2, double eta_hint) {
  int p1 = a.weights[0], p2 = a.weights[1];
  double n1 = std::norm(z1), n2 = std::norm(z2);
  double eta = eta_hint;
  for (int it = 0; it < 60; ++it) {
    double e = std::exp(2.0 * eta);
    double E1 = std::pow(e, p1), E2 = std::pow(e, p2);
    double g = E1 * n1 + E2 * n2 - 1.0;
    double gp = 2.0 * (p1 * E1 * n1 + p2 * E2 * n2);
    double step = g / gp;
    eta -= step;
    if (std::abs(step) < 1e-16) break;
  }
  ThetaCoeffs out;
  out.eta = eta;
  double tau = eta / eps;
  if (std::abs(tau) >= 1.0) return out;  // outside the support of chi
  double e = std::exp(2.0 * eta);
  double E1 = std::pow(e, p1), E2 = std::pow(e, p2);
  double rho = p1 * E1 * n1 + p2 * E2 * n2;
  Eigen::VectorXcd x(2);
  x[0] = std::exp(p1 * eta) * z1;
  x[1] = std::exp(p2 * eta) * z2;
  cplx g = pkg.f(x) * bump_chi(tau) / eps;
  cplx d1 = -0.5 * E1 * std::conj(z1) / rho;
  cplx d2 = -0.5 * E2 * std::conj(z2) / rho;
  cplx pref = cplx(0.0, -2.0) * g;
  out.A[0] = pref * d1 * std::conj(d1);
  out.A[1] = pref * d1 * std::conj(d2);
  out.A[2] = pref * d2 * std::conj(d1);
  out.A[3] = pref * d2 * std::conj(d2);
  return out;
}

// orientation factor fixed once against pair_roots (z1^m vs f >= 0 positive)
constexpr double kOrientation = -1.0;

}  // namespace

ConeField build_cone_field(const WeightedAction& a, const TestFormPackage& pkg,
                           int m_base, const ConeFieldSpec& spec) {
  if (a.n != 1) throw std::invalid_argument("weak evaluator needs n = 1");
  ConeField fld;
  fld.spec = spec;
  fld.action = a;
  fld.m_base = m_base;
  fld.eps = pkg.eps(m_base);
  int p1 = a.weights[0], p2 = a.weights[1];
  GaussRule gs = gauss_legendre_ab(spec.ns, 0.0, 1.0);
  GaussRule ge = gauss_legendre_ab(spec.neta, -fld.eps, fld.eps);
  fld.s_nodes = gs.x;
  fld.eta_nodes = ge.x;
  int nslab = spec.ns * spec.neta;
  int nphi = spec.nphi;
  fld.r1.resize(nslab);
  fld.r2.resize(nslab);
  fld.w.assign(std::size_t(nslab) * nphi * nphi, 0.0);
  double h = spec.fd_scale * fld.eps;
  double wphi = (2.0 * M_PI / nphi) * (2.0 * M_PI / nphi);

  std::vector<double> slab_total(nslab, 0.0), slab_re(nslab, 0.0);
  parallel_for(nslab, [&](std::size_t slab) {
    int is = int(slab) / spec.neta, ie = int(slab) % spec.neta;
    double s = gs.x[is], eta = ge.x[ie];
    fld.r1[slab] = std::exp(-p1 * eta) * std::sqrt(1.0 - s);
    fld.r2[slab] = std::exp(-p2 * eta) * std::sqrt(s);
    // jacobian of flat volume against ds dphi1 dphi2 deta
    double jac = 0.5 * std::exp(-2.0 * (p1 + p2) * eta) *
                 (p1 * (1.0 - s) + p2 * s);
    double wt = gs.w[is] * ge.w[ie] * wphi * jac;
    KahanSum tot, retot;
    for (int j1 = 0; j1 < nphi; ++j1)
      for (int j2 = 0; j2 < nphi; ++j2) {
        cplx z1 = std::polar(fld.r1[slab], 2.0 * M_PI * j1 / nphi);
        cplx z2 = std::polar(fld.r2[slab], 2.0 * M_PI * j2 / nphi);
        cplx G = detail::ddbar22(
            [&](cplx w1, cplx w2) { return theta11(a, pkg, fld.eps, w1, w2, eta).A; },
            z1, z2, h);
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

// sum over field nodes of w * clip(log |U|), for two clip levels at once
std::pair<double, double> clipped_log_sums(const CRSection& u, const ConeField& fld,
                                           double L1, double L2) {
  int nphi = fld.spec.nphi;
  int nslab = fld.spec.ns * fld.spec.neta;
  Eigen::MatrixXcd E(nphi, nphi);
  for (int j = 0; j < nphi; ++j)
    for (int k = 0; k < nphi; ++k)
      E(j, k) = std::polar(1.0, 2.0 * M_PI * j * k / nphi);
  std::vector<double> part1(nslab, 0.0), part2(nslab, 0.0);
  parallel_for(nslab, [&](std::size_t slab) {
    double lr1 = std::log(fld.r1[slab]), lr2 = std::log(fld.r2[slab]);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(nphi, nphi);
    for (const auto& comp : u.components)
      for (int j = 0; j < comp.basis->dim(); ++j) {
        int ea = comp.basis->exponents[j][0], eb = comp.basis->exponents[j][1];
        cplx amp = comp.coeffs[j] *
                   std::exp(ea * lr1 + eb * lr2 - std::log(comp.basis->norms[j]));
        M(ea % nphi, eb % nphi) += amp;  // exact on the uniform phase grid
      }
    Eigen::MatrixXcd U = E * M * E;
    KahanSum acc1, acc2;
    const double* wrow = &fld.w[std::size_t(slab) * nphi * nphi];
    for (int j1 = 0; j1 < nphi; ++j1)
      for (int j2 = 0; j2 < nphi; ++j2) {
        double av = std::abs(U(j1, j2));
        double lg = av > 0.0 ? std::log(av) : -1e300;
        double wv = wrow[j1 * nphi + j2];
        acc1.add(wv * std::max(lg, -L1));
        acc2.add(wv * std::max(lg, -L2));
      }
    part1[slab] = acc1.value();
    part2[slab] = acc2.value();
  });
  KahanSum s1, s2;
  for (int i = 0; i < nslab; ++i) {
    s1.add(part1[i]);
    s2.add(part2[i]);
  }
  return {s1.value(), s2.value()};
}

}  // namespace

double pair_weak_value(const CRSection& u, const ConeField& field, double clip_L) {
  auto [s1, s2] = clipped_log_sums(u, field, clip_L, clip_L + 10.0);
  (void)s2;
  return kOrientation * (4.0 / M_PI) * s1;
}

PairingResult pair_weak(const CRSection& u, const ConeField& fine,
                        const ConeField& coarse) {
  double L = log_clip(fine.m_base);
  auto [f1, f2] = clipped_log_sums(u, fine, L, L + 10.0);
  auto [c1, c2] = clipped_log_sums(u, coarse, L, L + 10.0);
  (void)c2;
  PairingResult res;
  res.evaluator = "weak";
  res.value = kOrientation * (4.0 / M_PI) * f1;
  res.err_estimate =
      (4.0 / M_PI) * (std::abs(f1 - c1) + std::abs(f2 - f1));
  return res;
}

cplx expected_pairing(const WeightedAction& a, const Stratification& strat,
                      const std::vector<int>& k_list, int m,
                      const TestFormPackage& pkg, const QuadratureGrid& grid) {
  if (a.n != 1) throw std::invalid_argument("expected_pairing needs n = 1");
  if (grid.s_nodes.empty()) throw std::invalid_argument("need a product grid");
  // radial profiles of the summed kernels
  std::size_t ns = grid.s_nodes.size();
  std::vector<double> num(ns, 0.0), den(ns, 0.0);
  for (int k : k_list) {
    int weight = int(k * strat.alpha * m);
    auto basis = fourier_basis(a, weight);
    std::vector<double> sv = szego_radial(*basis, grid.s_nodes);
    for (std::size_t i = 0; i < ns; ++i) {
      num[i] += k * strat.alpha * sv[i];
      den[i] += sv[i];
    }
  }
  ContactData cd{a};
  KahanSumC acc;
  std::size_t idx = 0;
  for (std::size_t is = 0; is < ns; ++is) {
    double ratio = num[is] / den[is];
    for (int j = 0; j < grid.nphi1 * grid.nphi2; ++j, ++idx) {
      double r = cd.rho(grid.nodes[idx]);
      acc.add(grid.weights[idx] * ratio * pkg.f(grid.nodes[idx]) / (r * r));
    }
  }
  return acc.value() / M_PI;
}

}  // namespace crzero
