#include "crzero/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace crzero {

int worker_count() {
  static int cached = [] {
    if (const char* env = std::getenv("CRZERO_WORKERS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
  }();
  return cached;
}

WeightedAction WeightedAction::make(std::vector<int> weights) {
  if (weights.size() < 2) throw std::invalid_argument("need at least 2 weights");
  int g = 0;
  for (int p : weights) {
    if (p < 1) throw std::invalid_argument("weights must be positive");
    g = std::gcd(g, p);
  }
  if (g != 1) throw std::invalid_argument("weights must have overall gcd 1");
  WeightedAction a;
  a.n = int(weights.size()) - 1;
  a.weights = std::move(weights);
  return a;
}

bool WeightedAction::is_free() const {
  return std::all_of(weights.begin(), weights.end(), [](int p) { return p == 1; });
}

Eigen::VectorXcd WeightedAction::act(double theta, const Eigen::VectorXcd& z) const {
  Eigen::VectorXcd out(nvars());
  for (int j = 0; j < nvars(); ++j)
    out[j] = std::polar(1.0, weights[j] * theta) * z[j];
  return out;
}

Stratification stratify(const WeightedAction& a) {
  int nv = a.nvars();
  std::vector<std::pair<int, std::uint32_t>> gcds;  // (gcd over support, mask)
  for (std::uint32_t mask = 1; mask < (1u << nv); ++mask) {
    int g = 0;
    for (int j = 0; j < nv; ++j)
      if (mask & (1u << j)) g = std::gcd(g, a.weights[j]);
    gcds.push_back({g, mask});
  }
  Stratification s;
  for (auto& [g, mask] : gcds)
    if (std::find(s.periods.begin(), s.periods.end(), g) == s.periods.end())
      s.periods.push_back(g);
  std::sort(s.periods.begin(), s.periods.end());
  s.alpha = 1;
  for (int q : s.periods) s.alpha = std::lcm(s.alpha, long(q));
  for (int q : s.periods) {
    StratumDescriptor d;
    d.period = q;
    for (auto& [g, mask] : gcds)
      if (g == q) d.supports.push_back(mask);
    s.descriptors.push_back(std::move(d));
  }
  return s;
}

int period_of_point(const WeightedAction& a, const Eigen::VectorXcd& z, double tol) {
  int g = 0;
  for (int j = 0; j < a.nvars(); ++j)
    if (std::abs(z[j]) > tol) g = std::gcd(g, a.weights[j]);
  if (g == 0) throw std::invalid_argument("zero vector has no orbit");
  return g;
}

double dist_to_stratum(const WeightedAction& a, const Stratification& s,
                       const Eigen::VectorXcd& x, int period) {
  int nv = a.nvars();
  double best2 = 2.0;  // distance^2 to an empty-support limit is 2
  bool any = false;
  for (const auto& d : s.descriptors) {
    if (d.period < period) continue;
    for (std::uint32_t mask : d.supports) {
      any = true;
      double norm_s = 0.0;
      for (int j = 0; j < nv; ++j)
        if (mask & (1u << j)) norm_s += std::norm(x[j]);
      best2 = std::min(best2, 2.0 - 2.0 * std::sqrt(norm_s));
    }
  }
  if (!any) throw std::invalid_argument("no stratum with the requested period");
  return std::sqrt(std::max(0.0, best2));
}

double sphere_area(int n) {
  // area of S^{2n+1} with the round measure: 2 pi^{n+1} / n!
  double a = 2.0;
  for (int j = 0; j < n + 1; ++j) a *= M_PI;
  for (int j = 2; j <= n; ++j) a /= j;
  return a;
}

QuadratureGrid build_sphere_grid(int n, int level, std::size_t node_cap) {
  if (level < 1) throw std::invalid_argument("grid level must be >= 1");
  QuadratureGrid g;
  g.n = n;
  int ns = level + 1;
  int nphi = 4 * level + 2;
  if (n == 1) {
    // z1 = sqrt(1-s) e^{i phi1}, z2 = sqrt(s) e^{i phi2},
    // dsigma = (1/2) ds dphi1 dphi2
    std::size_t total = std::size_t(ns) * nphi * nphi;
    if (total > node_cap) throw std::runtime_error("sphere grid exceeds node cap");
    GaussRule gr = gauss_legendre_ab(ns, 0.0, 1.0);
    g.s_nodes = gr.x;
    g.s_wts = gr.w;
    g.nphi1 = g.nphi2 = nphi;
    g.order_tag = "s-gauss" + std::to_string(ns) + "_phi" + std::to_string(nphi) +
                  "x" + std::to_string(nphi);
    g.nodes.reserve(total);
    g.weights.reserve(total);
    double wphi = (2.0 * M_PI / nphi) * (2.0 * M_PI / nphi) * 0.5;
    for (int is = 0; is < ns; ++is) {
      double s = gr.x[is];
      double r1 = std::sqrt(1.0 - s), r2 = std::sqrt(s);
      for (int j1 = 0; j1 < nphi; ++j1)
        for (int j2 = 0; j2 < nphi; ++j2) {
          Eigen::VectorXcd z(2);
          z[0] = std::polar(r1, 2.0 * M_PI * j1 / nphi);
          z[1] = std::polar(r2, 2.0 * M_PI * j2 / nphi);
          g.nodes.push_back(std::move(z));
          g.weights.push_back(gr.w[is] * wphi);
        }
    }
  } else if (n == 2) {
    // s1 = u1, s2 = (1-u1) u2, s3 = 1 - s1 - s2; Jacobian (1-u1),
    // dsigma = (1/4) ds1 ds2 dphi1 dphi2 dphi3
    std::size_t total = std::size_t(ns) * ns * nphi * nphi * nphi;
    if (total > node_cap) throw std::runtime_error("sphere grid exceeds node cap");
    GaussRule gr = gauss_legendre_ab(ns, 0.0, 1.0);
    g.order_tag = "simplex-gauss" + std::to_string(ns) + "^2_phi" + std::to_string(nphi) + "^3";
    double wphi = std::pow(2.0 * M_PI / nphi, 3) * 0.25;
    for (int i1 = 0; i1 < ns; ++i1)
      for (int i2 = 0; i2 < ns; ++i2) {
        double u1 = gr.x[i1], u2 = gr.x[i2];
        double s1 = u1, s2 = (1.0 - u1) * u2, s3 = 1.0 - s1 - s2;
        double wr = gr.w[i1] * gr.w[i2] * (1.0 - u1);
        double r1 = std::sqrt(s1), r2 = std::sqrt(s2), r3 = std::sqrt(std::max(0.0, s3));
        for (int j1 = 0; j1 < nphi; ++j1)
          for (int j2 = 0; j2 < nphi; ++j2)
            for (int j3 = 0; j3 < nphi; ++j3) {
              Eigen::VectorXcd z(3);
              z[0] = std::polar(r1, 2.0 * M_PI * j1 / nphi);
              z[1] = std::polar(r2, 2.0 * M_PI * j2 / nphi);
              z[2] = std::polar(r3, 2.0 * M_PI * j3 / nphi);
              g.nodes.push_back(std::move(z));
              g.weights.push_back(wr * wphi);
            }
      }
  } else {
    throw std::invalid_argument("sphere grids implemented for n = 1, 2 only");
  }
  return g;
}

double QuadratureGrid::integrate(const std::function<double(const Eigen::VectorXcd&)>& f) const {
  KahanSum acc;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc.add(weights[i] * f(nodes[i]));
  return acc.value();
}

cplx QuadratureGrid::integrate_c(const std::function<cplx(const Eigen::VectorXcd&)>& f) const {
  KahanSumC acc;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc.add(weights[i] * f(nodes[i]));
  return acc.value();
}

void QuadratureGrid::to_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  out << "index";
  for (int j = 0; j < n + 1; ++j) out << ",re_z" << j + 1 << ",im_z" << j + 1;
  out << ",weight\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out << i;
    for (int j = 0; j < n + 1; ++j)
      out << "," << nodes[i][j].real() << "," << nodes[i][j].imag();
    out << "," << weights[i] << "\n";
  }
}

// --- contact data ----------------------------------------------------------

double ContactData::rho(const Eigen::VectorXcd& z) const {
  double r = 0.0;
  for (int j = 0; j < action.nvars(); ++j) r += action.weights[j] * std::norm(z[j]);
  return r;
}

Eigen::VectorXcd ContactData::omega0_coeff(const Eigen::VectorXcd& z) const {
  // eta_std = (i/2) sum (z_j dzbar_j - zbar_j dz_j); omega0 = -eta/rho.
  // (1,0) coefficient of omega0 on dz_j: (i/2) conj(z_j) / rho.
  double r = rho(z);
  Eigen::VectorXcd c(action.nvars());
  for (int j = 0; j < action.nvars(); ++j)
    c[j] = cplx(0.0, 0.5) * std::conj(z[j]) / r;
  return c;
}

Eigen::VectorXcd ContactData::reeb(const Eigen::VectorXcd& z) const {
  Eigen::VectorXcd t(action.nvars());
  for (int j = 0; j < action.nvars(); ++j)
    t[j] = cplx(0.0, double(action.weights[j])) * z[j];
  return t;
}

double ContactData::pair_real(const Eigen::VectorXcd& c10, const Eigen::VectorXcd& v) {
  return 2.0 * (c10.dot(v.conjugate())).real();  // 2 Re sum c_j v_j
}

Eigen::MatrixXcd ContactData::frame10(const Eigen::VectorXcd& z) const {
  int nv = action.nvars();
  // Gram-Schmidt on the coordinate basis against z / |z|
  Eigen::MatrixXcd frame(nv, nv - 1);
  Eigen::VectorXcd zn = z / z.norm();
  int col = 0;
  for (int j = 0; j < nv && col < nv - 1; ++j) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(nv);
    v[j] = 1.0;
    v -= zn * (zn.adjoint() * v);
    for (int c = 0; c < col; ++c) v -= frame.col(c) * (frame.col(c).adjoint() * v);
    double nrm = v.norm();
    if (nrm < 1e-8) continue;
    frame.col(col++) = v / nrm;
  }
  if (col != nv - 1) throw std::runtime_error("frame construction failed");
  return frame;
}

namespace {
// complexified evaluation of the real 1-form omega0 on a (1,0) or (0,1) vector:
// for U with dz(U) = a, dzbar(U) = 0:   omega(U) = sum c_j a_j
// for V with dz(V) = 0, dzbar(V) = b:   omega(V) = sum conj(c_j) b_j
cplx eval_10(const Eigen::VectorXcd& c, const Eigen::VectorXcd& a) {
  return (c.transpose() * a)(0);
}
cplx eval_01(const Eigen::VectorXcd& c, const Eigen::VectorXcd& b) {
  return (c.conjugate().transpose() * b)(0);
}
}  // namespace

Eigen::MatrixXcd ContactData::levi_fd(const Eigen::VectorXcd& z, double h) const {
  // L(U,V) = -(1/2i) d omega0 (U, conj(V)) with d omega0(A,B) = A(omega(B)) - B(omega(A))
  // for coordinate-constant extensions of A, B.  Directional derivatives along
  // U = a.dz use a Wirtinger step, along conj(V) = b-bar.dzbar the conjugate step.
  int nv = action.nvars();
  Eigen::MatrixXcd frame = frame10(z);
  Eigen::MatrixXcd L(nv - 1, nv - 1);
  for (int uc = 0; uc < nv - 1; ++uc)
    for (int vc = 0; vc < nv - 1; ++vc) {
      Eigen::VectorXcd a = frame.col(uc);
      Eigen::VectorXcd b = frame.col(vc);
      // U(omega(Vbar)): derivative of  z -> eval_01(c(z), conj(b))  along
      //   dz-displacement a; use complex step pair (real and imaginary parts)
      auto omega_vbar = [&](const Eigen::VectorXcd& p) {
        return eval_01(omega0_coeff(p), b.conjugate());
      };
      auto omega_u = [&](const Eigen::VectorXcd& p) {
        return eval_10(omega0_coeff(p), a);
      };
      // Wirtinger derivative along a: sum_j a_j d/dz_j = (1/2) sum a_j (d/dx_j - i d/dy_j)
      auto wirt_a = [&](const std::function<cplx(const Eigen::VectorXcd&)>& fn) {
        cplx dx = (fn(z + h * a) - fn(z - h * a)) / (2.0 * h);
        cplx dy = (fn(z + h * cplx(0, 1) * a) - fn(z - h * cplx(0, 1) * a)) / (2.0 * h);
        return 0.5 * (dx - cplx(0, 1) * dy);
      };
      // conjugate Wirtinger along b-bar: sum_j conj(b_j) d/dzbar_j
      auto wirt_bbar = [&](const std::function<cplx(const Eigen::VectorXcd&)>& fn) {
        cplx dx = (fn(z + h * b) - fn(z - h * b)) / (2.0 * h);
        cplx dy = (fn(z + h * cplx(0, 1) * b) - fn(z - h * cplx(0, 1) * b)) / (2.0 * h);
        return 0.5 * (dx + cplx(0, 1) * dy);
      };
      cplx domega = wirt_a(omega_vbar) - wirt_bbar(omega_u);
      L(uc, vc) = -domega / cplx(0.0, 2.0);
    }
  return L;
}

Eigen::MatrixXcd ContactData::levi_exact(const Eigen::VectorXcd& z) const {
  int nv = action.nvars();
  return Eigen::MatrixXcd::Identity(nv - 1, nv - 1) / (2.0 * rho(z));
}

cplx levi_pairing_integral(const WeightedAction& a, const QuadratureGrid& grid,
                           const std::function<cplx(const Eigen::VectorXcd&)>& f) {
  if (a.n != 1) throw std::invalid_argument("levi pairing implemented for n = 1");
  ContactData cd{a};
  KahanSumC acc;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double r = cd.rho(grid.nodes[i]);
    acc.add(grid.weights[i] * f(grid.nodes[i]) / (r * r));
  }
  return acc.value() / M_PI;
}

}  // namespace crzero
