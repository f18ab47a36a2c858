#include "crzero/szego.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace crzero {

double szego_at(const FourierBasis& b, const Eigen::VectorXcd& z) {
  KahanSum acc;
  for (int j = 0; j < b.dim(); ++j) acc.add(std::norm(b.eval_element(j, z)));
  return acc.value();
}

std::vector<double> szego_radial(const FourierBasis& b, const std::vector<double>& s) {
  if (b.action.n != 1) throw std::invalid_argument("szego_radial needs n = 1");
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    // |z^alpha|^2 = (1-s)^a s^b; work in logs to keep large m stable
    KahanSum acc;
    double ls0 = s[i] < 1.0 ? std::log1p(-s[i]) : 0.0;
    double ls1 = s[i] > 0.0 ? std::log(s[i]) : 0.0;
    for (int j = 0; j < b.dim(); ++j) {
      int a = b.exponents[j][0], bb = b.exponents[j][1];
      if ((a > 0 && s[i] >= 1.0) || (bb > 0 && s[i] <= 0.0)) continue;  // exact zero
      acc.add(std::exp(a * ls0 + bb * ls1 - 2.0 * std::log(b.norms[j])));
    }
    out[i] = acc.value();
  }
  return out;
}

EvalPoints make_eval_points(const WeightedAction& a, int nradial) {
  if (a.n != 1)
    throw std::invalid_argument("kernel scan points implemented for n = 1");
  if (nradial < 3) throw std::invalid_argument("need at least 3 radial points");
  EvalPoints ep;
  for (int i = 0; i < nradial; ++i) {
    double s = double(i) / (nradial - 1);  // endpoints hit the strata exactly
    ep.s.push_back(s);
    Eigen::VectorXcd z(2);
    z[0] = std::sqrt(1.0 - s);
    z[1] = std::sqrt(s);
    ep.pts.push_back(std::move(z));
  }
  return ep;
}

SzegoProfile szego_function(const WeightedAction& a, int m, const EvalPoints& pts) {
  SzegoProfile p;
  p.m = m;
  auto basis = fourier_basis(a, m);
  if (a.n == 1 && !pts.s.empty()) {
    p.values = szego_radial(*basis, pts.s);
  } else {
    for (const auto& z : pts.pts) p.values.push_back(szego_at(*basis, z));
  }
  double mn = std::pow(double(std::max(m, 1)), a.n);
  p.normalized.resize(p.values.size());
  for (std::size_t i = 0; i < p.values.size(); ++i) p.normalized[i] = p.values[i] / mn;
  auto [mn_it, mx_it] = std::minmax_element(p.normalized.begin(), p.normalized.end());
  p.min_norm = *mn_it;
  p.max_norm = *mx_it;
  return p;
}

UpperBoundReport check_upper_bound(const WeightedAction& a,
                                   const std::vector<int>& m_grid,
                                   const EvalPoints& pts) {
  UpperBoundReport rep;
  rep.m_grid = m_grid;
  for (int m : m_grid) {
    SzegoProfile p = szego_function(a, m, pts);
    rep.per_m_max.push_back(p.max_norm);
    rep.C_hat = std::max(rep.C_hat, p.max_norm);
  }
  // stability: maxima over the top half of the grid within 10% of each other
  double lo = rep.C_hat, hi = 0.0;
  for (std::size_t i = m_grid.size() / 2; i < m_grid.size(); ++i) {
    lo = std::min(lo, rep.per_m_max[i]);
    hi = std::max(hi, rep.per_m_max[i]);
  }
  rep.stable = lo > 0.0 && (hi - lo) <= 0.10 * lo;
  return rep;
}

LeadingCoefficient leading_coefficient(const WeightedAction& a, const Stratification& s,
                                       const Eigen::VectorXcd& x,
                                       const std::vector<int>& m_values) {
  if (m_values.size() < 2) throw std::invalid_argument("need at least two m values");
  LeadingCoefficient lc;
  int mmax = *std::max_element(m_values.begin(), m_values.end());
  if (s.periods.size() > 1) {
    int q2 = s.periods[1];  // first nontrivial stabilizer order
    lc.near_singular = dist_to_stratum(a, s, x, q2) < 2.0 / std::sqrt(double(mmax));
  }
  // least squares fit of S_m/m^n against 1 and 1/m
  double s11 = 0, s1x = 0, sxx = 0, s1y = 0, sxy = 0;
  for (int m : m_values) {
    auto basis = fourier_basis(a, m);
    double y = szego_at(*basis, x) / std::pow(double(m), a.n);
    double xr = 1.0 / m;
    s11 += 1;
    s1x += xr;
    sxx += xr * xr;
    s1y += y;
    sxy += xr * y;
  }
  double det = s11 * sxx - s1x * s1x;
  lc.b0 = (sxx * s1y - s1x * sxy) / det;
  lc.rate = (s11 * sxy - s1x * s1y) / det;
  return lc;
}

double lipschitz_ratio(const WeightedAction& a, int m, int npairs, std::uint64_t seed) {
  auto basis = fourier_basis(a, m);
  Rng rng(seed, 0xC0FFEEULL, m);
  double best = 0.0;
  double scale = std::pow(double(m), a.n + 0.5);
  for (int p = 0; p < npairs; ++p) {
    Eigen::VectorXcd x(a.nvars()), y(a.nvars());
    for (int j = 0; j < a.nvars(); ++j) x[j] = rng.next_cgaussian();
    x /= x.norm();
    // mix of nearby and far partners to probe both regimes
    double step = std::pow(10.0, -3.0 * rng.next_double());
    for (int j = 0; j < a.nvars(); ++j) y[j] = x[j] + step * rng.next_cgaussian();
    y /= y.norm();
    double d = (x - y).norm();
    if (d < 1e-12) continue;
    double r = std::abs(szego_at(*basis, x) - szego_at(*basis, y)) / (scale * d);
    best = std::max(best, r);
  }
  return best;
}

namespace {
// kernels cached per Fourier weight during the multiple search
struct KernelCache {
  const WeightedAction& a;
  const EvalPoints& pts;
  std::map<int, std::vector<double>> values;
  const std::vector<double>& get(int weight) {
    auto it = values.find(weight);
    if (it != values.end()) return it->second;
    auto basis = fourier_basis(a, weight);
    std::vector<double> v;
    if (a.n == 1 && !pts.s.empty())
      v = szego_radial(*basis, pts.s);
    else
      for (const auto& z : pts.pts) v.push_back(szego_at(*basis, z));
    return values.emplace(weight, std::move(v)).first->second;
  }
};
}  // namespace

CombiningCertificate find_combining_multiples(const WeightedAction& a,
                                              const Stratification& s,
                                              const std::vector<int>& m_grid,
                                              double c_target, const EvalPoints& pts,
                                              int k_cap) {
  if (c_target < 0.0 || c_target >= 1.0)
    throw std::invalid_argument("c_target must lie in [0, 1)");
  for (int mp : m_grid)
    if (mp <= 0 || mp % s.alpha != 0)
      throw std::invalid_argument("m_grid entries must be positive multiples of alpha");
  CombiningCertificate cert;
  cert.m_grid = m_grid;
  KernelCache cache{a, pts, {}};

  // reference level of the regular stratum: worst (over m) best point value
  cert.free_level = 1e300;
  for (int mp : m_grid) {
    const auto& v = cache.get(mp);
    double mx = 0.0;
    for (double t : v) mx = std::max(mx, t / std::pow(double(mp), a.n));
    cert.free_level = std::min(cert.free_level, mx);
  }

  int t = int(s.periods.size());
  std::vector<int> k_list{1};
  auto min_ratio_with = [&](const std::vector<int>& ks, int mp) {
    double mn = 1e300;
    for (std::size_t i = 0; i < pts.pts.size(); ++i) {
      KahanSum acc;
      for (int k : ks) acc.add(cache.get(k * mp)[i]);
      mn = std::min(mn, acc.value() / std::pow(double(mp), a.n));
    }
    return mn;
  };
  while (int(k_list.size()) < t) {
    int chosen = -1;
    for (int k = k_list.back() + 1; k <= k_cap; ++k) {
      std::vector<int> trial = k_list;
      trial.push_back(k);
      bool ok = true;
      for (int mp : m_grid)
        if (min_ratio_with(trial, mp) < c_target * cert.free_level) {
          ok = false;
          break;
        }
      if (ok) {
        chosen = k;
        break;
      }
    }
    if (chosen < 0) return cert;  // found = false
    k_list.push_back(chosen);
  }
  cert.k_list = k_list;
  cert.c_hat = 1e300;
  for (int mp : m_grid) {
    double mn = 1e300, mx = 0.0;
    for (std::size_t i = 0; i < pts.pts.size(); ++i) {
      KahanSum acc;
      for (int k : k_list) acc.add(cache.get(k * mp)[i]);
      double r = acc.value() / std::pow(double(mp), a.n);
      mn = std::min(mn, r);
      mx = std::max(mx, r);
    }
    cert.per_m_min.push_back(mn);
    cert.per_m_max.push_back(mx);
    cert.c_hat = std::min(cert.c_hat, mn);
    cert.C_hat = std::max(cert.C_hat, mx);
  }
  cert.found = cert.c_hat > 0.0;
  return cert;
}

std::string certificate_to_json(const CombiningCertificate& c, double c_target) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"found\":" << (c.found ? "true" : "false") << ",\"k_list\":[";
  for (std::size_t i = 0; i < c.k_list.size(); ++i) os << (i ? "," : "") << c.k_list[i];
  os << "],\"c_hat\":" << c.c_hat << ",\"C_hat\":" << c.C_hat
     << ",\"free_level\":" << c.free_level << ",\"c_target\":" << c_target
     << ",\"m_grid\":[";
  for (std::size_t i = 0; i < c.m_grid.size(); ++i) os << (i ? "," : "") << c.m_grid[i];
  os << "],\"per_m_min\":[";
  for (std::size_t i = 0; i < c.per_m_min.size(); ++i) os << (i ? "," : "") << c.per_m_min[i];
  os << "],\"per_m_max\":[";
  for (std::size_t i = 0; i < c.per_m_max.size(); ++i) os << (i ? "," : "") << c.per_m_max[i];
  os << "]}";
  return os.str();
}

}  // namespace crzero
