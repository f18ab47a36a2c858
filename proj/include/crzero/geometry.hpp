#pragma once

// Weighted circle actions on odd spheres: stratification by stabilizer order,
// product quadrature grids, and the contact/Levi data induced by the action.

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crzero/numerics.hpp"

namespace crzero {

// e^{i theta} . z = (e^{i p_1 theta} z_1, ..., e^{i p_{n+1} theta} z_{n+1})
// on the unit sphere of C^{n+1}.  Weights are positive with overall gcd 1.
struct WeightedAction {
  int n = 1;                 // CR dimension, sphere is S^{2n+1}
  std::vector<int> weights;  // size n+1

  int nvars() const { return n + 1; }
  static WeightedAction make(std::vector<int> weights);
  bool is_free() const;  // all weights equal 1

  // action applied to an ambient point
  Eigen::VectorXcd act(double theta, const Eigen::VectorXcd& z) const;
};

struct StratumDescriptor {
  int period;                          // stabilizer order q
  std::vector<std::uint32_t> supports; // coordinate-support bitmasks with gcd == q
};

struct Stratification {
  std::vector<int> periods;  // distinct stabilizer orders, ascending
  long alpha = 1;            // lcm of the periods
  std::vector<StratumDescriptor> descriptors;
};

Stratification stratify(const WeightedAction& a);

// stabilizer order of the orbit through z (gcd of weights over the support)
int period_of_point(const WeightedAction& a, const Eigen::VectorXcd& z,
                    double support_tol = 1e-13);

// Chordal distance from x (|x| = 1) to the closed set of points with
// stabilizer order >= period.  Returns sqrt(2) when only a fully absent
// support qualifies, 0 when x itself lies in the set.
double dist_to_stratum(const WeightedAction& a, const Stratification& s,
                       const Eigen::VectorXcd& x, int period);

// Product quadrature grid on S^{2n+1} (n = 1 or 2): Gauss in the radial
// simplex coordinates, uniform in the torus angles.  Integrates |z^alpha|^2
// exactly for |alpha| <= 2*level.
struct QuadratureGrid {
  int n = 1;
  std::string order_tag;
  std::vector<Eigen::VectorXcd> nodes;
  std::vector<double> weights;  // positive, sum = area of S^{2n+1}

  // product structure, n == 1 only (empty otherwise): node index is
  // (is * nphi1 + j1) * nphi2 + j2
  std::vector<double> s_nodes, s_wts;
  int nphi1 = 0, nphi2 = 0;

  std::size_t size() const { return nodes.size(); }
  double integrate(const std::function<double(const Eigen::VectorXcd&)>& f) const;
  cplx integrate_c(const std::function<cplx(const Eigen::VectorXcd&)>& f) const;
  void to_csv(const std::string& path) const;
};

QuadratureGrid build_sphere_grid(int n, int level, std::size_t node_cap = 40000000);

double sphere_area(int n);  // 2 pi^{n+1} / n!

// Contact data of the weighted action: ambient extensions of the normalized
// contact form omega0 = -eta_std / rho_p, the Reeb generator T, and the Levi
// form.  Conventions: <omega0, T> = -1, omega0 annihilates T^{1,0} + T^{0,1}.
struct ContactData {
  WeightedAction action;

  double rho(const Eigen::VectorXcd& z) const;  // sum p_j |z_j|^2

  // (1,0)-coefficients c_j of omega0 = sum c_j dz_j + conj(c_j) dz_j-bar
  Eigen::VectorXcd omega0_coeff(const Eigen::VectorXcd& z) const;

  // generator of the action, T(z)_j = i p_j z_j
  Eigen::VectorXcd reeb(const Eigen::VectorXcd& z) const;

  // real pairing of a real 1-form (given by its (1,0) coefficients) with an
  // ambient tangent vector v (complex coordinates)
  static double pair_real(const Eigen::VectorXcd& c10, const Eigen::VectorXcd& v);

  // orthonormal frame of T^{1,0}X at z: columns span the Hermitian complement
  // of z in C^{n+1}
  Eigen::MatrixXcd frame10(const Eigen::VectorXcd& z) const;

  // Levi matrix in the frame10 basis, via finite differences of omega0:
  // L(U,V) = -(1/2i) <d omega0, U wedge conj(V)>
  Eigen::MatrixXcd levi_fd(const Eigen::VectorXcd& z, double h = 1e-5) const;

  // closed form in the same frame: identity / (2 rho_p)
  Eigen::MatrixXcd levi_exact(const Eigen::VectorXcd& z) const;
};

// (i/pi) * integral over X of L_X wedge f wedge omega0 for n = 1; reduces to
// (1/pi) * integral f / rho_p^2 dsigma.  Orientation fixed so that f >= 0
// gives a nonnegative value.
cplx levi_pairing_integral(const WeightedAction& a, const QuadratureGrid& grid,
                           const std::function<cplx(const Eigen::VectorXcd&)>& f);

}  // namespace crzero
