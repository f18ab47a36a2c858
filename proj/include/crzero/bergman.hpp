#pragma once

// Bergman space of the unit ball in C^N (default N = 2): monomial basis in
// graded order, partial kernel sums, the lower-bound certificates on boundary
// annuli, and the boundary-shell zero-current pairings.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crzero/geometry.hpp"
#include "crzero/numerics.hpp"
#include "crzero/sampling.hpp"

namespace crzero {

struct BallModel {
  int N = 2;  // complex dimension, boundary S^{2N-1}
  // defining function, |dr| = 1 on the boundary
  double r(const Eigen::VectorXcd& z) const { return 0.5 * (z.squaredNorm() - 1.0); }
};

// int_{B^N} |z^alpha|^2 dV = pi^N alpha! / (N + |alpha|)!
double ball_norm(int N, const std::vector<int>& alpha);

// B(z, z) = N! / (pi^N (1 - |z|^2)^{N+1})
double bergman_kernel_closed(int N, const Eigen::VectorXcd& z);

// monomials in graded order (ascending total degree, descending first
// exponent inside a degree block)
struct BergmanBasis {
  int N = 2;
  std::vector<std::vector<int>> exponents;
  std::vector<double> norms;  // ||z^alpha|| (not squared)

  int dim() const { return int(exponents.size()); }
  cplx eval_element(int j, const Eigen::VectorXcd& z) const;
};
BergmanBasis bergman_basis(int N, int max_degree);

// P_b(z) = sum_{j < b} |g_j(z)|^2 over the first b orthonormal monomials
double partial_sum_Pk(const BergmanBasis& basis, int b, const Eigen::VectorXcd& z);

// N = 2 radial fast path: P_b as a function of (|z1|, |z2|)
double partial_sum_radial(const BergmanBasis& basis, int b, double r1, double r2);

struct BetaCertificate {
  int k = 0;
  int b_k = -1;          // smallest basis cut with inf_{annulus} |r|^{N+1} P_b >= c0
  double achieved = 0;   // certified infimum at b_k
  double c0_target = 0;
  bool found = false;
};

// annulus(k) = { 1/(2k) <= |r| <= 1/k }; the infimum is scanned on a radial
// (s, |z|) product grid, which is exact for complete degree blocks and
// conservative otherwise because the scan covers all monomial directions
BetaCertificate find_beta_k(const BallModel& model, const BergmanBasis& basis, int k,
                            double c0_target, int ngrid_r = 100, int ngrid_s = 100);

// asymptotic boundary value of |r|^{N+1} B(z,z): N! / (2^{N+1} pi^N)
double boundary_kernel_level(int N);

// peak section at x0: h = sum_j g_j conj(g_j(x0)) / sqrt(P_b(x0))
struct PeakSection {
  Eigen::VectorXcd coeffs;  // in the orthonormal basis, length b
  double sqrtP = 0;
};
PeakSection peak_section(const BergmanBasis& basis, int b, const Eigen::VectorXcd& x0);

// section of the first b basis elements
struct BallSection {
  const BergmanBasis* basis = nullptr;
  int b = 0;
  Eigen::VectorXcd coeffs;
};
BallSection sample_ball_section(const BergmanBasis& basis, int b,
                                const SeededStream& stream);
cplx evaluate(const BallSection& u, const Eigen::VectorXcd& z);

// boundary-shell test data: psi is the fixed bump supported in [-1, -1/2]
// (rescaled to peak 1), phi a smooth test function on the closed ball
double bump_psi(double t);
double psi_mass();  // c0 = integral of psi

struct BoundaryFieldSpec {
  int ns = 24;
  int nr = 16;    // Gauss nodes in r over the shell [-1/k, -1/(2k)]
  int nphi = 48;
  double fd_scale = 1e-4;  // finite-difference step, in units of 1/k
};

// ddbar of Theta = 2ik r psi(kr) phi wedge dr-del wedge dr-delbar, by centered
// finite differences of the (1,1)-coefficients; reused across trials
struct BoundaryField {
  BoundaryFieldSpec spec;
  int k = 0;
  std::vector<double> s_nodes, r_nodes;
  std::vector<double> R;  // |z| per radial node
  std::vector<double> w;  // Im(G) * jac * quadweight, slab-major as ConeField
  double w_total = 0, re_residual = 0;
};

BoundaryField build_boundary_field(int k,
                                   const std::function<cplx(const Eigen::VectorXcd&)>& phi,
                                   const BoundaryFieldSpec& spec);

struct BoundaryPairing {
  double value = 0;
  double err_estimate = 0;
};

// <[u = 0], Theta_k> via (i/pi) int log|u| ddbar Theta_k
BoundaryPairing boundary_pair(const BallSection& u, const BoundaryField& fine,
                              const BoundaryField& coarse);

// deterministic limit of the expected pairing:
// -(N+1) * (i/(2 pi)) * c0 * int_X L wedge omega0 wedge phi
// = -((N+1) c0 / (2 pi)) * int_{S^3} phi dsigma  for N = 2
double boundary_limit(const BallModel& model,
                      const std::function<cplx(const Eigen::VectorXcd&)>& phi,
                      const QuadratureGrid& sphere_grid);

// fluctuation of the pairing around its kernel mean:
// boundary_pair(u) - (i/(2 pi)) int log P_b ddbar Theta_k
double log_kernel_correction(const BallSection& u, const BoundaryField& field,
                             const std::vector<double>& logP_slab);

// radial slab values of log P_b on a field grid
std::vector<double> logP_on_field(const BergmanBasis& basis, int b,
                                  const BoundaryField& field);

struct VarianceTable {
  std::vector<int> k_values;
  std::vector<double> R_hat;   // mean squared correction
  std::vector<double> stderr_; // standard error of R_hat
  double slope = 0;            // least-squares slope of log R_hat vs log k
};

}  // namespace crzero
