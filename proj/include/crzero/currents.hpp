#pragma once

// Zero-current pairings for sections of the Fourier components (n = 1).
//
// A section u of weights (m_1, ..., m_t) extends to X x R as
// v(x, eta) = sum_j e^{-m_j eta} u_j(x); under the identification
// z_j = e^{-p_j eta} x_j of X x R with C^2 \ {0} the extension is the
// weighted-homogeneous polynomial U.  The zero current [v = 0] is paired
// with f wedge omega0 wedge (1/eps) chi(eta/eps) deta in two independent
// ways: exactly through the roots of the dehomogenized polynomial, and
// weakly through (i/pi) integral of log|U| ddbar(test form) in flat
// coordinates.

#include <functional>
#include <string>
#include <vector>

#include "crzero/crspace.hpp"
#include "crzero/geometry.hpp"
#include "crzero/sampling.hpp"
#include "crzero/szego.hpp"

namespace crzero {

// smooth bump on (-1,1), normalized so the integral is exactly the computed
// quadrature value 1; chi(t) = exp(1 - 1/(1-t^2)) / I
double bump_chi(double t);

struct TestFormPackage {
  std::function<cplx(const Eigen::VectorXcd&)> f = [](const Eigen::VectorXcd&) {
    return cplx(1.0, 0.0);
  };
  double eps_coeff = 1.0;
  double eps_pow = 1.5;  // eps_m = eps_coeff * m^{-eps_pow}

  double eps(int m) const { return eps_coeff * std::pow(double(m), -eps_pow); }
};

// cone point Psi(x, eta)
Eigen::VectorXcd cone_point(const WeightedAction& a, const Eigen::VectorXcd& x,
                            double eta);

// the holomorphic extension is evaluate(u, .) itself; this wrapper carries the
// section and offers the (x, eta) view of the cone
struct ExtendedSection {
  WeightedAction action;
  CRSection u;
  cplx value(const Eigen::VectorXcd& x, double eta) const {
    return evaluate(u, cone_point(action, x, eta));
  }
};

struct PairingResult {
  cplx value = 0;
  std::string evaluator;
  double err_estimate = 0;
  bool ill_conditioned = false;
};

// alpha * (sum k_j^{n+1}) / (sum k_j^n), the limit of the normalized pairing
double limit_constant(int n, long alpha, const std::vector<int>& k_list);

// Exact evaluator for single-component sections (n = 1): companion-matrix
// roots of the dehomogenized polynomial grouped into weighted orbits, each
// contributing multiplicity * integral of f along the orbit.  Sign convention:
// the pairing of z1^m against f >= 0 is positive.
PairingResult pair_roots(const ExtendedSection& u, const TestFormPackage& pkg,
                         double cluster_rtol = 1e-8, int ntheta = 64);

// --- weak evaluator --------------------------------------------------------

struct ConeFieldSpec {
  int ns = 32;        // Gauss nodes in s
  int neta = 24;      // Gauss nodes in eta over [-eps, eps]
  int nphi = 48;      // uniform phase nodes per angle
  double fd_scale = 5e-4;  // finite-difference step, in units of eps
};

// ddbar of the pushed-forward test form, precomputed per (action, f, m):
// node values of Im(G) * jacobian * quadrature weight, where G is the single
// (2,2)-coefficient obtained by centered finite differences of the (1,1)
// coefficients of the form.  Independent of the section, so trials reuse it.
struct ConeField {
  ConeFieldSpec spec;
  WeightedAction action;
  int m_base = 0;
  double eps = 0;
  std::vector<double> s_nodes, eta_nodes;
  std::vector<double> r1, r2;   // slab radii, index is*neta + ie
  std::vector<double> w;        // slab-major: ((is*neta + ie)*nphi + j1)*nphi + j2
  double w_total = 0;           // integral of ddbar(form); should be ~0
  double re_residual = 0;       // leaked real part of G, error indicator
};

ConeField build_cone_field(const WeightedAction& a, const TestFormPackage& pkg,
                           int m_base, const ConeFieldSpec& spec);

// clip threshold for log|U|
inline double log_clip(int m_base) { return 40.0 + 2.0 * std::log(double(m_base)); }

// (i/pi) int log|U| ddbar(form) evaluated on a precomputed field; the error
// estimate combines the coarse/fine field difference with the clipping delta
PairingResult pair_weak(const CRSection& u, const ConeField& fine,
                        const ConeField& coarse);

// single-field variant (no refinement error estimate)
double pair_weak_value(const CRSection& u, const ConeField& field, double clip_L);

// expectation of the normalized pairing (1/m) <[v=0], form> over the uniform
// sphere ensemble on A_m: (i/pi) int [sum_j k_j alpha S_{k_j alpha m} /
// sum_j S_{k_j alpha m}] L_X wedge f wedge omega0
cplx expected_pairing(const WeightedAction& a, const Stratification& s,
                      const std::vector<int>& k_list, int m,
                      const TestFormPackage& pkg, const QuadratureGrid& grid);

}  // namespace crzero
