#pragma once

// Pointwise Szego kernel functions S_m(x) = sum |f_j(x)|^2 over the
// orthonormal Fourier basis, growth diagnostics, and the search for a finite
// set of multiples whose summed kernels are uniformly comparable to m^n.

#include <optional>
#include <string>
#include <vector>

#include "crzero/crspace.hpp"
#include "crzero/geometry.hpp"

namespace crzero {

// S_m at a single point, compensated summation over the basis
double szego_at(const FourierBasis& b, const Eigen::VectorXcd& z);

// n = 1 fast path: S_m depends only on s = |z_2|^2
std::vector<double> szego_radial(const FourierBasis& b, const std::vector<double>& s);

struct SzegoProfile {
  int m = 0;
  std::vector<double> values;      // S_m at the evaluation points
  std::vector<double> normalized;  // S_m / m^n
  double min_norm = 0, max_norm = 0;
};

// evaluation point set for kernel scans; for n = 1 it is a radial s-grid
// augmented with the stratum endpoints s = 0 and s = 1
struct EvalPoints {
  std::vector<Eigen::VectorXcd> pts;
  std::vector<double> s;  // filled for n = 1
};
EvalPoints make_eval_points(const WeightedAction& a, int nradial);

SzegoProfile szego_function(const WeightedAction& a, int m, const EvalPoints& pts);

struct UpperBoundReport {
  double C_hat = 0;                 // max over m and points of S_m / m^n
  std::vector<double> per_m_max;    // indexed like m_grid
  std::vector<int> m_grid;
  bool stable = false;              // top-half maxima within 10% of overall
};
UpperBoundReport check_upper_bound(const WeightedAction& a,
                                   const std::vector<int>& m_grid,
                                   const EvalPoints& pts);

struct LeadingCoefficient {
  double b0 = 0;        // extrapolated limit of S_m(x) / m^n
  double rate = 0;      // fitted 1/m correction coefficient
  bool near_singular = false;
};
// Richardson-style fit of S_m(x)/m^n ~ b0 + rate/m over the given m values.
// Warns (near_singular) when x is within 2/sqrt(max m) of a higher stratum.
LeadingCoefficient leading_coefficient(const WeightedAction& a, const Stratification& s,
                                       const Eigen::VectorXcd& x,
                                       const std::vector<int>& m_values);

// max over sampled pairs of |S_m(x) - S_m(y)| / (m^{n + 1/2} |x - y|)
double lipschitz_ratio(const WeightedAction& a, int m, int npairs, std::uint64_t seed);

struct CombiningCertificate {
  std::vector<int> k_list;       // 1 = k_0 < k_1 < ... < k_{t-1}
  double c_hat = 0, C_hat = 0;   // certified two-sided constants for
                                 // sum_j S_{k_j alpha m} / (alpha m)^n
  double free_level = 0;         // min over m of max over points of S_{m'}/(m')^n
  std::vector<int> m_grid;       // the probed Fourier weights (multiples of alpha)
  std::vector<double> per_m_min, per_m_max;
  bool found = false;
};

// Greedy search: k_0 = 1; each further k_j is the smallest integer above
// k_{j-1} such that the summed kernels stay above c_target * free_level at
// every probe point and every m in the grid.  t = number of distinct periods.
CombiningCertificate find_combining_multiples(const WeightedAction& a,
                                              const Stratification& s,
                                              const std::vector<int>& m_grid,
                                              double c_target, const EvalPoints& pts,
                                              int k_cap = 64);

std::string certificate_to_json(const CombiningCertificate& c, double c_target);

}  // namespace crzero
