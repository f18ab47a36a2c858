#pragma once

// Fourier components of the CR functions on a weighted sphere: for weight m
// the space is spanned by monomials z^alpha with <p, alpha> = m, orthonormal
// for the round surface measure.

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crzero/geometry.hpp"
#include "crzero/numerics.hpp"

namespace crzero {

// || z^alpha ||^2 = 2 pi^{n+1} alpha! / (n + |alpha|)!  on S^{2n+1}
// (squared L^2 norm; log-gamma evaluation guards overflow for large degree)
double monomial_norm(int n, const std::vector<int>& alpha);

struct FourierBasis {
  int m = 0;                                // Fourier weight <p, alpha> = m
  WeightedAction action;
  std::vector<std::vector<int>> exponents;  // lexicographic, each size n+1
  std::vector<double> norms;                // ||z^alpha|| (not squared)

  int dim() const { return int(exponents.size()); }

  // orthonormal basis element j at an ambient point (polynomial, so this is
  // also the holomorphic extension to C^{n+1})
  cplx eval_element(int j, const Eigen::VectorXcd& z) const;
};

using BasisPtr = std::shared_ptr<const FourierBasis>;

BasisPtr fourier_basis(const WeightedAction& a, int m);

// direct sum used by the combined ensembles: Fourier weights k_j * alpha * m
std::vector<BasisPtr> assemble_Am(const WeightedAction& a, const Stratification& s,
                                  int m, const std::vector<int>& k_list);

// element of a (direct sum of) Fourier component(s), coefficients in the
// orthonormal monomial basis
struct CRSection {
  struct Component {
    BasisPtr basis;
    Eigen::VectorXcd coeffs;
  };
  std::vector<Component> components;

  double norm2() const;  // sum of squared coefficient norms
  bool is_zero(double tol = 0.0) const;
};

// value at an ambient point; on the sphere this is the CR function, off the
// sphere it is the canonical holomorphic extension
cplx evaluate(const CRSection& u, const Eigen::VectorXcd& z);

std::string basis_to_json(const FourierBasis& b);

}  // namespace crzero
