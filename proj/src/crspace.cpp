#include "crzero/crspace.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace crzero {

double monomial_norm(int n, const std::vector<int>& alpha) {
  long total = 0;
  for (int aj : alpha) {
    if (aj < 0) throw std::invalid_argument("negative exponent");
    total += aj;
  }
  if (int(alpha.size()) != n + 1) throw std::invalid_argument("alpha size mismatch");
  if (total <= 30) {
    double num = 2.0 * std::pow(M_PI, n + 1);
    for (int aj : alpha)
      for (int k = 2; k <= aj; ++k) num *= k;
    double den = 1.0;
    for (long k = 2; k <= n + total; ++k) den *= k;
    return num / den;
  }
  double lg = std::log(2.0) + (n + 1) * std::log(M_PI);
  for (int aj : alpha) lg += log_factorial(aj);
  lg -= log_factorial(n + total);
  return std::exp(lg);
}

namespace {
void enumerate_rec(const WeightedAction& a, int var, int remaining,
                   std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (var == a.nvars() - 1) {
    if (remaining % a.weights[var] == 0) {
      cur[var] = remaining / a.weights[var];
      out.push_back(cur);
    }
    return;
  }
  for (int e = remaining / a.weights[var]; e >= 0; --e) {
    cur[var] = e;
    enumerate_rec(a, var + 1, remaining - e * a.weights[var], cur, out);
  }
}
}  // namespace

BasisPtr fourier_basis(const WeightedAction& a, int m) {
  if (m < 0) throw std::invalid_argument("negative Fourier weight");
  auto b = std::make_shared<FourierBasis>();
  b->m = m;
  b->action = a;
  std::vector<int> cur(a.nvars(), 0);
  enumerate_rec(a, 0, m, cur, b->exponents);
  b->norms.reserve(b->exponents.size());
  for (const auto& alpha : b->exponents)
    b->norms.push_back(std::sqrt(monomial_norm(a.n, alpha)));
  return b;
}

cplx FourierBasis::eval_element(int j, const Eigen::VectorXcd& z) const {
  cplx v = 1.0;
  const auto& alpha = exponents[j];
  for (int k = 0; k < int(alpha.size()); ++k) {
    cplx p = 1.0, base = z[k];
    int e = alpha[k];
    while (e > 0) {  // binary exponentiation keeps high degrees cheap
      if (e & 1) p *= base;
      base *= base;
      e >>= 1;
    }
    v *= p;
  }
  return v / norms[j];
}

std::vector<BasisPtr> assemble_Am(const WeightedAction& a, const Stratification& s,
                                  int m, const std::vector<int>& k_list) {
  if (k_list.empty() || k_list.front() != 1)
    throw std::invalid_argument("k_list must start with 1");
  for (std::size_t j = 1; j < k_list.size(); ++j)
    if (k_list[j] <= k_list[j - 1]) throw std::invalid_argument("k_list must increase");
  std::vector<BasisPtr> out;
  for (int k : k_list) out.push_back(fourier_basis(a, int(k * s.alpha * m)));
  return out;
}

double CRSection::norm2() const {
  double t = 0.0;
  for (const auto& c : components) t += c.coeffs.squaredNorm();
  return t;
}

bool CRSection::is_zero(double tol) const {
  for (const auto& c : components)
    if (c.coeffs.lpNorm<Eigen::Infinity>() > tol) return false;
  return true;
}

cplx evaluate(const CRSection& u, const Eigen::VectorXcd& z) {
  KahanSumC acc;
  for (const auto& c : u.components)
    for (int j = 0; j < c.basis->dim(); ++j)
      acc.add(c.coeffs[j] * c.basis->eval_element(j, z));
  return acc.value();
}

std::string basis_to_json(const FourierBasis& b) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"m\":" << b.m << ",\"weights\":[";
  for (int j = 0; j < b.action.nvars(); ++j)
    os << (j ? "," : "") << b.action.weights[j];
  os << "],\"elements\":[";
  for (int j = 0; j < b.dim(); ++j) {
    os << (j ? "," : "") << "{\"alpha\":[";
    for (std::size_t k = 0; k < b.exponents[j].size(); ++k)
      os << (k ? "," : "") << b.exponents[j][k];
    os << "],\"norm\":" << b.norms[j] << "}";
  }
  os << "]}";
  return os.str();
}

}  // namespace crzero
