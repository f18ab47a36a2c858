#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crzero/crspace.hpp"
#include "crzero/sampling.hpp"

using namespace crzero;

namespace {
// 1D oracle for the monomial norm on S^3: |z^a|^2 integrates over the Hopf
// radial variable s = |z2|^2 against the Beta density
double beta_oracle_norm2(int a1, int a2) {
  GaussRule g = gauss_legendre_ab(200, 0.0, 1.0);
  double v = 0;
  for (int i = 0; i < 200; ++i)
    v += g.w[i] * std::pow(1.0 - g.x[i], a1) * std::pow(g.x[i], a2);
  return 2 * M_PI * M_PI * v;
}
}  // namespace

TEST_CASE("monomial norms: closed form against the Beta integral") {
  CHECK(std::abs(monomial_norm(1, {0, 0}) - 2 * M_PI * M_PI) < 1e-12);
  CHECK(std::abs(monomial_norm(1, {1, 0}) - M_PI * M_PI) < 1e-12);
  CHECK(std::abs(monomial_norm(1, {1, 1}) - M_PI * M_PI / 3.0) < 1e-12);
  for (int a1 = 0; a1 <= 7; ++a1)
    for (int a2 = 0; a2 <= 7; ++a2)
      CHECK(std::abs(monomial_norm(1, {a1, a2}) - beta_oracle_norm2(a1, a2)) <
            1e-10 * monomial_norm(1, {a1, a2}));
  // large-exponent log path stays consistent with the recursion
  // ||z^(a1+1,a2)||^2 = ||z^(a1,a2)||^2 * (a1+1)/(n+|a|+1)
  double r = monomial_norm(1, {41, 20}) / monomial_norm(1, {40, 20});
  CHECK(std::abs(r - 41.0 / 62.0) < 1e-12);
}

TEST_CASE("component dimensions for the standard weights") {
  auto a11 = WeightedAction::make({1, 1});
  for (int m : {1, 5, 12}) CHECK(fourier_basis(a11, m)->dim() == m + 1);
  auto a12 = WeightedAction::make({1, 2});
  CHECK(fourier_basis(a12, 4)->dim() == 3);   // z1^4, z1^2 z2, z2^2
  CHECK(fourier_basis(a12, 5)->dim() == 3);   // z1^5, z1^3 z2, z1 z2^2
  CHECK(fourier_basis(a12, 7)->dim() == 4);
}

TEST_CASE("basis elements are orthonormal on the grid") {
  QuadratureGrid grid = build_sphere_grid(1, 16);
  for (auto w : {std::vector<int>{1, 1}, std::vector<int>{1, 2}}) {
    auto a = WeightedAction::make(w);
    auto b = fourier_basis(a, 10);
    for (int i = 0; i < b->dim(); ++i)
      for (int j = i; j < b->dim(); ++j) {
        cplx g = grid.integrate_c([&](const Eigen::VectorXcd& z) {
          return b->eval_element(i, z) * std::conj(b->eval_element(j, z));
        });
        CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-8);
      }
  }
}

TEST_CASE("equivariance: sections transform with weight m") {
  auto a = WeightedAction::make({1, 2});
  auto strat = stratify(a);
  auto bases = assemble_Am(a, strat, 3, {1, 2});  // weights 6 and 12
  SeededStream s{314, 0, 0};
  CRSection u = sample_section(bases, s);
  Rng rng{9};
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXcd x(2);
    x << rng.next_cgaussian(), rng.next_cgaussian();
    x.normalize();
    double th = 2.0 * rng.next_double() - 1.0;
    for (const auto& comp : u.components) {
      CRSection single;
      single.components.push_back(comp);
      cplx lhs = evaluate(single, a.act(th, x));
      cplx rhs = std::polar(1.0, comp.basis->m * th) * evaluate(single, x);
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("parseval: L2 norm of the section equals the coefficient norm") {
  QuadratureGrid grid = build_sphere_grid(1, 16);
  auto a = WeightedAction::make({1, 2});
  auto strat = stratify(a);
  auto bases = assemble_Am(a, strat, 2, {1, 2});
  SeededStream s{11, 2, 0};
  CRSection u = sample_section(bases, s);
  double l2 = grid.integrate([&](const Eigen::VectorXcd& z) {
    return std::norm(evaluate(u, z));
  });
  CHECK(std::abs(l2 - u.norm2()) < 1e-8);
}

TEST_CASE("reproducing property of the component kernel") {
  QuadratureGrid grid = build_sphere_grid(1, 14);
  auto a = WeightedAction::make({1, 1});
  auto b = fourier_basis(a, 8);
  Rng rng{23};
  Eigen::VectorXcd x(2);
  x << rng.next_cgaussian(), rng.next_cgaussian();
  x.normalize();
  for (int j : {0, 3, 8}) {
    cplx repr = grid.integrate_c([&](const Eigen::VectorXcd& y) {
      KahanSumC k;
      for (int i = 0; i < b->dim(); ++i)
        k.add(b->eval_element(i, x) * std::conj(b->eval_element(i, y)));
      return k.value() * b->eval_element(j, y);
    });
    CHECK(std::abs(repr - b->eval_element(j, x)) < 1e-6);
  }
}

TEST_CASE("sections are holomorphic in the projective chart") {
  // with x(w) = (1, w)/sqrt(1+|w|^2) the function u(x(w)) * (1+|w|^2)^(m/2)
  // must be holomorphic in w; check Cauchy-Riemann residuals by central FD
  auto a = WeightedAction::make({1, 1});
  int m = 6;
  auto bases = assemble_Am(a, stratify(a), m, {1});
  for (int trial = 0; trial < 5; ++trial) {
    SeededStream s{500, 0, (std::uint64_t)trial};
    CRSection u = sample_section(bases, s);
    auto G = [&](cplx w) {
      Eigen::VectorXcd x(2);
      double nrm = std::sqrt(1.0 + std::norm(w));
      x << 1.0 / nrm, w / nrm;
      return evaluate(u, x) * std::pow(1.0 + std::norm(w), 0.5 * m);
    };
    Rng rng{77};
    double h = 1e-5;
    for (int p = 0; p < 8; ++p) {
      cplx w(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
      cplx dx = (G(w + h) - G(w - h)) / (2 * h);
      cplx dy = (G(w + cplx(0, h)) - G(w - cplx(0, h))) / (2 * h);
      cplx dbar = 0.5 * (dx + cplx(0, 1) * dy);
      CHECK(std::abs(dbar) < 1e-6 * (1.0 + std::abs(dx)));
    }
  }
}

TEST_CASE("component weights must increase and match the action") {
  auto a = WeightedAction::make({1, 2});
  auto strat = stratify(a);
  CHECK_THROWS(assemble_Am(a, strat, 4, {2, 1}));
  CHECK_THROWS(assemble_Am(a, strat, 4, {2, 4}));  // must start at 1
}

TEST_CASE("basis json snapshot contains exponents and norms") {
  auto a = WeightedAction::make({1, 2});
  auto b = fourier_basis(a, 4);
  std::string j = basis_to_json(*b);
  CHECK(j.find("alpha") != std::string::npos);
  CHECK(j.find("norm") != std::string::npos);
}
