#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crzero/sampling.hpp"
#include "crzero/szego.hpp"

using namespace crzero;

TEST_CASE("free kernel is the constant (m+1)/(2 pi^2)") {
  auto a = WeightedAction::make({1, 1});
  auto pts = make_eval_points(a, 101);
  for (int m : {1, 2, 7, 30, 60}) {
    auto prof = szego_function(a, m, pts);
    double cf = (m + 1) / (2 * M_PI * M_PI);
    for (double v : prof.values) CHECK(std::abs(v - cf) < 1e-10);
  }
}

TEST_CASE("half-weighted kernel on the singular circle") {
  auto a = WeightedAction::make({1, 2});
  auto b = fourier_basis(a, 12);
  auto bo = fourier_basis(a, 13);
  // s = 1 is the circle z1 = 0
  auto at_s1 = szego_radial(*b, {1.0});
  CHECK(std::abs(at_s1[0] - (12 / 2 + 1) / (2 * M_PI * M_PI)) < 1e-12);
  auto odd = szego_radial(*bo, {1.0});
  CHECK(odd[0] == 0.0);  // no monomial of odd weight survives at z1 = 0
}

TEST_CASE("radial fast path agrees with the generic evaluator") {
  auto a = WeightedAction::make({1, 2});
  auto b = fourier_basis(a, 9);
  Rng rng{4};
  for (int t = 0; t < 10; ++t) {
    double s = rng.next_double();
    Eigen::VectorXcd z(2);
    double phi1 = 2 * M_PI * rng.next_double(), phi2 = 2 * M_PI * rng.next_double();
    z << std::sqrt(1 - s) * std::polar(1.0, phi1), std::sqrt(s) * std::polar(1.0, phi2);
    CHECK(std::abs(szego_at(*b, z) - szego_radial(*b, {s})[0]) < 1e-12);
  }
}

TEST_CASE("kernel equals the expected pointwise mass of random sections") {
  auto a = WeightedAction::make({1, 1});
  int m = 6;
  auto bases = assemble_Am(a, stratify(a), m, {1});
  Eigen::VectorXcd x(2);
  x << std::sqrt(0.3), std::sqrt(0.7);
  double acc = 0;
  const int T = 20000;
  for (int t = 0; t < T; ++t) {
    SeededStream s{777, 0, (std::uint64_t)t};
    CRSection u = sample_section(bases, s);
    acc += std::norm(evaluate(u, x));
  }
  acc /= T;
  // E |u(x)|^2 = S_m(x) / d_m for sphere-normalized coefficients
  double want = szego_at(*bases[0], x) / bases[0]->dim();
  CHECK(std::abs(acc - want) < 0.03 * want);
}

TEST_CASE("upper bound report is stable for dense grids") {
  auto a = WeightedAction::make({1, 2});
  auto pts = make_eval_points(a, 151);
  std::vector<int> grid;
  for (int m = 2; m <= 40; m += 2) grid.push_back(m);
  auto rep = check_upper_bound(a, grid, pts);
  CHECK(rep.stable);
  CHECK(rep.C_hat > 0);
}

TEST_CASE("leading coefficient extrapolates the free kernel") {
  auto a = WeightedAction::make({1, 1});
  auto strat = stratify(a);
  Eigen::VectorXcd x(2);
  x << std::sqrt(0.5), std::sqrt(0.5);
  auto lc = leading_coefficient(a, strat, x, {10, 20, 40, 80});
  CHECK(std::abs(lc.b0 - 1.0 / (2 * M_PI * M_PI)) < 1e-10);
  CHECK_FALSE(lc.near_singular);
}

TEST_CASE("lipschitz ratio stays bounded at the working scales") {
  auto a = WeightedAction::make({1, 2});
  for (int m : {8, 16, 32}) CHECK(lipschitz_ratio(a, m, 40, 5) < 50.0);
}

TEST_CASE("combining multiples certificate for the half-weighted sphere") {
  auto a = WeightedAction::make({1, 2});
  auto strat = stratify(a);
  auto pts = make_eval_points(a, 201);
  std::vector<int> grid;
  for (int m = 2; m <= 40; m += 2) grid.push_back(m);
  auto cert = find_combining_multiples(a, strat, grid, 0.25, pts);
  REQUIRE(cert.found);
  CHECK(cert.k_list.front() == 1);
  CHECK(cert.c_hat > 0);
  CHECK(cert.C_hat / cert.c_hat <= 50.0);
  // lower envelope certified against the free level
  CHECK(cert.c_hat >= 0.25 * cert.free_level);
  CHECK_THROWS(find_combining_multiples(a, strat, {3}, 0.25, pts));  // not multiple of 2
}
