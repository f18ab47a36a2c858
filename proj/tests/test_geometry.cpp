#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crzero/geometry.hpp"
#include "crzero/numerics.hpp"

using namespace crzero;

namespace {
Eigen::VectorXcd pt(cplx a, cplx b) {
  Eigen::VectorXcd z(2);
  z << a, b;
  return z.normalized();
}
}  // namespace

TEST_CASE("stratification of standard examples") {
  auto a11 = WeightedAction::make({1, 1});
  auto s11 = stratify(a11);
  CHECK(s11.periods == std::vector<int>{1});
  CHECK(s11.alpha == 1);

  auto a12 = WeightedAction::make({1, 2});
  auto s12 = stratify(a12);
  CHECK(s12.periods == std::vector<int>{1, 2});
  CHECK(s12.alpha == 2);

  auto a236 = WeightedAction::make({2, 3, 6});  // gcd 1 overall
  auto s236 = stratify(a236);
  CHECK(s236.periods == std::vector<int>{1, 2, 3, 6});
  CHECK(s236.alpha == 6);
}

TEST_CASE("weights must be coprime overall") {
  CHECK_THROWS(WeightedAction::make({2, 4}));
  CHECK_THROWS(WeightedAction::make({0, 1}));
}

TEST_CASE("period of a point is the gcd over its support") {
  auto a = WeightedAction::make({1, 2});
  CHECK(period_of_point(a, pt(1, 1)) == 1);
  CHECK(period_of_point(a, pt(0, 1)) == 2);
  CHECK(period_of_point(a, pt(1, 0)) == 1);
}

TEST_CASE("distance to a stratum matches direct minimization") {
  auto a = WeightedAction::make({1, 2});
  auto s = stratify(a);
  // stratum of period 2 is the circle {z1 = 0}
  Rng rng{7};
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd x = pt(rng.next_cgaussian(), rng.next_cgaussian());
    double d = dist_to_stratum(a, s, x, 2);
    double direct = 4.0;
    for (int j = 0; j < 4000; ++j) {
      double th = 2 * M_PI * j / 4000;
      Eigen::VectorXcd y = pt(0, std::polar(1.0, th));
      direct = std::min(direct, (x - y).norm());
    }
    CHECK(std::abs(d - direct) < 1e-5);
  }
}

TEST_CASE("action rotates coordinates with the given weights") {
  auto a = WeightedAction::make({1, 2});
  Eigen::VectorXcd x = pt(cplx(0.3, 0.4), cplx(0.5, -0.1));
  double th = 0.77;
  Eigen::VectorXcd y = a.act(th, x);
  CHECK(std::abs(y[0] - x[0] * std::polar(1.0, th)) < 1e-15);
  CHECK(std::abs(y[1] - x[1] * std::polar(1.0, 2 * th)) < 1e-15);
}

TEST_CASE("sphere grid integrates monomial densities to closed form") {
  QuadratureGrid g = build_sphere_grid(1, 16);
  // total area of S^3
  double area = g.integrate([](const Eigen::VectorXcd&) { return 1.0; });
  CHECK(std::abs(area - 2 * M_PI * M_PI) < 1e-10);
  // |z1|^2 integrates to half the area by symmetry
  double h = g.integrate([](const Eigen::VectorXcd& z) { return std::norm(z[0]); });
  CHECK(std::abs(h - M_PI * M_PI) < 1e-10);
  // int |z^a|^2 = 2 pi^2 a1! a2! / (1+|a|)!
  Rng rng{99};
  for (int trial = 0; trial < 20; ++trial) {
    int a1 = int(rng.next_double() * 6), a2 = int(rng.next_double() * 6);
    double v = g.integrate([&](const Eigen::VectorXcd& z) {
      return std::pow(std::norm(z[0]), a1) * std::pow(std::norm(z[1]), a2);
    });
    double cf = 2 * M_PI * M_PI * std::exp(log_factorial(a1) + log_factorial(a2) -
                                           log_factorial(1 + a1 + a2));
    CHECK(std::abs(v - cf) < 1e-8);
  }
  // off-diagonal phases integrate to zero
  double off = std::abs(g.integrate_c([](const Eigen::VectorXcd& z) {
    return z[0] * std::conj(z[1]);
  }));
  CHECK(off < 1e-12);
}

TEST_CASE("five sphere grid mass") {
  QuadratureGrid g = build_sphere_grid(2, 8);
  double area = g.integrate([](const Eigen::VectorXcd&) { return 1.0; });
  CHECK(std::abs(area - sphere_area(2)) < 1e-9);
  double h = g.integrate([](const Eigen::VectorXcd& z) { return std::norm(z[2]); });
  CHECK(std::abs(h - sphere_area(2) / 3.0) < 1e-9);
}

TEST_CASE("contact form pairs to -1 with the generator and kills the frame") {
  for (auto w : {std::vector<int>{1, 1}, std::vector<int>{1, 2}}) {
    auto a = WeightedAction::make(w);
    ContactData cd{a};
    Rng rng{5};
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXcd x = pt(rng.next_cgaussian(), rng.next_cgaussian());
      CHECK(std::abs(cd.pair_real(cd.omega0_coeff(x), cd.reeb(x)) + 1.0) < 1e-12);
      Eigen::MatrixXcd fr = cd.frame10(x);
      for (int c = 0; c < fr.cols(); ++c)
        CHECK(std::abs(ContactData::pair_real(cd.omega0_coeff(x), fr.col(c))) < 1e-10);
    }
  }
}

TEST_CASE("finite-difference exterior derivative recovers the closed-form Levi form") {
  for (auto w : {std::vector<int>{1, 1}, std::vector<int>{1, 2}}) {
    auto a = WeightedAction::make(w);
    ContactData cd{a};
    Rng rng{11};
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXcd x = pt(rng.next_cgaussian(), rng.next_cgaussian());
      Eigen::MatrixXcd L = cd.levi_fd(x, 1e-5);
      Eigen::MatrixXcd Lx = cd.levi_exact(x);
      CHECK((L - Lx).cwiseAbs().maxCoeff() < 1e-7);
      // positive definiteness on the visible chart
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Lx);
      CHECK(es.eigenvalues().minCoeff() > 0);
    }
  }
}

TEST_CASE("levi pairing integral of 1 freezes to known constants") {
  QuadratureGrid g = build_sphere_grid(1, 20);
  auto one = [](const Eigen::VectorXcd&) { return cplx(1, 0); };
  auto a11 = WeightedAction::make({1, 1});
  CHECK(std::abs(levi_pairing_integral(a11, g, one).real() - 2 * M_PI) < 1e-10);
  auto a12 = WeightedAction::make({1, 2});
  CHECK(std::abs(levi_pairing_integral(a12, g, one).real() - M_PI) < 1e-10);
}

TEST_CASE("levi pairing integral is action invariant") {
  QuadratureGrid g = build_sphere_grid(1, 20);
  auto a = WeightedAction::make({1, 2});
  auto f = [](const Eigen::VectorXcd& z) { return cplx(std::norm(z[0]), 0); };
  auto frot = [&](const Eigen::VectorXcd& z) {
    return cplx(std::norm((a.act(0.9, z))[0]), 0);
  };
  CHECK(std::abs(levi_pairing_integral(a, g, f) - levi_pairing_integral(a, g, frot)) <
        1e-10);
}
