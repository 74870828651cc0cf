#include "regpath/core.hpp"
#include "regpath/prox.hpp"

#include "../support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace regpath;

TEST_CASE("archive indices count per direction") {
  testing::QuadraticProblem q(Eigen::VectorXd::Ones(2), 1.0);
  FrontArchive a;
  a.append(evaluate(q, Eigen::VectorXd::Zero(2)), Direction::initial);
  a.append(evaluate(q, Eigen::VectorXd::Ones(2)), Direction::toward_loss);
  a.append(evaluate(q, Eigen::VectorXd::Ones(2)), Direction::toward_sparsity);
  a.append(evaluate(q, Eigen::VectorXd::Ones(2)), Direction::toward_loss);
  REQUIRE(a.size() == 4);
  CHECK(a[0].index == 0);
  CHECK(a[1].index == 0);
  CHECK(a[2].index == 0);
  CHECK(a[3].index == 1);
  CHECK(a[3].direction == Direction::toward_loss);
}

TEST_CASE("evaluate fills both objectives") {
  testing::QuadraticProblem q(Eigen::Vector2d(1.0, -2.0), 0.5);
  const auto p = evaluate(q, Eigen::Vector2d(0.0, 1.0));
  CHECK(p.f1_train == doctest::Approx(0.5 * (1.0 + 9.0)));
  CHECK(p.l1_unscaled == doctest::Approx(1.0));
  CHECK(p.g2 == doctest::Approx(0.5));
  CHECK_FALSE(p.acc_train.has_value());
}

TEST_CASE("dominance is strict in one objective") {
  ParetoPoint p, q;
  p.f1_train = 1.0;
  p.g2 = 1.0;
  q = p;
  CHECK_FALSE(dominates(p, q));
  q.g2 = 2.0;
  CHECK(dominates(p, q));
  CHECK_FALSE(dominates(q, p));
  q.f1_train = 0.5;
  CHECK_FALSE(dominates(p, q));
  CHECK_FALSE(dominates(q, p));
}

TEST_CASE("BatchSpec rows and sizes") {
  const auto full = BatchSpec::full();
  CHECK(full.is_full());
  CHECK(full.size(17) == 17);
  BatchSpec b({3, 1, 4});
  CHECK_FALSE(b.is_full());
  CHECK(b.size(17) == 3);
  CHECK(b.rows()[2] == 4);
}

TEST_CASE("uniform init is seeded and bounded") {
  const auto a = uniform_init(1000, 0.25, 7);
  const auto b = uniform_init(1000, 0.25, 7);
  const auto c = uniform_init(1000, 0.25, 8);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.cwiseAbs().maxCoeff() <= 0.25);
  CHECK(std::abs(a.mean()) < 0.03);
}

TEST_CASE("direction names round-trip") {
  for (auto d : {Direction::initial, Direction::toward_loss, Direction::toward_sparsity, Direction::ws})
    CHECK(direction_from_string(to_string(d)) == d);
  CHECK_FALSE(direction_from_string("sideways").has_value());
}

TEST_CASE("dimension and finiteness checks") {
  CHECK_THROWS_AS(require_dim(Eigen::VectorXd::Zero(3), 4, "theta"), DimensionError);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(3);
  v(1) = std::nan("");
  CHECK_THROWS_AS(require_finite(v, "theta"), NonFiniteError);
}

TEST_CASE("soft threshold examples") {
  Eigen::VectorXd v(5);
  v << 3.0, -3.0, 0.5, -1.0, 1.0;
  const auto out = soft_threshold(v, 1.0);
  CHECK(out(0) == 2.0);
  CHECK(out(1) == -2.0);
  CHECK(out(2) == 0.0);
  // |v| == c maps to exactly zero
  CHECK(out(3) == 0.0);
  CHECK(out(4) == 0.0);
  CHECK(soft_threshold(v, 0.0) == v);
  CHECK_THROWS(soft_threshold(v, -0.1));
}

TEST_CASE("prox matches a grid minimizer") {
  // argmin_x ½(x - v)² + c|x| by dense search
  for (double v : {-2.3, -0.4, 0.0, 0.7, 1.9}) {
    const double c = 0.6;
    double best = 1e300, arg = 0;
    for (int i = -40000; i <= 40000; ++i) {
      const double x = i * 1e-4;
      const double f = 0.5 * (x - v) * (x - v) + c * std::abs(x);
      if (f < best) {
        best = f;
        arg = x;
      }
    }
    Eigen::VectorXd one(1);
    one << v;
    CHECK(std::abs(prox_scaled_l1(one, {.weight = 2.0, .step = 0.3})(0) - arg) <= 1e-4);
  }
}

TEST_CASE("prox is nonexpansive") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd x(6), y(6);
    for (int i = 0; i < 6; ++i) {
      x(i) = n(rng);
      y(i) = n(rng);
    }
    const double c = std::abs(n(rng));
    CHECK((soft_threshold(x, c) - soft_threshold(y, c)).norm() <= (x - y).norm() + 1e-15);
  }
}
