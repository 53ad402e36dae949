#include <Eigen/Dense>
#include <cmath>

#include "cvr/problem.hpp"
#include "cvr/rng.hpp"
#include "doctest.h"

using namespace cvr;

namespace {

Dataset single_sample(std::initializer_list<double> row, double label,
                      DataKind kind) {
  Dataset ds;
  ds.features.resize(1, static_cast<Eigen::Index>(row.size()));
  Eigen::Index j = 0;
  for (double v : row) ds.features(0, j++) = v;
  ds.labels.resize(1);
  ds.labels[0] = label;
  ds.kind_hint = kind;
  return ds;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd x(2);
  x << a, b;
  return x;
}

}  // namespace

TEST_CASE("logistic loss at the origin is log 2") {
  const Dataset ds = single_sample({1.0, 0.0}, 1.0, DataKind::Classification);
  const Problem p(ds, LossKind::Logistic, 0.0);
  CHECK(p.loss_value(vec2(0, 0), 0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("ridge loss at the origin") {
  const Dataset ds = single_sample({1.0, 0.0}, 2.0, DataKind::Regression);
  const Problem p(ds, LossKind::Ridge, 0.0);
  CHECK(p.loss_value(vec2(0, 0), 0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("logistic loss with regularizer matches scalar arithmetic") {
  const Dataset ds = single_sample({1.0, 1.0}, -1.0, DataKind::Classification);
  const Problem p(ds, LossKind::Logistic, 1e-4);
  const Eigen::VectorXd x = vec2(0.3, -0.2);
  // independent scalar evaluation: margin b a^T x = -0.1, reg = 1e-4 * 0.13
  const double expected = std::log(1.0 + std::exp(-0.1)) + 1e-4 * 0.13;
  CHECK(p.loss_value(x, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("logistic gradient at zero margin") {
  const Dataset ds = single_sample({1.0, 0.0}, 1.0, DataKind::Classification);
  const Problem p(ds, LossKind::Logistic, 0.0);
  const Eigen::VectorXd g = p.loss_gradient(vec2(0, 0), 0);
  CHECK(g[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g[1] == 0.0);
}

TEST_CASE("ridge gradient at the origin") {
  const Dataset ds = single_sample({1.0, 0.0}, 2.0, DataKind::Regression);
  const Problem p(ds, LossKind::Ridge, 0.0);
  const Eigen::VectorXd g = p.loss_gradient(vec2(0, 0), 0);
  CHECK(g[0] == doctest::Approx(-4.0).epsilon(1e-14));
  CHECK(g[1] == 0.0);
}

TEST_CASE("softplus and sigmoid stay finite at extreme arguments") {
  CHECK(std::isfinite(softplus(1000.0)));
  CHECK(softplus(1000.0) == doctest::Approx(1000.0));
  CHECK(softplus(-1000.0) == doctest::Approx(0.0));
  CHECK(sigmoid(1000.0) == doctest::Approx(1.0));
  CHECK(sigmoid(-1000.0) == doctest::Approx(0.0));
}

TEST_CASE("errors: bad index and non-finite x") {
  const Dataset ds = single_sample({1.0, 0.0}, 1.0, DataKind::Classification);
  const Problem p(ds, LossKind::Logistic, 0.0);
  CHECK_THROWS_AS(p.loss_value(vec2(0, 0), 1), std::out_of_range);
  CHECK_THROWS_AS(p.loss_value(vec2(0, 0), -1), std::out_of_range);
  Eigen::VectorXd bad = vec2(0, 0);
  bad[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(p.loss_gradient(bad, 0), std::domain_error);
}

TEST_CASE("full gradient equals the single component for n=1") {
  const Dataset ds = single_sample({0.3, -0.7}, 1.0, DataKind::Classification);
  const Problem p(ds, LossKind::Logistic, 1e-3);
  const Eigen::VectorXd x = vec2(0.4, 0.5);
  CHECK((p.full_gradient(x) - p.loss_gradient(x, 0)).norm() <= 1e-15);
}

TEST_CASE("ridge full gradient with identity design is (2/n) x") {
  Dataset ds;
  const Eigen::Index n = 4;
  ds.features = MatrixRM::Identity(n, n);
  ds.labels = Eigen::VectorXd::Zero(n);
  const Problem p(ds, LossKind::Ridge, 0.0);
  Eigen::VectorXd x(n);
  x << 1.0, -2.0, 3.0, 0.5;
  const Eigen::VectorXd g = p.full_gradient(x);
  CHECK((g - (2.0 / n) * x).lpNorm<Eigen::Infinity>() <= 1e-15);
}

TEST_CASE("full gradient matches dense linear-algebra oracle on random ridge") {
  const auto gen = generate_regression(50, 5, 1.0, 17);
  const Problem p(gen.data, LossKind::Ridge, 1e-4);
  Xoshiro256ss rng(4);
  NormalSampler normal(rng);
  Eigen::VectorXd x(5);
  for (auto& v : x.reshaped()) v = normal.next();
  const auto& A = gen.data.features;
  const Eigen::VectorXd oracle =
      (2.0 / 50.0) * (A.transpose() * (A * x - gen.data.labels)) + 2e-4 * x;
  CHECK((p.full_gradient(x) - oracle).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("full gradient equals the mean of component gradients") {
  const Dataset ds = generate_classification(200, 6, 3);
  const Problem p(ds, LossKind::Logistic, 1e-4);
  Xoshiro256ss rng(8);
  NormalSampler normal(rng);
  Eigen::VectorXd x(6);
  for (auto& v : x.reshaped()) v = normal.next();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(6);
  for (Eigen::Index i = 0; i < 200; ++i) mean += p.loss_gradient(x, i);
  mean /= 200.0;
  CHECK((p.full_gradient(x) - mean).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("scalar coefficient reconstructs the gradient") {
  const Dataset cls = generate_classification(40, 3, 6);
  const auto reg = generate_regression(40, 3, 1.0, 6);
  for (const Problem p : {Problem(cls, LossKind::Logistic, 1e-4),
                          Problem(reg.data, LossKind::Ridge, 1e-4)}) {
    Xoshiro256ss rng(10);
    NormalSampler normal(rng);
    for (int t = 0; t < 50; ++t) {
      Eigen::VectorXd x(3);
      for (auto& v : x.reshaped()) v = normal.next();
      const Eigen::Index i = static_cast<Eigen::Index>(rng.below(40));
      const Eigen::VectorXd rebuilt =
          p.grad_coeff(x, i) * p.data().features.row(i).transpose() +
          2.0 * p.lambda() * x;
      CHECK((rebuilt - p.loss_gradient(x, i)).lpNorm<Eigen::Infinity>() <= 1e-14);
    }
  }
}

TEST_CASE("scalar coefficient spot values") {
  const Dataset cls = single_sample({1.0, 0.0}, 1.0, DataKind::Classification);
  const Problem pl(cls, LossKind::Logistic, 0.0);
  CHECK(pl.grad_coeff(vec2(0, 0), 0) == doctest::Approx(0.5));
  const Dataset reg = single_sample({1.0, 0.0}, 2.0, DataKind::Regression);
  const Problem pr(reg, LossKind::Ridge, 0.0);
  CHECK(pr.grad_coeff(vec2(0, 0), 0) == doctest::Approx(-4.0));
}

TEST_CASE("smoothness constants: ridge single sample") {
  const Dataset ds = single_sample({1.0, 0.0}, 0.0, DataKind::Regression);
  const Problem p(ds, LossKind::Ridge, 0.01);
  const auto c = p.smoothness_constants();
  CHECK(c.L == doctest::Approx(2.02).epsilon(1e-14));
  CHECK(c.mu == doctest::Approx(0.02).epsilon(1e-14));
}

TEST_CASE("smoothness constants: logistic lambda=0 cheap bound errors") {
  const Dataset ds = single_sample({2.0, 0.0}, 1.0, DataKind::Classification);
  const Problem p(ds, LossKind::Logistic, 0.0);
  CHECK_THROWS_AS(p.smoothness_constants(), std::domain_error);
}

TEST_CASE("smoothness constants: tight ridge bound via eigenvalues") {
  Dataset ds;
  ds.features = MatrixRM::Identity(3, 3);
  ds.labels = Eigen::VectorXd::Zero(3);
  const Problem p(ds, LossKind::Ridge, 1e-4);
  const auto c = p.smoothness_constants(true);
  CHECK(c.mu == doctest::Approx(2e-4 + 2.0 / 3.0).epsilon(1e-12));
  CHECK(c.L >= c.mu);
}

TEST_CASE("sampled Lipschitz and strong-convexity properties hold") {
  const Dataset cls = generate_classification(60, 4, 11);
  const auto reg = generate_regression(60, 4, 1.0, 11);
  for (const Problem p : {Problem(cls, LossKind::Logistic, 1e-4),
                          Problem(reg.data, LossKind::Ridge, 1e-4)}) {
    const auto c = p.smoothness_constants();
    Xoshiro256ss rng(21);
    NormalSampler normal(rng);
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd x(4), y(4);
      for (auto& v : x.reshaped()) v = normal.next();
      for (auto& v : y.reshaped()) v = normal.next();
      const Eigen::Index i = static_cast<Eigen::Index>(rng.below(60));
      const double gap =
          (p.loss_gradient(x, i) - p.loss_gradient(y, i)).norm();
      CHECK(gap <= c.L * (x - y).norm() * (1.0 + 1e-12) + 1e-12);
      const double lower = p.loss_value(y, i) +
                           p.loss_gradient(y, i).dot(x - y) +
                           0.5 * c.mu * (x - y).squaredNorm();
      CHECK(p.loss_value(x, i) >= lower - 1e-10);
    }
  }
}

TEST_CASE("logistic problems require +1/-1 labels") {
  const Dataset ds = single_sample({1.0}, 2.0, DataKind::Regression);
  CHECK_THROWS_AS(Problem(ds, LossKind::Logistic, 0.0), std::invalid_argument);
}
