#include <Eigen/Dense>

#include "cvr/gradient_table.hpp"
#include "cvr/rng.hpp"
#include "doctest.h"

using namespace cvr;

namespace {

// Fills every slot with the gradient at points[i] and rebuilds the average.
void fill_table(GradientTable& table, const Problem& p,
                const std::vector<Eigen::VectorXd>& points) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const auto& z = points[static_cast<std::size_t>(i)];
    table.store(p, i, i, p.grad_coeff(z, i), z);
  }
  table.rebuild_average(p);
}

std::vector<Eigen::VectorXd> random_points(Eigen::Index n, Eigen::Index d,
                                           std::uint64_t seed) {
  Xoshiro256ss rng(seed);
  NormalSampler normal(rng);
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n));
  for (auto& z : pts) {
    z.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) z[j] = normal.next();
  }
  return pts;
}

}  // namespace

TEST_CASE("uninitialized table refuses corrections") {
  const Dataset ds = generate_classification(10, 3, 1);
  const Problem p(ds, LossKind::Logistic, 1e-4);
  GradientTable table(TableMode::FullVector, 10, 3);
  CHECK_THROWS_AS(corrected_gradient(table, p, Eigen::VectorXd::Zero(3), 0),
                  std::logic_error);
}

TEST_CASE("stale point equal to the query point cancels to the average") {
  const Dataset ds = generate_classification(20, 3, 2);
  const Problem p(ds, LossKind::Logistic, 1e-4);
  GradientTable table(TableMode::FullVector, 20, 3);
  Eigen::VectorXd x(3);
  x << 0.2, -0.1, 0.4;
  fill_table(table, p, std::vector<Eigen::VectorXd>(20, x));
  for (Eigen::Index i = 0; i < 20; ++i) {
    const Eigen::VectorXd v = corrected_gradient(table, p, x, i);
    CHECK((v - table.average()).lpNorm<Eigen::Infinity>() <= 1e-13);
  }
}

TEST_CASE("fixed point: table at the optimum gives a zero direction") {
  const auto gen = generate_regression(30, 4, 0.5, 3);
  const Problem p(gen.data, LossKind::Ridge, 1e-2);
  // minimizer via normal equations
  const auto& A = gen.data.features;
  Eigen::MatrixXd H = (2.0 / 30.0) * (A.transpose() * A);
  H.diagonal().array() += 2e-2;
  const Eigen::VectorXd xstar =
      H.ldlt().solve((2.0 / 30.0) * (A.transpose() * gen.data.labels));
  GradientTable table(TableMode::FullVector, 30, 4);
  fill_table(table, p, std::vector<Eigen::VectorXd>(30, xstar));
  for (Eigen::Index i = 0; i < 30; ++i)
    CHECK(corrected_gradient(table, p, xstar, i).norm() <= 1e-12);
}

TEST_CASE("exhaustive mean of corrections equals the full gradient") {
  const Dataset ds = generate_classification(100, 5, 4);
  const Problem p(ds, LossKind::Logistic, 1e-4);
  for (auto mode : {TableMode::FullVector, TableMode::ScalarCompact}) {
    GradientTable table(mode, 100, 5);
    fill_table(table, p, random_points(100, 5, 55));
    const auto xs = random_points(1, 5, 56);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(5);
    for (Eigen::Index i = 0; i < 100; ++i)
      mean += corrected_gradient(table, p, xs[0], i);
    mean /= 100.0;
    CHECK((mean - p.full_gradient(xs[0])).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("full-vector average matches a straightforward mean after rebuild") {
  const Dataset ds = generate_classification(50, 4, 7);
  const Problem p(ds, LossKind::Logistic, 1e-3);
  GradientTable table(TableMode::FullVector, 50, 4);
  const auto pts = random_points(50, 4, 70);
  fill_table(table, p, pts);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  for (Eigen::Index i = 0; i < 50; ++i)
    mean += p.loss_gradient(pts[static_cast<std::size_t>(i)], i);
  mean /= 50.0;
  CHECK((table.average() - mean).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("stored_sum equals slots times average") {
  const Dataset ds = generate_classification(40, 3, 8);
  const Problem p(ds, LossKind::Logistic, 1e-4);
  GradientTable table(TableMode::FullVector, 40, 3);
  fill_table(table, p, random_points(40, 3, 81));
  CHECK((table.stored_sum() / 40.0 - table.average()).lpNorm<Eigen::Infinity>() <=
        1e-12);
}

TEST_CASE("ready flips only after every slot is written") {
  const Dataset ds = generate_classification(4, 2, 9);
  const Problem p(ds, LossKind::Logistic, 0.0);
  GradientTable table(TableMode::ScalarCompact, 4, 2);
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(!table.ready());
    table.store(p, i, i, p.grad_coeff(x, i), x);
    table.store(p, i, i, p.grad_coeff(x, i), x);  // rewrite does not double count
  }
  CHECK(table.ready());
}
