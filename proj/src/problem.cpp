#include "cvr/problem.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace cvr {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

Problem::Problem(const Dataset& data, LossKind kind, double lambda)
    : data_(&data), kind_(kind), lambda_(lambda) {
  if (lambda < 0.0) throw std::invalid_argument("Problem: lambda >= 0");
  if (data.size() < 1 || data.dim() < 1)
    throw std::invalid_argument("Problem: dataset must have n, d >= 1");
  if (!data.features.allFinite() || !data.labels.allFinite())
    throw std::invalid_argument("Problem: dataset entries must be finite");
  if (kind == LossKind::Logistic &&
      !(data.labels.array() == 1.0 || data.labels.array() == -1.0).all())
    throw std::invalid_argument("Problem: logistic labels must be +1/-1");
  max_row_sq_ = data.features.rowwise().squaredNorm().maxCoeff();
}

void Problem::check_args(const Eigen::VectorXd& x, Eigen::Index i) const {
  if (i < 0 || i >= size())
    throw std::out_of_range("Problem: sample index out of range");
  if (x.size() != dim())
    throw std::invalid_argument("Problem: x has wrong dimension");
  if (!x.allFinite()) throw std::domain_error("Problem: x must be finite");
}

double Problem::loss_value(const Eigen::VectorXd& x, Eigen::Index i) const {
  check_args(x, i);
  const double margin = data_->features.row(i).dot(x);
  const double reg = lambda_ * x.squaredNorm();
  if (kind_ == LossKind::Logistic)
    return softplus(data_->labels[i] * margin) + reg;
  const double r = margin - data_->labels[i];
  return r * r + reg;
}

double Problem::grad_coeff(const Eigen::VectorXd& x, Eigen::Index i) const {
  check_args(x, i);
  const double margin = data_->features.row(i).dot(x);
  if (kind_ == LossKind::Logistic) {
    const double b = data_->labels[i];
    return sigmoid(b * margin) * b;
  }
  return 2.0 * (margin - data_->labels[i]);
}

Eigen::VectorXd Problem::loss_gradient(const Eigen::VectorXd& x,
                                       Eigen::Index i) const {
  const double c = grad_coeff(x, i);
  Eigen::VectorXd g = c * data_->features.row(i).transpose();
  g += (2.0 * lambda_) * x;
  return g;
}

Eigen::VectorXd Problem::full_gradient(const Eigen::VectorXd& x) const {
  check_args(x, 0);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
  for (Eigen::Index i = 0; i < size(); ++i)
    g += grad_coeff(x, i) * data_->features.row(i).transpose();
  g /= static_cast<double>(size());
  g += (2.0 * lambda_) * x;
  return g;
}

double Problem::full_value(const Eigen::VectorXd& x) const {
  check_args(x, 0);
  double acc = 0.0;
  const double reg = lambda_ * x.squaredNorm();
  if (kind_ == LossKind::Logistic) {
    for (Eigen::Index i = 0; i < size(); ++i)
      acc += softplus(data_->labels[i] * data_->features.row(i).dot(x));
  } else {
    for (Eigen::Index i = 0; i < size(); ++i) {
      const double r = data_->features.row(i).dot(x) - data_->labels[i];
      acc += r * r;
    }
  }
  return acc / static_cast<double>(size()) + reg;
}

SmoothnessConstants Problem::smoothness_constants(bool tight_mu) const {
  SmoothnessConstants out;
  out.L = (kind_ == LossKind::Logistic ? 0.25 : 2.0) * max_row_sq_ +
          2.0 * lambda_;
  out.mu = 2.0 * lambda_;
  if (tight_mu && kind_ == LossKind::Ridge) {
    // Hessian of the average is (2/n) A^T A + 2 lambda I.
    Eigen::MatrixXd gram = data_->features.transpose() * data_->features;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram,
                                                       Eigen::EigenvaluesOnly);
    const double lmin = std::max(0.0, eig.eigenvalues().minCoeff());
    out.mu += 2.0 * lmin / static_cast<double>(size());
  }
  if (out.mu <= 0.0)
    throw std::domain_error(
        "smoothness_constants: not strongly convex under cheap bound");
  return out;
}

}  // namespace cvr
