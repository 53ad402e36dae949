#ifndef CVR_PROBLEM_HPP
#define CVR_PROBLEM_HPP

#include <Eigen/Core>

#include "cvr/dataset.hpp"

namespace cvr {

enum class LossKind { Logistic, Ridge };

struct SmoothnessConstants {
  double L = 0.0;   // per-component Lipschitz gradient bound
  double mu = 0.0;  // strong convexity lower bound, L >= mu > 0
};

// Regularized empirical risk with per-sample terms
//   logistic: f_i(x) = log(1 + exp(b_i a_i^T x)) + lambda ||x||^2
//   ridge:    f_i(x) = (a_i^T x - b_i)^2 + lambda ||x||^2
// The sign inside the logistic exponential is +b_i a_i^T x; the label
// convention then decides which class drives the loss down.
class Problem {
 public:
  Problem(const Dataset& data, LossKind kind, double lambda);

  LossKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  Eigen::Index size() const { return data_->size(); }
  Eigen::Index dim() const { return data_->dim(); }
  const Dataset& data() const { return *data_; }

  double loss_value(const Eigen::VectorXd& x, Eigen::Index i) const;
  Eigen::VectorXd loss_gradient(const Eigen::VectorXd& x, Eigen::Index i) const;

  // Scalar c_i(x) with unregularized gradient c_i(x) * a_i, so a stored
  // gradient record can be one number per sample.
  double grad_coeff(const Eigen::VectorXd& x, Eigen::Index i) const;

  // Mean of the component gradients, accumulated in ascending index order.
  Eigen::VectorXd full_gradient(const Eigen::VectorXd& x) const;
  double full_value(const Eigen::VectorXd& x) const;

  // Safe bounds: logistic L = max_i ||a_i||^2 / 4 + 2 lambda, ridge
  // L = 2 max_i ||a_i||^2 + 2 lambda, mu = 2 lambda. With tight_mu, ridge
  // improves mu to 2 lambda + 2 lambda_min(A^T A)/n; logistic has no
  // tighter bound and keeps 2 lambda. Throws std::domain_error when the
  // resulting mu is zero.
  SmoothnessConstants smoothness_constants(bool tight_mu = false) const;

 private:
  void check_args(const Eigen::VectorXd& x, Eigen::Index i) const;

  const Dataset* data_;
  LossKind kind_;
  double lambda_;
  double max_row_sq_;
};

// 1/(1+exp(-t)) evaluated without overflow.
double sigmoid(double t);
// log(1+exp(t)) evaluated without overflow.
double softplus(double t);

}  // namespace cvr

#endif  // CVR_PROBLEM_HPP
