#ifndef CVR_CHECKS_HPP
#define CVR_CHECKS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "cvr/gradient_table.hpp"
#include "cvr/optimizers.hpp"
#include "cvr/problem.hpp"

namespace cvr {

// Contraction factor and Lyapunov weight for the table-averaged method
// under uniform-with-replacement sampling:
//   alpha = max(1 - eta mu, 2 L^2 eta / (mu (1 - 2 L eta)))
//   c     = 2 n eta (1 - 2 L eta)
// valid iff 0 < alpha < 1 and c > 0; eta < eta_max = mu / (2L(L+mu)) is
// sufficient for validity.
struct RateBound {
  double alpha = 0.0;
  double c = 0.0;
  double eta_max = 0.0;
  bool valid = false;
  std::string reason;
};

RateBound rate_bound(const SmoothnessConstants& consts, double eta,
                     Eigen::Index n);

struct CheckReport {
  std::string check;
  long trials = 0;
  long violations = 0;
  double worst_ratio = 0.0;  // max observed LHS/RHS across trials
  bool passed = false;
};

std::string report_to_json(const CheckReport& report);

// E_j ||grad_j(x) - grad_j(x*)||^2 <= 2 L (f(x) - f(x*)), with the
// expectation computed exhaustively over j. `slack` is an absolute
// allowance on the RHS for inexact reference minimizers.
CheckReport check_mean_gradient_gap_bound(const Problem& p,
                                          const Eigen::VectorXd& x_star,
                                          long trials, std::uint64_t seed,
                                          double slack = 0.0);

// ||grad_i(x) - grad_i(x*)||^2 <= (2 L^2 / mu) (f(x) - f(x*)) for every
// sampled (x, i) pair individually.
CheckReport check_pointwise_gradient_gap_bound(const Problem& p,
                                               const Eigen::VectorXd& x_star,
                                               long trials, std::uint64_t seed,
                                               double slack = 0.0);

// (1/n) sum_i corrected_gradient(x, i) == full_gradient(x) to tol,
// computed with compensated summation.
CheckReport check_unbiasedness(const Problem& p, const GradientTable& table,
                               const Eigen::VectorXd& x, double tol = 1e-12);

// Central differences of loss_value against loss_gradient on random (x, i).
CheckReport finite_difference_check(const Problem& p, long trials,
                                    std::uint64_t seed);

struct LyapunovReport {
  RateBound rate;
  std::vector<double> median_ratios;  // per-epoch median of V_{m+1}/V_m
  CheckReport summary;
};

// Runs the table-averaged method under uniform sampling for each seed,
// forms V_m = ||x at start of epoch m+1 - x*||^2 + c (mean_j f(stored
// iterate j) - f(x*)) and asserts the per-epoch median ratio stays below
// alpha + slack. Ridge only (x* from a direct solve). Throws
// std::domain_error when the rate bound is invalid.
LyapunovReport check_lyapunov_contraction(const Problem& p,
                                          const OptConfig& base,
                                          const std::vector<std::uint64_t>& seeds,
                                          long epochs, bool tight_mu = true,
                                          double slack = 0.05);

// Minimizer of the ridge objective by direct solve of the normal equations.
Eigen::VectorXd ridge_minimizer(const Problem& p);

// High-accuracy minimizer for problems without a closed form: a long
// table-averaged run down to target_rel relative gradient norm.
Eigen::VectorXd reference_minimizer(const Problem& p,
                                    double target_rel = 1e-13);

}  // namespace cvr

#endif  // CVR_CHECKS_HPP
