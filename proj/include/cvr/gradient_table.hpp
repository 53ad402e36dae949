#ifndef CVR_GRADIENT_TABLE_HPP
#define CVR_GRADIENT_TABLE_HPP

#include <Eigen/Core>
#include <vector>

#include "cvr/problem.hpp"

namespace cvr {

enum class TableMode { FullVector, ScalarCompact };

// Per-sample storage of the most recently computed gradient plus its
// average. FullVector keeps the complete regularized gradient vector per
// slot. ScalarCompact keeps one scalar c_j per slot and treats the
// ell-2 term as evaluated at the current iterate, where it cancels between
// the stale record and the average; the two modes coincide when lambda = 0.
class GradientTable {
 public:
  GradientTable(TableMode mode, Eigen::Index slots, Eigen::Index dim);

  TableMode mode() const { return mode_; }
  Eigen::Index slots() const { return slots_; }
  bool ready() const { return unwritten_ == 0; }

  // Overwrites slot with the gradient of sample `sample` at x;
  // coeff = grad_coeff(x, sample), computed by the caller.
  void store(const Problem& p, Eigen::Index slot, Eigen::Index sample,
             double coeff, const Eigen::VectorXd& x);

  // out += weight * (grad_sample(x) - stored[slot]), fresh coeff supplied.
  void add_fresh_minus_stale(const Problem& p, Eigen::Index slot,
                             Eigen::Index sample, double coeff,
                             const Eigen::VectorXd& x, double weight,
                             Eigen::VectorXd& out) const;

  // v = gbar in this table's representation, lifted to a full gradient
  // baseline at x (compact mode folds the 2*lambda*x term in here).
  void start_direction(const Problem& p, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& gbar, Eigen::VectorXd& v) const;

  // accum += inv_count * grad_sample(x); used for the per-epoch running
  // average of freshly computed gradients.
  void accum_fresh(const Problem& p, Eigen::Index sample, double coeff,
                   const Eigen::VectorXd& x, double inv_count,
                   Eigen::VectorXd& accum) const;

  // Recomputes the stored average in ascending slot order. slot_samples
  // maps slots to sample indices when they differ (shard-local tables).
  void rebuild_average(const Problem& p,
                       const std::vector<Eigen::Index>* slot_samples = nullptr);

  const Eigen::VectorXd& average() const { return avg_; }
  void set_average(const Eigen::VectorXd& g) { avg_ = g; }

  // Sum of the stored gradients (FullVector only); the telescoped epoch
  // update equals eta times this.
  Eigen::VectorXd stored_sum() const;

  const MatrixRM& rows() const { return vecs_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

 private:
  TableMode mode_;
  Eigen::Index slots_;
  MatrixRM vecs_;           // FullVector: slots x dim
  Eigen::VectorXd coeffs_;  // ScalarCompact: slots
  Eigen::VectorXd avg_;
  std::vector<char> written_;
  Eigen::Index unwritten_;
};

// v_i = grad_i(x) - stored_i + average; the mean of v_i over all i equals
// the full gradient exactly whenever average == mean of stored records.
// Requires a fully initialized table with slots == n and slot == sample.
Eigen::VectorXd corrected_gradient(const GradientTable& table, const Problem& p,
                                   const Eigen::VectorXd& x, Eigen::Index i);

}  // namespace cvr

#endif  // CVR_GRADIENT_TABLE_HPP
