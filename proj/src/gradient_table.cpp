#include "cvr/gradient_table.hpp"

#include <stdexcept>

namespace cvr {

GradientTable::GradientTable(TableMode mode, Eigen::Index slots,
                             Eigen::Index dim)
    : mode_(mode),
      slots_(slots),
      avg_(Eigen::VectorXd::Zero(dim)),
      written_(static_cast<std::size_t>(slots), 0),
      unwritten_(slots) {
  if (slots < 1 || dim < 1)
    throw std::invalid_argument("GradientTable: slots, dim >= 1");
  if (mode == TableMode::FullVector)
    vecs_ = MatrixRM::Zero(slots, dim);
  else
    coeffs_ = Eigen::VectorXd::Zero(slots);
}

void GradientTable::store(const Problem& p, Eigen::Index slot,
                          Eigen::Index sample, double coeff,
                          const Eigen::VectorXd& x) {
  if (mode_ == TableMode::FullVector) {
    vecs_.row(slot) =
        coeff * p.data().features.row(sample) + (2.0 * p.lambda()) * x.transpose();
  } else {
    coeffs_[slot] = coeff;
  }
  if (!written_[static_cast<std::size_t>(slot)]) {
    written_[static_cast<std::size_t>(slot)] = 1;
    --unwritten_;
  }
}

void GradientTable::add_fresh_minus_stale(const Problem& p, Eigen::Index slot,
                                          Eigen::Index sample, double coeff,
                                          const Eigen::VectorXd& x,
                                          double weight,
                                          Eigen::VectorXd& out) const {
  if (mode_ == TableMode::FullVector) {
    out += weight * (coeff * p.data().features.row(sample).transpose() +
                     (2.0 * p.lambda()) * x - vecs_.row(slot).transpose());
  } else {
    // The 2*lambda*x terms of the fresh and the stale record cancel.
    out += (weight * (coeff - coeffs_[slot])) *
           p.data().features.row(sample).transpose();
  }
}

void GradientTable::start_direction(const Problem& p, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& gbar,
                                    Eigen::VectorXd& v) const {
  v = gbar;
  if (mode_ == TableMode::ScalarCompact) v += (2.0 * p.lambda()) * x;
}

void GradientTable::accum_fresh(const Problem& p, Eigen::Index sample,
                                double coeff, const Eigen::VectorXd& x,
                                double inv_count,
                                Eigen::VectorXd& accum) const {
  if (mode_ == TableMode::FullVector) {
    accum += inv_count * (coeff * p.data().features.row(sample).transpose() +
                          (2.0 * p.lambda()) * x);
  } else {
    accum += (inv_count * coeff) * p.data().features.row(sample).transpose();
  }
}

void GradientTable::rebuild_average(
    const Problem& p, const std::vector<Eigen::Index>* slot_samples) {
  if (mode_ == TableMode::FullVector) {
    avg_.setZero();
    for (Eigen::Index s = 0; s < slots_; ++s) avg_ += vecs_.row(s).transpose();
    avg_ /= static_cast<double>(slots_);
    return;
  }
  avg_.setZero();
  for (Eigen::Index s = 0; s < slots_; ++s) {
    const Eigen::Index sample = slot_samples ? (*slot_samples)[static_cast<std::size_t>(s)] : s;
    avg_ += coeffs_[s] * p.data().features.row(sample).transpose();
  }
  avg_ /= static_cast<double>(slots_);
}

Eigen::VectorXd GradientTable::stored_sum() const {
  if (mode_ != TableMode::FullVector)
    throw std::logic_error("stored_sum: full-vector tables only");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(vecs_.cols());
  for (Eigen::Index s = 0; s < slots_; ++s) sum += vecs_.row(s).transpose();
  return sum;
}

Eigen::VectorXd corrected_gradient(const GradientTable& table, const Problem& p,
                                   const Eigen::VectorXd& x, Eigen::Index i) {
  if (!table.ready())
    throw std::logic_error("corrected_gradient: gradient table not initialized");
  if (table.slots() != p.size())
    throw std::invalid_argument("corrected_gradient: table does not cover problem");
  Eigen::VectorXd v(x.size());
  table.start_direction(p, x, table.average(), v);
  table.add_fresh_minus_stale(p, i, i, p.grad_coeff(x, i), x, 1.0, v);
  return v;
}

}  // namespace cvr
