#ifndef CVR_SRC_EPOCH_LOOPS_HPP
#define CVR_SRC_EPOCH_LOOPS_HPP

// Inner iteration loops shared by the single-worker optimizers and the
// simulated cluster. A cluster of one worker reproduces the sequential
// trajectories exactly because both paths execute these functions.

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "cvr/gradient_table.hpp"
#include "cvr/optimizers.hpp"
#include "cvr/problem.hpp"
#include "cvr/rng.hpp"

namespace cvr::detail {

struct Diverged {};  // converted to divergence_error by the runners

inline void guard(const Eigen::VectorXd& x) {
  if (x.squaredNorm() > kDivergenceNorm * kDivergenceNorm) throw Diverged{};
}

struct WorkerCore {
  WorkerCore(int id, std::vector<Eigen::Index> samples_in, Eigen::Index dim,
             std::uint64_t seed, std::uint64_t salt)
      : id(id),
        samples(std::move(samples_in)),
        x(Eigen::VectorXd::Zero(dim)),
        gbar(Eigen::VectorXd::Zero(dim)),
        sampler(sampler_key(seed, salt)),
        seed(seed),
        salt(salt),
        v(dim),
        accum(dim) {}

  Eigen::Index count() const {
    return static_cast<Eigen::Index>(samples.size());
  }

  std::uint64_t next_perm_key() { return permutation_key(seed, salt, epoch++); }

  int id;
  std::vector<Eigen::Index> samples;  // global sample indices, slot-ordered
  Eigen::VectorXd x;
  Eigen::VectorXd gbar;
  std::unique_ptr<GradientTable> table;
  Xoshiro256ss sampler;
  std::uint64_t seed;
  std::uint64_t salt;
  std::uint64_t epoch = 0;  // permutation counter, 0 = initialization pass
  Eigen::VectorXd v, accum;            // scratch
  std::vector<double>* fvals = nullptr;  // optional f(iterate) per table slot
};

// Draws the next slot: from `order` when given, else uniformly.
inline Eigen::Index next_slot(WorkerCore& w, const std::size_t* order,
                              long k) {
  if (order) return static_cast<Eigen::Index>(order[k]);
  return static_cast<Eigen::Index>(
      w.sampler.below(static_cast<std::uint64_t>(w.count())));
}

// Plain SGD steps, one per sample visit. `order` has w.count() entries or
// is null for uniform draws over `iters` steps.
inline void sgd_pass(const Problem& p, WorkerCore& w, double eta, long iters,
                     const std::size_t* order) {
  for (long k = 0; k < iters; ++k) {
    const Eigen::Index slot = next_slot(w, order, k);
    const Eigen::Index sample = w.samples[static_cast<std::size_t>(slot)];
    const double c = p.grad_coeff(w.x, sample);
    w.v = c * p.data().features.row(sample).transpose();
    w.v += (2.0 * p.lambda()) * w.x;
    w.x -= eta * w.v;
    guard(w.x);
  }
}

// Initialization pass: plain SGD over a permutation, storing the gradient
// of each sample at the iterate where it was visited. w.gbar ends as the
// running mean of those gradients.
inline void init_fill_pass(const Problem& p, WorkerCore& w, double eta,
                           const std::size_t* order, double inv_count) {
  GradientTable& table = *w.table;
  w.accum.setZero();
  const long m = w.count();
  for (long k = 0; k < m; ++k) {
    const Eigen::Index slot = static_cast<Eigen::Index>(order[k]);
    const Eigen::Index sample = w.samples[static_cast<std::size_t>(slot)];
    const double c = p.grad_coeff(w.x, sample);
    table.accum_fresh(p, sample, c, w.x, inv_count, w.accum);
    table.store(p, slot, sample, c, w.x);
    if (w.fvals) (*w.fvals)[static_cast<std::size_t>(slot)] = p.full_value(w.x);
    w.v = c * p.data().features.row(sample).transpose();
    w.v += (2.0 * p.lambda()) * w.x;
    w.x -= eta * w.v;
    guard(w.x);
  }
  w.gbar = w.accum;
}

// One epoch of the table-averaged method in permutation order. The fresh
// gradient at the pre-update iterate is accumulated into the next epoch's
// average and overwrites the stored record; gbar stays fixed within the
// epoch and is replaced at the end.
inline void centralvr_epoch(const Problem& p, WorkerCore& w, double eta,
                            const std::size_t* order, double inv_count) {
  GradientTable& table = *w.table;
  w.accum.setZero();
  const long m = w.count();
  for (long k = 0; k < m; ++k) {
    const Eigen::Index slot = static_cast<Eigen::Index>(order[k]);
    const Eigen::Index sample = w.samples[static_cast<std::size_t>(slot)];
    const double c = p.grad_coeff(w.x, sample);
    table.start_direction(p, w.x, w.gbar, w.v);
    table.add_fresh_minus_stale(p, slot, sample, c, w.x, 1.0, w.v);
    table.accum_fresh(p, sample, c, w.x, inv_count, w.accum);
    table.store(p, slot, sample, c, w.x);
    if (w.fvals) (*w.fvals)[static_cast<std::size_t>(slot)] = p.full_value(w.x);
    w.x -= eta * w.v;
    guard(w.x);
  }
  w.gbar = w.accum;
}

// With-replacement variant. Unvisited records persist, so the epoch-end
// average is maintained as the exact mean of the stored records via the
// accumulated (new - old) differences.
inline void centralvr_epoch_uniform(const Problem& p, WorkerCore& w,
                                    double eta, double inv_count) {
  GradientTable& table = *w.table;
  w.accum.setZero();
  const long m = w.count();
  for (long k = 0; k < m; ++k) {
    const Eigen::Index slot = next_slot(w, nullptr, k);
    const Eigen::Index sample = w.samples[static_cast<std::size_t>(slot)];
    const double c = p.grad_coeff(w.x, sample);
    table.start_direction(p, w.x, w.gbar, w.v);
    table.add_fresh_minus_stale(p, slot, sample, c, w.x, 1.0, w.v);
    table.add_fresh_minus_stale(p, slot, sample, c, w.x, inv_count, w.accum);
    table.store(p, slot, sample, c, w.x);
    if (w.fvals) (*w.fvals)[static_cast<std::size_t>(slot)] = p.full_value(w.x);
    w.x -= eta * w.v;
    guard(w.x);
  }
  w.gbar += w.accum;
}

// `iters` steps with the running average updated after every iteration,
// scaled by inv_scale (1/n globally, also under sharding).
inline void saga_block(const Problem& p, WorkerCore& w, double eta, long iters,
                       double inv_scale, const std::size_t* order) {
  GradientTable& table = *w.table;
  for (long k = 0; k < iters; ++k) {
    const Eigen::Index slot = next_slot(w, order, k);
    const Eigen::Index sample = w.samples[static_cast<std::size_t>(slot)];
    const double c = p.grad_coeff(w.x, sample);
    table.start_direction(p, w.x, w.gbar, w.v);
    table.add_fresh_minus_stale(p, slot, sample, c, w.x, 1.0, w.v);
    table.add_fresh_minus_stale(p, slot, sample, c, w.x, inv_scale, w.gbar);
    table.store(p, slot, sample, c, w.x);
    w.x -= eta * w.v;
    guard(w.x);
  }
}

// `iters` snapshot-corrected steps; two gradient evaluations per step.
inline void svrg_block(const Problem& p, WorkerCore& w, double eta, long iters,
                       const Eigen::VectorXd& y,
                       const Eigen::VectorXd& gbar_snap,
                       const std::size_t* order) {
  for (long k = 0; k < iters; ++k) {
    const Eigen::Index slot = next_slot(w, order, k);
    const Eigen::Index sample = w.samples[static_cast<std::size_t>(slot)];
    const double c = p.grad_coeff(w.x, sample);
    const double c_snap = p.grad_coeff(y, sample);
    w.v = gbar_snap;
    w.v += (c - c_snap) * p.data().features.row(sample).transpose();
    w.v += (2.0 * p.lambda()) * (w.x - y);
    w.x -= eta * w.v;
    guard(w.x);
  }
}

}  // namespace cvr::detail

#endif  // CVR_SRC_EPOCH_LOOPS_HPP
