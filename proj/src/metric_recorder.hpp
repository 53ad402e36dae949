#ifndef CVR_SRC_METRIC_RECORDER_HPP
#define CVR_SRC_METRIC_RECORDER_HPP

#include <Eigen/Core>
#include <chrono>
#include <vector>

#include "cvr/optimizers.hpp"
#include "cvr/problem.hpp"
#include "cvr/trace.hpp"

namespace cvr::detail {

// Builds the per-epoch trace. Metric gradients never touch optimizer state
// or its sampling streams; their cost is tallied in metric_evals, separate
// from the algorithm ledger.
class MetricRecorder {
 public:
  MetricRecorder(const Problem& p, const OptConfig& cfg)
      : p_(&p), cfg_(&cfg), t0_(std::chrono::steady_clock::now()) {}

  void baseline(const Eigen::VectorXd& x0) {
    g0_norm_ = p_->full_gradient(x0).norm();
    metric_evals += static_cast<std::uint64_t>(p_->size());
    TraceRecord r;
    r.epoch = 0;
    r.grad_evals = 0;
    r.rel_grad_norm = 1.0;  // by definition
    r.suboptimality = subopt(x0);
    r.virtual_time = 0.0;
    r.wall_time_s = wall();
    records_.push_back(r);
  }

  void record(long epoch, const Eigen::VectorXd& x, std::uint64_t grad_evals,
              double virtual_time) {
    const double gnorm = p_->full_gradient(x).norm();
    metric_evals += static_cast<std::uint64_t>(p_->size());
    TraceRecord r;
    r.epoch = epoch;
    r.grad_evals = grad_evals;
    r.rel_grad_norm = gnorm / g0_norm_;
    r.suboptimality = subopt(x);
    r.virtual_time = virtual_time;
    r.wall_time_s = wall();
    records_.push_back(r);
    if (cfg_->target_rel_grad && r.rel_grad_norm <= *cfg_->target_rel_grad)
      target_hit_ = true;
  }

  bool target_hit() const { return target_hit_; }
  const std::vector<TraceRecord>& records() const { return records_; }
  std::vector<TraceRecord> take() { return std::move(records_); }

  std::uint64_t metric_evals = 0;

 private:
  double subopt(const Eigen::VectorXd& x) {
    if (!cfg_->f_star) return std::numeric_limits<double>::quiet_NaN();
    metric_evals += static_cast<std::uint64_t>(p_->size());
    return p_->full_value(x) - *cfg_->f_star;
  }

  double wall() const {
    if (!cfg_->record_wall_time) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

  const Problem* p_;
  const OptConfig* cfg_;
  double g0_norm_ = 1.0;
  std::chrono::steady_clock::time_point t0_;
  std::vector<TraceRecord> records_;
  bool target_hit_ = false;
};

}  // namespace cvr::detail

#endif  // CVR_SRC_METRIC_RECORDER_HPP
