#include "cvr/optimizers.hpp"

#include <numeric>
#include <stdexcept>

#include "epoch_loops.hpp"
#include "metric_recorder.hpp"

namespace cvr {

const double kDivergenceNorm = 1e10;

namespace {

using detail::MetricRecorder;
using detail::WorkerCore;

void validate(const OptConfig& cfg) {
  if (cfg.eta < 0.0) throw std::invalid_argument("OptConfig: eta must be >= 0");
  if (cfg.epochs < 1) throw std::invalid_argument("OptConfig: epochs >= 1");
  if (cfg.svrg_snapshot_period < 1)
    throw std::invalid_argument("OptConfig: svrg_snapshot_period >= 1");
}

std::vector<Eigen::Index> all_samples(const Problem& p) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(p.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  return idx;
}

RunResult finish(WorkerCore& w, MetricRecorder& rec, std::uint64_t evals) {
  RunResult out;
  out.x = w.x;
  out.trace = rec.take();
  out.grad_evals = evals;
  out.metric_evals = rec.metric_evals;
  return out;
}

[[noreturn]] void rethrow_diverged(WorkerCore& w, MetricRecorder& rec,
                                   std::uint64_t evals) {
  throw divergence_error("iterate norm exceeded 1e10; reduce eta",
                         finish(w, rec, evals));
}

void probe_capture(EpochProbe* probe, const Problem& p, const WorkerCore& w,
                   const std::vector<double>& fvals) {
  if (!probe) return;
  probe->epoch_starts.push_back(w.x);
  probe->stored_sums.push_back(w.table->stored_sum());
  if (probe->track_stored_fvals) {
    double acc = 0.0;
    for (double f : fvals) acc += f;
    probe->stored_fvals_mean.push_back(acc / static_cast<double>(p.size()));
  }
}

}  // namespace

RunResult run_sgd(const Problem& p, const OptConfig& cfg,
                  const Eigen::VectorXd& x0) {
  validate(cfg);
  WorkerCore w(0, all_samples(p), p.dim(), cfg.seed, 0);
  w.x = x0;
  MetricRecorder rec(p, cfg);
  rec.baseline(x0);
  std::uint64_t evals = 0;
  double vtime = 0.0;
  const long n = p.size();
  try {
    for (long e = 1; e <= cfg.epochs; ++e) {
      if (cfg.sampling == Sampling::PermutationPerEpoch) {
        const auto order =
            random_permutation(static_cast<std::size_t>(n), w.next_perm_key());
        detail::sgd_pass(p, w, cfg.eta, n, order.data());
      } else {
        detail::sgd_pass(p, w, cfg.eta, n, nullptr);
      }
      evals += static_cast<std::uint64_t>(n);
      vtime += static_cast<double>(n);
      rec.record(e, w.x, evals, vtime);
      if (rec.target_hit()) break;
    }
  } catch (const detail::Diverged&) {
    rethrow_diverged(w, rec, evals);
  }
  return finish(w, rec, evals);
}

RunResult run_centralvr(const Problem& p, const OptConfig& cfg,
                        const Eigen::VectorXd& x0, EpochProbe* probe) {
  validate(cfg);
  const long n = p.size();
  WorkerCore w(0, all_samples(p), p.dim(), cfg.seed, 0);
  w.x = x0;
  w.table = std::make_unique<GradientTable>(cfg.table_mode, n, p.dim());
  std::vector<double> fvals;
  if (probe && probe->track_stored_fvals) {
    if (cfg.table_mode != TableMode::FullVector)
      throw std::invalid_argument("EpochProbe requires a full-vector table");
    fvals.assign(static_cast<std::size_t>(n), 0.0);
    w.fvals = &fvals;
  } else if (probe) {
    if (cfg.table_mode != TableMode::FullVector)
      throw std::invalid_argument("EpochProbe requires a full-vector table");
  }

  MetricRecorder rec(p, cfg);
  rec.baseline(x0);
  if (probe) probe->epoch_starts.push_back(w.x);
  std::uint64_t evals = 0;
  double vtime = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  try {
    {
      const auto order =
          random_permutation(static_cast<std::size_t>(n), w.next_perm_key());
      detail::init_fill_pass(p, w, cfg.eta, order.data(), inv_n);
      evals += static_cast<std::uint64_t>(n);
      vtime += static_cast<double>(n);
      w.table->set_average(w.gbar);
      probe_capture(probe, p, w, fvals);
    }
    for (long e = 1; e <= cfg.epochs; ++e) {
      if (cfg.sampling == Sampling::PermutationPerEpoch) {
        const auto order =
            random_permutation(static_cast<std::size_t>(n), w.next_perm_key());
        detail::centralvr_epoch(p, w, cfg.eta, order.data(), inv_n);
      } else {
        detail::centralvr_epoch_uniform(p, w, cfg.eta, inv_n);
      }
      evals += static_cast<std::uint64_t>(n);
      vtime += static_cast<double>(n);
      w.table->set_average(w.gbar);
      probe_capture(probe, p, w, fvals);
      rec.record(e, w.x, evals, vtime);
      if (rec.target_hit()) break;
    }
  } catch (const detail::Diverged&) {
    rethrow_diverged(w, rec, evals);
  }
  return finish(w, rec, evals);
}

RunResult run_saga(const Problem& p, const OptConfig& cfg,
                   const Eigen::VectorXd& x0) {
  validate(cfg);
  const long n = p.size();
  WorkerCore w(0, all_samples(p), p.dim(), cfg.seed, 0);
  w.x = x0;
  w.table = std::make_unique<GradientTable>(cfg.table_mode, n, p.dim());
  MetricRecorder rec(p, cfg);
  rec.baseline(x0);
  std::uint64_t evals = 0;
  double vtime = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  try {
    {
      const auto order =
          random_permutation(static_cast<std::size_t>(n), w.next_perm_key());
      detail::init_fill_pass(p, w, cfg.eta, order.data(), inv_n);
      evals += static_cast<std::uint64_t>(n);
      vtime += static_cast<double>(n);
    }
    for (long e = 1; e <= cfg.epochs; ++e) {
      if (cfg.sampling == Sampling::PermutationPerEpoch) {
        const auto order =
            random_permutation(static_cast<std::size_t>(n), w.next_perm_key());
        detail::saga_block(p, w, cfg.eta, n, inv_n, order.data());
      } else {
        detail::saga_block(p, w, cfg.eta, n, inv_n, nullptr);
      }
      evals += static_cast<std::uint64_t>(n);
      vtime += static_cast<double>(n);
      w.table->set_average(w.gbar);
      rec.record(e, w.x, evals, vtime);
      if (rec.target_hit()) break;
    }
  } catch (const detail::Diverged&) {
    rethrow_diverged(w, rec, evals);
  }
  return finish(w, rec, evals);
}

RunResult run_svrg(const Problem& p, const OptConfig& cfg,
                   const Eigen::VectorXd& x0) {
  validate(cfg);
  const long n = p.size();
  WorkerCore w(0, all_samples(p), p.dim(), cfg.seed, 0);
  w.x = x0;
  MetricRecorder rec(p, cfg);
  rec.baseline(x0);
  std::uint64_t evals = 0;
  double vtime = 0.0;
  Eigen::VectorXd y = x0;
  Eigen::VectorXd gbar_snap = Eigen::VectorXd::Zero(p.dim());
  try {
    for (long e = 1; e <= cfg.epochs; ++e) {
      if ((e - 1) % cfg.svrg_snapshot_period == 0) {
        y = w.x;
        gbar_snap = p.full_gradient(y);
        evals += static_cast<std::uint64_t>(n);
        vtime += static_cast<double>(n);
      }
      if (cfg.sampling == Sampling::PermutationPerEpoch) {
        const auto order =
            random_permutation(static_cast<std::size_t>(n), w.next_perm_key());
        detail::svrg_block(p, w, cfg.eta, n, y, gbar_snap, order.data());
      } else {
        detail::svrg_block(p, w, cfg.eta, n, y, gbar_snap, nullptr);
      }
      evals += 2 * static_cast<std::uint64_t>(n);
      vtime += 2.0 * static_cast<double>(n);
      rec.record(e, w.x, evals, vtime);
      if (rec.target_hit()) break;
    }
  } catch (const detail::Diverged&) {
    rethrow_diverged(w, rec, evals);
  }
  return finish(w, rec, evals);
}

RunResult run_sgd(const Problem& p, const OptConfig& cfg) {
  return run_sgd(p, cfg, Eigen::VectorXd::Zero(p.dim()));
}
RunResult run_svrg(const Problem& p, const OptConfig& cfg) {
  return run_svrg(p, cfg, Eigen::VectorXd::Zero(p.dim()));
}
RunResult run_saga(const Problem& p, const OptConfig& cfg) {
  return run_saga(p, cfg, Eigen::VectorXd::Zero(p.dim()));
}
RunResult run_centralvr(const Problem& p, const OptConfig& cfg) {
  return run_centralvr(p, cfg, Eigen::VectorXd::Zero(p.dim()), nullptr);
}

}  // namespace cvr
