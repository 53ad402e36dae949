// Acceptance suite: one check per release criterion, each printed as a
// single pass/fail line. Run with no arguments for all criteria or pass a
// list of criterion numbers.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cvr/checks.hpp"
#include "cvr/distributed.hpp"
#include "cvr/experiment.hpp"
#include "cvr/optimizers.hpp"
#include "cvr/rng.hpp"

using namespace cvr;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Exhaustive unbiasedness of the corrected gradient on the toy logistic
//    problem: mean_i corrected(x, i) == full_gradient(x) within 1e-12.
Outcome criterion_unbiasedness() {
  const Dataset cls = generate_classification(5000, 20, 101);
  const Problem p(cls, LossKind::Logistic, 1e-4);
  GradientTable table(TableMode::FullVector, p.size(), p.dim());
  Xoshiro256ss rng(2025);
  NormalSampler normal(rng);
  Eigen::VectorXd z(p.dim()), x(p.dim());
  double worst = 0.0;
  int failures = 0;
  for (int pair = 0; pair < 100; ++pair) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = normal.next();
      table.store(p, i, i, p.grad_coeff(z, i), z);
    }
    table.rebuild_average(p);
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = normal.next();
    const auto report = check_unbiasedness(p, table, x, 1e-12);
    worst = std::max(worst, report.worst_ratio);
    if (!report.passed) ++failures;
  }
  std::ostringstream ss;
  ss << "100 table/point pairs, worst error = " << worst * 1e-12
     << " (tolerance 1e-12)";
  return {failures == 0, ss.str()};
}

// ---------------------------------------------------------------------------
// 2. Telescoped epoch identity: the start of each epoch moves by eta times
//    the sum of the stored gradients, to relative 1e-8, for 20 epochs.
Outcome criterion_telescoping() {
  const auto gen = generate_regression(1000, 20, 1.0, 102);
  const Problem p(gen.data, LossKind::Ridge, 1e-4);
  OptConfig cfg;
  cfg.eta = 0.25 / p.smoothness_constants(false).L;
  cfg.epochs = 20;
  cfg.seed = 7;
  cfg.record_wall_time = false;
  EpochProbe probe;
  run_centralvr(p, cfg, Eigen::VectorXd::Zero(p.dim()), &probe);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < probe.epoch_starts.size(); ++k) {
    const Eigen::VectorXd predicted =
        probe.epoch_starts[k] - cfg.eta * probe.stored_sums[k];
    worst = std::max(worst, (probe.epoch_starts[k + 1] - predicted).norm() /
                                probe.epoch_starts[k + 1].norm());
  }
  std::ostringstream ss;
  ss << "20 epochs, worst relative defect = " << worst << " (tolerance 1e-8)";
  return {worst <= 1e-8, ss.str()};
}

// ---------------------------------------------------------------------------
// 3. Lyapunov contraction at the guaranteed rate's step size: median ratio
//    seeds stays below alpha + 0.05 for 20 epochs.
Outcome criterion_lyapunov() {
  const auto gen = generate_regression(500, 10, 1.0, 103);
  const Problem p(gen.data, LossKind::Ridge, 1e-4);
  const auto consts = p.smoothness_constants(true);
  OptConfig base;
  base.eta = 0.9 * consts.mu / (2.0 * consts.L * (consts.L + consts.mu));
  base.record_wall_time = false;
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  const auto rep = check_lyapunov_contraction(p, base, seeds, 20, true, 0.05);
  const double worst_median =
      *std::max_element(rep.median_ratios.begin(), rep.median_ratios.end());
  std::ostringstream ss;
  ss << "alpha = " << rep.rate.alpha << ", worst median ratio = "
     << worst_median << " (allowed " << rep.rate.alpha + 0.05 << ")";
  return {rep.summary.passed, ss.str()};
}

// ---------------------------------------------------------------------------
// 4. Gradient-gap inequalities, 1000 samples each, zero violations.
Outcome criterion_gap_bounds() {
  const auto gen = generate_regression(5000, 20, 1.0, 104);
  const Problem p(gen.data, LossKind::Ridge, 1e-4);
  const Eigen::VectorXd x_star = ridge_minimizer(p);
  const auto mean = check_mean_gradient_gap_bound(p, x_star, 1000, 11);
  const auto pointwise = check_pointwise_gradient_gap_bound(p, x_star, 1000, 12);
  std::ostringstream ss;
  ss << "violations " << mean.violations << " + " << pointwise.violations
     << ", worst ratios " << mean.worst_ratio << " / " << pointwise.worst_ratio;
  return {mean.passed && pointwise.passed, ss.str()};
}

// ---------------------------------------------------------------------------
// 5. Gradient-evaluation advantage at matched tuning.
std::optional<std::uint64_t> evals_to_target(const Problem& p,
                                             const std::string& method,
                                             double eta, double target,
                                             long max_epochs) {
  OptConfig cfg;
  cfg.eta = eta;
  cfg.epochs = max_epochs;
  cfg.seed = 2024;
  cfg.record_wall_time = false;
  cfg.target_rel_grad = target;
  try {
    RunResult res;
    if (method == "centralvr") {
      cfg.sampling = Sampling::PermutationPerEpoch;
      res = run_centralvr(p, cfg);
    } else if (method == "saga") {
      cfg.sampling = Sampling::UniformWithReplacement;
      res = run_saga(p, cfg);
    } else {
      cfg.sampling = Sampling::UniformWithReplacement;
      cfg.svrg_snapshot_period = 2;
      res = run_svrg(p, cfg);
    }
    for (const auto& r : res.trace)
      if (r.rel_grad_norm <= target) return r.grad_evals;
    return std::nullopt;
  } catch (const divergence_error&) {
    return std::nullopt;
  }
}

std::uint64_t best_over_grid(const Problem& p, const std::string& method,
                             double target, long max_epochs) {
  const double L = p.smoothness_constants(false).L;
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (double c : {0.8, 0.4, 0.2, 0.1, 0.05, 0.025}) {
    const auto e = evals_to_target(p, method, c / L, target, max_epochs);
    if (e && *e < best) best = *e;
  }
  return best;
}

Outcome criterion_eval_advantage() {
  const Dataset cls = generate_classification(5000, 20, 105);
  const auto reg = generate_regression(5000, 20, 1.0, 105);
  std::ostringstream ss;
  bool ok = true;
  for (const Problem p : {Problem(cls, LossKind::Logistic, 1e-4),
                          Problem(reg.data, LossKind::Ridge, 1e-4)}) {
    const double target = 1e-8;
    const std::uint64_t central = best_over_grid(p, "centralvr", target, 400);
    const std::uint64_t svrg = best_over_grid(p, "svrg", target, 400);
    const std::uint64_t saga = best_over_grid(p, "saga", target, 400);
    const char* name = p.kind() == LossKind::Logistic ? "logistic" : "ridge";
    if (central == std::numeric_limits<std::uint64_t>::max() ||
        svrg == std::numeric_limits<std::uint64_t>::max() ||
        saga == std::numeric_limits<std::uint64_t>::max()) {
      ss << name << ": some method failed to reach 1e-8; ";
      ok = false;
      continue;
    }
    const double vs_svrg = static_cast<double>(central) / svrg;
    const double vs_saga = static_cast<double>(central) / saga;
    ss << name << ": central/svrg = " << vs_svrg
       << " (need <= 0.6), central/saga = " << vs_saga << " (need <= 0.9); ";
    ok = ok && vs_svrg <= 0.6 && vs_saga <= 0.9;
  }
  return {ok, ss.str()};
}

// ---------------------------------------------------------------------------
// 6. Degenerate-cluster equivalence at p = 1.
double trace_gap(const std::vector<TraceRecord>& a,
                 const std::vector<TraceRecord>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].epoch != b[i].epoch || a[i].grad_evals != b[i].grad_evals)
      return std::numeric_limits<double>::infinity();
    gap = std::max(gap, std::abs(a[i].rel_grad_norm - b[i].rel_grad_norm));
    gap = std::max(gap, std::abs(a[i].virtual_time - b[i].virtual_time));
  }
  return gap;
}

Outcome criterion_degenerate_cluster() {
  const auto gen = generate_regression(1000, 20, 1.0, 106);
  const Problem p(gen.data, LossKind::Ridge, 1e-4);
  const double eta = 0.25 / p.smoothness_constants(false).L;
  std::ostringstream ss;
  double worst = 0.0;

  {
    OptConfig cfg;
    cfg.eta = eta;
    cfg.epochs = 8;
    cfg.seed = 21;
    cfg.record_wall_time = false;
    const auto seq = run_centralvr(p, cfg);
    ClusterConfig c;
    c.workers = 1;
    const auto dist = run_centralvr_sync(p, c, cfg);
    worst = std::max(worst, trace_gap(seq.trace, dist.run.trace));
    worst = std::max(worst, (seq.x - dist.run.x).lpNorm<Eigen::Infinity>());
  }
  {
    OptConfig cfg;
    cfg.eta = eta;
    cfg.epochs = 8;
    cfg.seed = 22;
    cfg.sampling = Sampling::UniformWithReplacement;
    cfg.svrg_snapshot_period = 1;
    cfg.record_wall_time = false;
    const auto seq = run_svrg(p, cfg);
    ClusterConfig c;
    c.workers = 1;
    c.tau = p.size();
    const auto dist = run_dist_svrg(p, c, cfg);
    worst = std::max(worst, trace_gap(seq.trace, dist.run.trace));
    worst = std::max(worst, (seq.x - dist.run.x).lpNorm<Eigen::Infinity>());
  }
  {
    OptConfig cfg;
    cfg.eta = eta;
    cfg.epochs = 8;
    cfg.seed = 23;
    cfg.sampling = Sampling::UniformWithReplacement;
    cfg.record_wall_time = false;
    const auto seq = run_saga(p, cfg);
    ClusterConfig c;
    c.workers = 1;
    c.mode = ClusterMode::Async;
    c.tau = p.size();
    c.alpha = 1.0;
    const auto dist = run_async_saga(p, c, cfg);
    worst = std::max(worst, trace_gap(seq.trace, dist.run.trace));
    worst = std::max(worst, (seq.x - dist.run.x).lpNorm<Eigen::Infinity>());
  }
  ss << "worst trace/iterate gap across the three pairs = " << worst
     << " (tolerance 1e-12)";
  return {worst <= 1e-12, ss.str()};
}

// ---------------------------------------------------------------------------
// 7. Async convergence under heterogeneous speeds.
Outcome criterion_async_heterogeneous() {
  const Dataset cls = generate_classification(8 * 5000, 20, 107);
  const Problem p(cls, LossKind::Logistic, 1e-4);
  ClusterConfig c;
  c.workers = 8;
  c.mode = ClusterMode::Async;
  c.speed_factors = {1, 1, 2, 2, 4, 4, 8, 8};
  c.comm_latency = 50.0;
  OptConfig cfg;
  cfg.eta = 0.2 / p.smoothness_constants(false).L;
  cfg.epochs = 600;  // update budget; stops early once the target is reached
  cfg.seed = 31;
  cfg.record_wall_time = false;
  cfg.target_rel_grad = 1e-6;
  const auto res = run_centralvr_async(p, c, cfg);
  double best = 1.0;
  for (const auto& r : res.run.trace) best = std::min(best, r.rel_grad_norm);
  const double ratio = static_cast<double>(res.worker_updates.front()) /
                       static_cast<double>(res.worker_updates.back());
  std::ostringstream ss;
  ss << "best rel grad = " << best << " (need <= 1e-6), fastest/slowest = "
     << ratio << " (need within [6.4, 9.6])";
  return {best <= 1e-6 && ratio >= 6.4 && ratio <= 9.6, ss.str()};
}

// ---------------------------------------------------------------------------
// 8. Virtual-time scaling with the per-worker shard held at 2000 samples.
Outcome criterion_virtual_scaling() {
  std::ostringstream ss;
  std::vector<double> times;
  std::uint64_t bad_messages = 0;
  for (int workers : {2, 4, 8, 16}) {
    const Dataset cls =
        generate_classification(2000 * workers, 20, 108 + workers);
    const Problem p(cls, LossKind::Logistic, 1e-4);
    ClusterConfig c;
    c.workers = workers;
    c.comm_latency = 10.0;
    OptConfig cfg;
    cfg.eta = 0.005;
    cfg.epochs = 400;
    cfg.seed = 41;
    cfg.record_wall_time = false;
    cfg.target_rel_grad = 1e-6;
    const auto res = run_centralvr_sync(p, c, cfg);
    const long epochs_run = res.run.trace.back().epoch;
    if (res.comm.epoch_messages !=
        2ull * static_cast<std::uint64_t>(workers) *
            static_cast<std::uint64_t>(epochs_run))
      ++bad_messages;
    if (res.run.trace.back().rel_grad_norm > 1e-6) {
      ss << "p=" << workers << " did not reach 1e-6; ";
      times.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    times.push_back(res.run.trace.back().virtual_time);
    ss << "p=" << workers << ": t=" << res.run.trace.back().virtual_time
       << " (epochs " << epochs_run << "); ";
  }
  const double tmin = *std::min_element(times.begin(), times.end());
  const double tmax = *std::max_element(times.begin(), times.end());
  const bool ok = std::isfinite(tmax) && tmax <= 1.25 * tmin && bad_messages == 0;
  ss << "spread = " << (std::isfinite(tmax) ? tmax / tmin : 0.0)
     << " (need <= 1.25), message ledger "
     << (bad_messages == 0 ? "exact" : "WRONG");
  return {ok, ss.str()};
}

// ---------------------------------------------------------------------------
// 9. Communication-period robustness ordering for the asynchronous
//    table-updating method.
Outcome criterion_tau_ordering() {
  const Dataset cls = generate_classification(5000, 20, 109);
  const Problem p(cls, LossKind::Logistic, 1e-4);
  const double eta = 0.2 / p.smoothness_constants(false).L;
  std::vector<double> times;
  std::ostringstream ss;
  for (long tau : {10L, 100L, 1000L, 10000L}) {
    ClusterConfig c;
    c.workers = 4;
    c.mode = ClusterMode::Async;
    c.tau = tau;
    OptConfig cfg;
    cfg.eta = eta;
    // equal total-iteration budget across tau values
    cfg.epochs = std::max<long>(1, 6000000 / (4 * tau));
    cfg.seed = 51;
    cfg.record_wall_time = false;
    cfg.target_rel_grad = 1e-6;
    const auto res = run_async_saga(p, c, cfg);
    double t = std::numeric_limits<double>::infinity();
    for (const auto& r : res.run.trace)
      if (r.rel_grad_norm <= 1e-6) {
        t = r.virtual_time;
        break;
      }
    times.push_back(t);
    ss << "tau=" << tau << ": t=" << t << "; ";
  }
  bool ok = true;
  for (std::size_t i = 1; i < times.size(); ++i)
    ok = ok && times[i] >= times[i - 1];
  ok = ok && times.back() > times[times.size() - 2];
  ok = ok && std::isfinite(times[0]);
  ss << (ok ? "nondecreasing with tau=10000 strictly worst"
            : "ordering violated");
  return {ok, ss.str()};
}

// ---------------------------------------------------------------------------
// 10. Byte-identical traces across three consecutive runs of every
//     algorithm at a pinned configuration.
std::string run_to_bytes(const std::string& algorithm, int run_idx) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path =
      dir / ("cvr_golden_" + algorithm + "_" + std::to_string(run_idx) + ".csv");
  KeyValueConfig kv;
  kv.set("problem.kind", "ridge");
  kv.set("problem.data", "synthetic-regression");
  kv.set("problem.n", "400");
  kv.set("problem.d", "8");
  kv.set("problem.data_seed", "9");
  kv.set("optimizer.algorithm", algorithm);
  kv.set("optimizer.eta", "0.002");
  kv.set("optimizer.epochs", "5");
  kv.set("optimizer.seed", "77");
  kv.set("metrics.wall_time", "off");
  kv.set("output.path", path.string());
  if (algorithm_is_distributed(algorithm)) {
    kv.set("cluster.p", "3");
    kv.set("cluster.tau", "150");
    kv.set("cluster.comm_latency", "2.0");
  }
  const auto cfg = build_experiment_config(kv);
  run_experiment(cfg);
  std::ifstream f(path, std::ios::binary);
  std::stringstream buf;
  buf << f.rdbuf();
  std::filesystem::remove(path);
  return buf.str();
}

Outcome criterion_determinism() {
  std::ostringstream ss;
  bool ok = true;
  for (const auto& algorithm : known_algorithms()) {
    const std::string a = run_to_bytes(algorithm, 0);
    const std::string b = run_to_bytes(algorithm, 1);
    const std::string c = run_to_bytes(algorithm, 2);
    const bool same = !a.empty() && a == b && b == c;
    if (!same) {
      ss << algorithm << " NOT byte-identical; ";
      ok = false;
    }
  }
  if (ok) ss << "all 9 algorithms byte-identical across 3 runs";
  return {ok, ss.str()};
}

struct Criterion {
  int number;
  const char* label;
  Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "exhaustive unbiasedness of the corrected gradient", criterion_unbiasedness},
    {2, "telescoped epoch update identity", criterion_telescoping},
    {3, "Lyapunov contraction at the guaranteed rate", criterion_lyapunov},
    {4, "gradient-gap inequality suite", criterion_gap_bounds},
    {5, "gradient-evaluation advantage under tuning", criterion_eval_advantage},
    {6, "degenerate cluster equals sequential", criterion_degenerate_cluster},
    {7, "async convergence under heterogeneous speeds", criterion_async_heterogeneous},
    {8, "virtual-time scaling at fixed shard size", criterion_virtual_scaling},
    {9, "communication-period robustness ordering", criterion_tau_ordering},
    {10, "byte-identical traces across runs", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& criterion : kCriteria) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), criterion.number) == wanted.end())
      continue;
    Outcome outcome;
    try {
      outcome = criterion.fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s — %s\n",
                outcome.passed ? "PASS" : "FAIL", criterion.number,
                criterion.label, outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
