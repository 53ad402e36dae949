#include "cvr/distributed.hpp"

#include <algorithm>
#include <condition_variable>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <thread>

#include "epoch_loops.hpp"
#include "metric_recorder.hpp"

namespace cvr {

namespace {

using detail::MetricRecorder;
using detail::WorkerCore;

struct Prepared {
  std::vector<WorkerCore> workers;
  std::vector<double> speeds;
  std::vector<double> avg_weights;  // server averaging weights, sum to 1
  double alpha = 1.0;
  long tau = 0;
  int P = 1;
};

Prepared prepare(const Problem& p, const ClusterConfig& cluster,
                 const OptConfig& cfg, const Eigen::VectorXd& x0,
                 ClusterMode required_mode, bool with_table,
                 long default_tau) {
  if (cluster.mode != required_mode)
    throw std::invalid_argument("cluster.mode does not match the algorithm");
  if (cluster.workers < 1)
    throw std::invalid_argument("cluster.workers must be >= 1");
  if (cluster.comm_latency < 0)
    throw std::invalid_argument("cluster.comm_latency must be >= 0");
  if (cfg.eta < 0) throw std::invalid_argument("OptConfig: eta must be >= 0");
  if (cfg.epochs < 1) throw std::invalid_argument("OptConfig: epochs >= 1");

  Prepared out;
  out.P = cluster.workers;
  out.tau = cluster.tau > 0 ? cluster.tau : default_tau;
  if (out.tau < 1) throw std::invalid_argument("cluster.tau must be >= 1");
  out.alpha = cluster.alpha > 0 ? cluster.alpha : 1.0 / out.P;
  if (out.alpha <= 0 || out.alpha > 1)
    throw std::invalid_argument("cluster.alpha must be in (0, 1]");

  out.speeds = cluster.speed_factors;
  if (out.speeds.empty()) out.speeds.assign(static_cast<std::size_t>(out.P), 1.0);
  if (out.speeds.size() != static_cast<std::size_t>(out.P))
    throw std::invalid_argument("cluster.speed_factors must have one entry per worker");
  for (double s : out.speeds)
    if (s <= 0) throw std::invalid_argument("cluster.speed_factors must be positive");

  const auto shards = partition(p.data(), out.P, cluster.partition, cluster.seed);
  out.workers.reserve(static_cast<std::size_t>(out.P));
  for (const auto& sh : shards) {
    if (sh.indices.empty()) throw std::invalid_argument("empty shard");
    out.workers.emplace_back(sh.owner, sh.indices, p.dim(), cfg.seed,
                             static_cast<std::uint64_t>(sh.owner));
    out.workers.back().x = x0;
    if (with_table)
      out.workers.back().table = std::make_unique<GradientTable>(
          TableMode::FullVector,
          static_cast<Eigen::Index>(sh.indices.size()), p.dim());
  }

  out.avg_weights.resize(static_cast<std::size_t>(out.P));
  for (int s = 0; s < out.P; ++s) {
    out.avg_weights[static_cast<std::size_t>(s)] =
        cluster.weighted_average
            ? static_cast<double>(out.workers[static_cast<std::size_t>(s)].count()) /
                  static_cast<double>(p.size())
            : 1.0 / out.P;
  }
  return out;
}

double max_compute_time(const Prepared& pr, double evals_per_worker) {
  double t = 0.0;
  for (int s = 0; s < pr.P; ++s)
    t = std::max(t, pr.speeds[static_cast<std::size_t>(s)] * evals_per_worker);
  return t;
}

// max over workers of speed_s * |shard_s|
double max_pass_time(const Prepared& pr) {
  double t = 0.0;
  for (int s = 0; s < pr.P; ++s)
    t = std::max(t, pr.speeds[static_cast<std::size_t>(s)] *
                        static_cast<double>(pr.workers[static_cast<std::size_t>(s)].count()));
  return t;
}

void weighted_average_into(const Prepared& pr,
                           const Eigen::VectorXd WorkerCore::* field,
                           Eigen::VectorXd& out) {
  out = Eigen::VectorXd::Zero((pr.workers.front().*field).size());
  for (int s = 0; s < pr.P; ++s)
    out += pr.avg_weights[static_cast<std::size_t>(s)] *
           (pr.workers[static_cast<std::size_t>(s)].*field);
}

DistResult assemble(Prepared& pr, MetricRecorder& rec, const Eigen::VectorXd& x,
                    std::uint64_t evals, double vtime) {
  DistResult out;
  out.run.x = x;
  out.run.trace = rec.take();
  out.run.grad_evals = evals;
  out.run.metric_evals = rec.metric_evals;
  out.total_virtual_time = vtime;
  out.worker_updates.assign(static_cast<std::size_t>(pr.P), 0);
  return out;
}

[[noreturn]] void rethrow_diverged(Prepared& pr, MetricRecorder& rec,
                                   const Eigen::VectorXd& x,
                                   std::uint64_t evals, double vtime) {
  throw divergence_error("iterate norm exceeded 1e10; reduce eta",
                         assemble(pr, rec, x, evals, vtime).run);
}

}  // namespace

DistResult run_centralvr_sync(const Problem& p, const ClusterConfig& cluster,
                              const OptConfig& cfg, const Eigen::VectorXd& x0) {
  Prepared pr = prepare(p, cluster, cfg, x0, ClusterMode::Sync, true, 1);
  const double lat = cluster.comm_latency;
  MetricRecorder rec(p, cfg);
  rec.baseline(x0);
  std::uint64_t evals = 0;
  double vtime = 0.0;
  Eigen::VectorXd xbar = x0;
  Eigen::VectorXd gbar = Eigen::VectorXd::Zero(p.dim());
  CommLedger comm;
  std::vector<std::uint64_t> updates(static_cast<std::size_t>(pr.P), 0);
  try {
    for (auto& w : pr.workers) {
      const auto order = random_permutation(w.samples.size(), w.next_perm_key());
      detail::init_fill_pass(p, w, cfg.eta, order.data(),
                             1.0 / static_cast<double>(w.count()));
    }
    evals += static_cast<std::uint64_t>(p.size());
    vtime += max_pass_time(pr);

    for (long e = 1; e <= cfg.epochs; ++e) {
      for (auto& w : pr.workers) {
        const auto order = random_permutation(w.samples.size(), w.next_perm_key());
        detail::centralvr_epoch(p, w, cfg.eta, order.data(),
                                1.0 / static_cast<double>(w.count()));
      }
      evals += static_cast<std::uint64_t>(p.size());
      vtime += max_pass_time(pr) + 2.0 * lat;
      comm.epoch_messages += 2 * static_cast<std::uint64_t>(pr.P);

      weighted_average_into(pr, &WorkerCore::x, xbar);
      weighted_average_into(pr, &WorkerCore::gbar, gbar);
      for (auto& w : pr.workers) {
        w.x = xbar;
        w.gbar = gbar;
      }
      for (auto& u : updates) ++u;
      rec.record(e, xbar, evals, vtime);
      if (rec.target_hit()) break;
    }
  } catch (const detail::Diverged&) {
    rethrow_diverged(pr, rec, xbar, evals, vtime);
  }
  DistResult out = assemble(pr, rec, xbar, evals, vtime);
  out.worker_updates = updates;
  out.comm = comm;
  out.server_gbar = gbar;
  return out;
}

DistResult run_local_sgd(const Problem& p, const ClusterConfig& cluster,
                         const OptConfig& cfg, const Eigen::VectorXd& x0) {
  Prepared pr = prepare(p, cluster, cfg, x0, ClusterMode::Sync, false, 1);
  const double lat = cluster.comm_latency;
  MetricRecorder rec(p, cfg);
  rec.baseline(x0);
  std::uint64_t evals = 0;
  double vtime = 0.0;
  Eigen::VectorXd xbar = x0;
  CommLedger comm;
  std::vector<std::uint64_t> updates(static_cast<std::size_t>(pr.P), 0);
  try {
    for (long e = 1; e <= cfg.epochs; ++e) {
      for (auto& w : pr.workers) {
        const auto order = random_permutation(w.samples.size(), w.next_perm_key());
        detail::sgd_pass(p, w, cfg.eta, w.count(), order.data());
      }
      evals += static_cast<std::uint64_t>(p.size());
      vtime += max_pass_time(pr) + 2.0 * lat;
      comm.epoch_messages += 2 * static_cast<std::uint64_t>(pr.P);
      weighted_average_into(pr, &WorkerCore::x, xbar);
      for (auto& w : pr.workers) w.x = xbar;
      for (auto& u : updates) ++u;
      rec.record(e, xbar, evals, vtime);
      if (rec.target_hit()) break;
    }
  } catch (const detail::Diverged&) {
    rethrow_diverged(pr, rec, xbar, evals, vtime);
  }
  DistResult out = assemble(pr, rec, xbar, evals, vtime);
  out.worker_updates = updates;
  out.comm = comm;
  return out;
}

DistResult run_dist_svrg(const Problem& p, const ClusterConfig& cluster,
                         const OptConfig& cfg, const Eigen::VectorXd& x0) {
  Prepared pr =
      prepare(p, cluster, cfg, x0, ClusterMode::Sync, false, 2 * p.size());
  const double lat = cluster.comm_latency;
  MetricRecorder rec(p, cfg);
  rec.baseline(x0);
  std::uint64_t evals = 0;
  double vtime = 0.0;
  Eigen::VectorXd xbar = x0;
  Eigen::VectorXd gbar(p.dim());
  Eigen::VectorXd shard_sum(p.dim());
  CommLedger comm;
  std::vector<std::uint64_t> updates(static_cast<std::size_t>(pr.P), 0);
  try {
    for (long r = 1; r <= cfg.epochs; ++r) {
      // synchronized full gradient at the averaged iterate
      gbar.setZero();
      for (auto& w : pr.workers) {
        shard_sum.setZero();
        for (Eigen::Index sample : w.samples)
          shard_sum += p.loss_gradient(xbar, sample);
        gbar += shard_sum;
      }
      gbar /= static_cast<double>(p.size());
      evals += static_cast<std::uint64_t>(p.size());
      vtime += max_pass_time(pr) + 2.0 * lat;
      comm.snapshot_messages += 2 * static_cast<std::uint64_t>(pr.P);

      for (auto& w : pr.workers) {
        w.x = xbar;
        detail::svrg_block(p, w, cfg.eta, pr.tau, xbar, gbar, nullptr);
      }
      evals += 2 * static_cast<std::uint64_t>(pr.P) * static_cast<std::uint64_t>(pr.tau);
      vtime += max_compute_time(pr, 2.0 * static_cast<double>(pr.tau)) + 2.0 * lat;
      comm.epoch_messages += 2 * static_cast<std::uint64_t>(pr.P);

      xbar.setZero();
      for (auto& w : pr.workers) xbar += (1.0 / pr.P) * w.x;
      for (auto& u : updates) ++u;
      rec.record(r, xbar, evals, vtime);
      if (rec.target_hit()) break;
    }
  } catch (const detail::Diverged&) {
    rethrow_diverged(pr, rec, xbar, evals, vtime);
  }
  DistResult out = assemble(pr, rec, xbar, evals, vtime);
  out.worker_updates = updates;
  out.comm = comm;
  out.server_gbar = gbar;
  return out;
}

namespace {

struct AsyncWorker {
  WorkerCore* core = nullptr;
  // Baselines of the last sent values. For the table-updating method the
  // gbar baseline is the worker's LOCAL stored average: the shards are
  // disjoint, so alpha = 1/p mixing of local-average deltas reconstructs
  // the global stored mean exactly; mixing global-estimate deltas would
  // undercount each shard's refresh flux by a factor of p.
  Eigen::VectorXd x_old, gbar_old, dx, dg;
  std::uint64_t seq = 0;
  double block_evals = 0;  // gradient evaluations per block
};

struct AsyncShared {
  Eigen::VectorXd x, g;
  Eigen::VectorXd dx_sum, dg_sum;
  std::uint64_t updates = 0;
};

}  // namespace

// Common virtual-clock engine for the delta-exchange algorithms. run_block
// executes one local block on a worker and must leave w.core->x / gbar at
// the values to be sent.
static DistResult run_async_engine(
    const Problem& p, const ClusterConfig& cluster, const OptConfig& cfg,
    const Eigen::VectorXd& x0, Prepared& pr, bool saga_style,
    long metric_auto) {
  const double lat = cluster.comm_latency;
  const long cadence = cfg.metric_every > 0 ? cfg.metric_every
                                            : std::max<long>(1, metric_auto);
  MetricRecorder rec(p, cfg);
  rec.baseline(x0);
  std::uint64_t evals = 0;
  double vtime = 0.0;
  CommLedger comm;

  std::vector<AsyncWorker> aw(static_cast<std::size_t>(pr.P));
  AsyncShared server;
  server.x = x0;
  server.g = Eigen::VectorXd::Zero(p.dim());
  server.dx_sum = Eigen::VectorXd::Zero(p.dim());
  server.dg_sum = Eigen::VectorXd::Zero(p.dim());

  std::vector<std::uint64_t> updates(static_cast<std::size_t>(pr.P), 0);
  std::vector<int> update_workers;
  Eigen::VectorXd baseline_x;

  try {
    // Initialization pass on every worker fills the local tables.
    double init_done = 0.0;
    for (int s = 0; s < pr.P; ++s) {
      WorkerCore& w = pr.workers[static_cast<std::size_t>(s)];
      const auto order = random_permutation(w.samples.size(), w.next_perm_key());
      detail::init_fill_pass(p, w, cfg.eta, order.data(),
                             1.0 / static_cast<double>(w.count()));
      init_done = std::max(init_done, pr.speeds[static_cast<std::size_t>(s)] *
                                          static_cast<double>(w.count()));
      aw[static_cast<std::size_t>(s)].core = &w;
      aw[static_cast<std::size_t>(s)].block_evals =
          saga_style ? static_cast<double>(pr.tau)
                     : static_cast<double>(w.count());
    }
    evals += static_cast<std::uint64_t>(p.size());

    double t_start = init_done;
    if (!cluster.strict_zero_init) {
      // Bootstrap reduction: the server starts from the averaged worker
      // states, and each worker's first delta is measured against them.
      weighted_average_into(pr, &WorkerCore::x, server.x);
      if (saga_style) {
        server.g.setZero();
        for (auto& w : pr.workers) server.g += w.table->stored_sum();
        server.g /= static_cast<double>(p.size());
      } else {
        weighted_average_into(pr, &WorkerCore::gbar, server.g);
      }
      comm.setup_messages += 2 * static_cast<std::uint64_t>(pr.P);
      t_start = init_done + 2.0 * lat;
      for (auto& a : aw) {
        a.core->x = server.x;
        a.core->gbar = server.g;
        a.x_old = server.x;
        a.gbar_old = saga_style ? Eigen::VectorXd(a.core->table->stored_sum() /
                                                  static_cast<double>(a.core->count()))
                                : server.g;
      }
    } else {
      // Literal initialization: deltas baseline at zero, so the first
      // exchange pushes the entire local state into the server.
      for (auto& a : aw) {
        a.x_old = Eigen::VectorXd::Zero(p.dim());
        a.gbar_old = Eigen::VectorXd::Zero(p.dim());
      }
    }
    baseline_x = server.x;

    const double inv_n = 1.0 / static_cast<double>(p.size());
    auto run_block = [&](AsyncWorker& a) {
      WorkerCore& w = *a.core;
      if (saga_style) {
        detail::saga_block(p, w, cfg.eta, pr.tau, inv_n, nullptr);
        a.dx = w.x - a.x_old;
        a.x_old = w.x;
        const Eigen::VectorXd local_avg =
            w.table->stored_sum() / static_cast<double>(w.count());
        a.dg = local_avg - a.gbar_old;
        a.gbar_old = local_avg;
      } else {
        const auto order =
            random_permutation(w.samples.size(), w.next_perm_key());
        detail::centralvr_epoch(p, w, cfg.eta, order.data(),
                                1.0 / static_cast<double>(w.count()));
        a.dx = w.x - a.x_old;
        a.dg = w.gbar - a.gbar_old;
        a.x_old = w.x;
        a.gbar_old = w.gbar;
      }
    };

    std::priority_queue<SimEvent, std::vector<SimEvent>, SimEventAfter> queue;
    auto dispatch = [&](int s, double t_receive) {
      AsyncWorker& a = aw[static_cast<std::size_t>(s)];
      run_block(a);
      const double arrival = t_receive +
                             pr.speeds[static_cast<std::size_t>(s)] * a.block_evals +
                             lat;
      queue.push(SimEvent{arrival, s, a.seq++, SimEventKind::WorkerEpochDone});
    };

    for (int s = 0; s < pr.P; ++s)
      dispatch(s, cluster.strict_zero_init
                      ? pr.speeds[static_cast<std::size_t>(s)] *
                            static_cast<double>(pr.workers[static_cast<std::size_t>(s)].count())
                      : t_start);

    const std::uint64_t budget =
        static_cast<std::uint64_t>(pr.P) * static_cast<std::uint64_t>(cfg.epochs);
    while (server.updates < budget) {
      const SimEvent ev = queue.top();
      queue.pop();
      AsyncWorker& a = aw[static_cast<std::size_t>(ev.worker)];
      server.x += pr.alpha * a.dx;
      server.g += pr.alpha * a.dg;
      server.dx_sum += pr.alpha * a.dx;
      server.dg_sum += pr.alpha * a.dg;
      ++server.updates;
      ++updates[static_cast<std::size_t>(ev.worker)];
      update_workers.push_back(ev.worker);
      evals += static_cast<std::uint64_t>(a.block_evals);
      vtime = ev.time;
      comm.epoch_messages += 2;

      if (server.updates % static_cast<std::uint64_t>(cadence) == 0) {
        rec.record(static_cast<long>(server.updates), server.x, evals, vtime);
        if (rec.target_hit()) break;
      }
      if (server.updates >= budget) break;

      a.core->x = server.x;
      a.core->gbar = server.g;
      dispatch(ev.worker, ev.time + lat);
    }
  } catch (const detail::Diverged&) {
    rethrow_diverged(pr, rec, server.x, evals, vtime);
  }

  DistResult out = assemble(pr, rec, server.x, evals, vtime);
  out.worker_updates = updates;
  out.update_workers = update_workers;
  out.comm = comm;
  out.server_x_baseline = baseline_x;
  out.applied_dx_sum = server.dx_sum;
  out.applied_dg_sum = server.dg_sum;
  out.server_gbar = server.g;
  return out;
}

DistResult run_centralvr_async(const Problem& p, const ClusterConfig& cluster,
                               const OptConfig& cfg, const Eigen::VectorXd& x0) {
  if (cluster.real_threads)
    return run_centralvr_async_threads(p, cluster, cfg, x0, {});
  Prepared pr = prepare(p, cluster, cfg, x0, ClusterMode::Async, true, 1);
  return run_async_engine(p, cluster, cfg, x0, pr, /*saga_style=*/false, 1);
}

DistResult run_async_saga(const Problem& p, const ClusterConfig& cluster,
                          const OptConfig& cfg, const Eigen::VectorXd& x0) {
  Prepared pr = prepare(p, cluster, cfg, x0, ClusterMode::Async, true, p.size());
  // Default cadence: roughly one record per pass over the global data.
  const long metric_auto =
      std::max<long>(1, p.size() / std::max<long>(1, pr.P * pr.tau));
  return run_async_engine(p, cluster, cfg, x0, pr, /*saga_style=*/true,
                          metric_auto);
}

// Threaded execution of the asynchronous delta-exchange method. The server
// update is a single exclusive transaction: receive delta -> mutate ->
// reply. An admission order, when given, replays a virtual-clock schedule.
DistResult run_centralvr_async_threads(const Problem& p,
                                       const ClusterConfig& cluster,
                                       const OptConfig& cfg,
                                       const Eigen::VectorXd& x0,
                                       const std::vector<int>& admission_order) {
  ClusterConfig virt = cluster;
  virt.real_threads = false;
  Prepared pr = prepare(p, virt, cfg, x0, ClusterMode::Async, true, 1);
  if (cluster.strict_zero_init)
    throw std::invalid_argument("real_threads does not support strict_zero_init");

  MetricRecorder rec(p, cfg);
  rec.baseline(x0);
  std::uint64_t evals = 0;
  CommLedger comm;

  for (auto& w : pr.workers) {
    const auto order = random_permutation(w.samples.size(), w.next_perm_key());
    detail::init_fill_pass(p, w, cfg.eta, order.data(),
                           1.0 / static_cast<double>(w.count()));
  }
  evals += static_cast<std::uint64_t>(p.size());

  AsyncShared server;
  weighted_average_into(pr, &WorkerCore::x, server.x);
  weighted_average_into(pr, &WorkerCore::gbar, server.g);
  server.dx_sum = Eigen::VectorXd::Zero(p.dim());
  server.dg_sum = Eigen::VectorXd::Zero(p.dim());
  comm.setup_messages += 2 * static_cast<std::uint64_t>(pr.P);

  const Eigen::VectorXd baseline_x = server.x;

  std::vector<std::uint64_t> updates(static_cast<std::size_t>(pr.P), 0);
  std::vector<int> update_workers;
  std::vector<long> blocks_per_worker(static_cast<std::size_t>(pr.P), cfg.epochs);
  if (!admission_order.empty()) {
    std::fill(blocks_per_worker.begin(), blocks_per_worker.end(), 0);
    for (int wid : admission_order)
      ++blocks_per_worker[static_cast<std::size_t>(wid)];
  }

  std::mutex m;
  std::condition_variable cv;
  std::size_t admit_next = 0;

  // Every worker starts from the bootstrap broadcast, captured before any
  // thread can push a delta.
  const Eigen::VectorXd bootstrap_x = server.x;
  const Eigen::VectorXd bootstrap_g = server.g;

  auto worker_fn = [&](int id) {
    WorkerCore& w = pr.workers[static_cast<std::size_t>(id)];
    w.x = bootstrap_x;
    w.gbar = bootstrap_g;
    Eigen::VectorXd x_old = bootstrap_x;
    Eigen::VectorXd gbar_old = bootstrap_g;
    Eigen::VectorXd dx, dg;
    for (long b = 0; b < blocks_per_worker[static_cast<std::size_t>(id)]; ++b) {
      const auto order = random_permutation(w.samples.size(), w.next_perm_key());
      detail::centralvr_epoch(p, w, cfg.eta, order.data(),
                              1.0 / static_cast<double>(w.count()));
      dx = w.x - x_old;
      dg = w.gbar - gbar_old;
      x_old = w.x;
      gbar_old = w.gbar;
      {
        std::unique_lock<std::mutex> lk(m);
        if (!admission_order.empty())
          cv.wait(lk, [&] { return admission_order[admit_next] == id; });
        server.x += pr.alpha * dx;
        server.g += pr.alpha * dg;
        server.dx_sum += pr.alpha * dx;
        server.dg_sum += pr.alpha * dg;
        ++server.updates;
        ++updates[static_cast<std::size_t>(id)];
        update_workers.push_back(id);
        evals += static_cast<std::uint64_t>(w.count());
        comm.epoch_messages += 2;
        rec.record(static_cast<long>(server.updates), server.x, evals, 0.0);
        w.x = server.x;
        w.gbar = server.g;
        ++admit_next;
        cv.notify_all();
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(pr.P));
  for (int s = 0; s < pr.P; ++s) threads.emplace_back(worker_fn, s);
  for (auto& t : threads) t.join();

  DistResult out = assemble(pr, rec, server.x, evals, 0.0);
  out.worker_updates = updates;
  out.update_workers = update_workers;
  out.comm = comm;
  out.server_x_baseline = baseline_x;
  out.applied_dx_sum = server.dx_sum;
  out.applied_dg_sum = server.dg_sum;
  out.server_gbar = server.g;
  return out;
}

DistResult run_centralvr_sync(const Problem& p, const ClusterConfig& c,
                              const OptConfig& cfg) {
  return run_centralvr_sync(p, c, cfg, Eigen::VectorXd::Zero(p.dim()));
}
DistResult run_centralvr_async(const Problem& p, const ClusterConfig& c,
                               const OptConfig& cfg) {
  return run_centralvr_async(p, c, cfg, Eigen::VectorXd::Zero(p.dim()));
}
DistResult run_dist_svrg(const Problem& p, const ClusterConfig& c,
                         const OptConfig& cfg) {
  return run_dist_svrg(p, c, cfg, Eigen::VectorXd::Zero(p.dim()));
}
DistResult run_async_saga(const Problem& p, const ClusterConfig& c,
                          const OptConfig& cfg) {
  return run_async_saga(p, c, cfg, Eigen::VectorXd::Zero(p.dim()));
}
DistResult run_local_sgd(const Problem& p, const ClusterConfig& c,
                         const OptConfig& cfg) {
  return run_local_sgd(p, c, cfg, Eigen::VectorXd::Zero(p.dim()));
}

}  // namespace cvr
