#ifndef CVR_DISTRIBUTED_HPP
#define CVR_DISTRIBUTED_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "cvr/dataset.hpp"
#include "cvr/optimizers.hpp"

namespace cvr {

enum class ClusterMode { Sync, Async };

struct ClusterConfig {
  int workers = 1;
  long tau = 0;  // communication period in iterations; 0 = algorithm default
  std::vector<double> speed_factors;  // virtual seconds per gradient; empty = 1
  double comm_latency = 0.0;          // virtual seconds per message leg
  ClusterMode mode = ClusterMode::Sync;
  double alpha = 0.0;  // server mixing weight; 0 = 1/workers
  std::uint64_t seed = 0;
  PartitionStrategy partition = PartitionStrategy::Contiguous;
  bool weighted_average = false;   // weight server averages by shard size
  bool strict_zero_init = false;  // async: first delta baselines at zero
  bool real_threads = false;       // centralvr-async: one thread per worker
};

// Virtual-clock event. Events are processed in nondecreasing timestamp
// order; ties break on (worker id, per-worker sequence number).
enum class SimEventKind { WorkerEpochDone, ServerReply, Barrier };

struct SimEvent {
  double time = 0.0;
  int worker = 0;
  std::uint64_t seq = 0;
  SimEventKind kind = SimEventKind::WorkerEpochDone;
};

// Ordering functor for a min-heap priority queue.
struct SimEventAfter {
  bool operator()(const SimEvent& a, const SimEvent& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.worker != b.worker) return a.worker > b.worker;
    return a.seq > b.seq;
  }
};

struct CommLedger {
  std::uint64_t epoch_messages = 0;     // legs exchanged at epoch/block ends
  std::uint64_t setup_messages = 0;     // async bootstrap reduction legs
  std::uint64_t snapshot_messages = 0;  // full-gradient reduction legs
};

struct DistResult {
  RunResult run;
  std::vector<std::uint64_t> worker_updates;  // completed epochs/blocks per worker
  std::vector<int> update_workers;  // async: worker id per applied delta, in order
  CommLedger comm;
  double total_virtual_time = 0.0;
  // Conservation bookkeeping for the async server: final state must equal
  // baseline plus the applied mixed deltas.
  Eigen::VectorXd server_x_baseline;
  Eigen::VectorXd applied_dx_sum;
  Eigen::VectorXd applied_dg_sum;
  Eigen::VectorXd server_gbar;
};

// One local pass per worker per epoch, then the server averages the
// received iterates and correction averages and broadcasts them back.
DistResult run_centralvr_sync(const Problem& p, const ClusterConfig& cluster,
                              const OptConfig& cfg, const Eigen::VectorXd& x0);

// Workers run independently; after each local pass a worker sends the
// change in its iterate/average since its previous send and the server
// mixes it in with weight alpha, one delta at a time.
DistResult run_centralvr_async(const Problem& p, const ClusterConfig& cluster,
                               const OptConfig& cfg, const Eigen::VectorXd& x0);

// Rounds of a synchronized full-gradient snapshot followed by tau local
// inner iterations per worker and a server average of the iterates.
DistResult run_dist_svrg(const Problem& p, const ClusterConfig& cluster,
                         const OptConfig& cfg, const Eigen::VectorXd& x0);

// Workers run tau table-updating iterations between delta exchanges; the
// local running average is scaled by the global sample count.
DistResult run_async_saga(const Problem& p, const ClusterConfig& cluster,
                          const OptConfig& cfg, const Eigen::VectorXd& x0);

// Uncorrected comparator: local plain-SGD epochs with server averaging of
// the iterate only.
DistResult run_local_sgd(const Problem& p, const ClusterConfig& cluster,
                         const OptConfig& cfg, const Eigen::VectorXd& x0);

DistResult run_centralvr_sync(const Problem&, const ClusterConfig&,
                              const OptConfig&);
DistResult run_centralvr_async(const Problem&, const ClusterConfig&,
                               const OptConfig&);
DistResult run_dist_svrg(const Problem&, const ClusterConfig&,
                         const OptConfig&);
DistResult run_async_saga(const Problem&, const ClusterConfig&,
                          const OptConfig&);
DistResult run_local_sgd(const Problem&, const ClusterConfig&,
                         const OptConfig&);

// Replays a precomputed admission order so a threaded run reproduces a
// virtual-clock trace; empty order = free-running (first come, first served).
DistResult run_centralvr_async_threads(const Problem& p,
                                       const ClusterConfig& cluster,
                                       const OptConfig& cfg,
                                       const Eigen::VectorXd& x0,
                                       const std::vector<int>& admission_order);

}  // namespace cvr

#endif  // CVR_DISTRIBUTED_HPP
