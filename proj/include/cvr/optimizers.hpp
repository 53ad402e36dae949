#ifndef CVR_OPTIMIZERS_HPP
#define CVR_OPTIMIZERS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "cvr/gradient_table.hpp"
#include "cvr/problem.hpp"
#include "cvr/trace.hpp"

namespace cvr {

enum class Sampling { UniformWithReplacement, PermutationPerEpoch };

struct OptConfig {
  double eta = 0.1;
  long epochs = 1;
  Sampling sampling = Sampling::PermutationPerEpoch;
  std::uint64_t seed = 0;
  long svrg_snapshot_period = 2;  // snapshot refresh cadence, in epochs
  TableMode table_mode = TableMode::FullVector;
  std::optional<double> target_rel_grad;  // stop once a record reaches this
  std::optional<double> f_star;           // enables the suboptimality column
  bool record_wall_time = true;           // off -> wall_time_s written as 0
  long metric_every = 0;  // async runs: record every k-th server update, 0 = auto
};

// Per-epoch state capture for identity checks. Indices follow the epoch
// structure of the table-based methods: entry 0 is the state after the
// initialization pass, entry m the state after main epoch m.
struct EpochProbe {
  bool track_stored_fvals = false;  // also track f at each stored iterate
  std::vector<Eigen::VectorXd> epoch_starts;  // [x0, post-init, post-epoch-1, ...]
  std::vector<Eigen::VectorXd> stored_sums;   // sum of stored gradients
  std::vector<double> stored_fvals_mean;      // mean_j f(iterate of record j)
};

extern const double kDivergenceNorm;  // 1e10 guard on ||x||

RunResult run_sgd(const Problem& p, const OptConfig& cfg,
                  const Eigen::VectorXd& x0);
RunResult run_svrg(const Problem& p, const OptConfig& cfg,
                   const Eigen::VectorXd& x0);
RunResult run_saga(const Problem& p, const OptConfig& cfg,
                   const Eigen::VectorXd& x0);
RunResult run_centralvr(const Problem& p, const OptConfig& cfg,
                        const Eigen::VectorXd& x0,
                        EpochProbe* probe = nullptr);

// x0 defaults to the zero vector.
RunResult run_sgd(const Problem& p, const OptConfig& cfg);
RunResult run_svrg(const Problem& p, const OptConfig& cfg);
RunResult run_saga(const Problem& p, const OptConfig& cfg);
RunResult run_centralvr(const Problem& p, const OptConfig& cfg);

}  // namespace cvr

#endif  // CVR_OPTIMIZERS_HPP
