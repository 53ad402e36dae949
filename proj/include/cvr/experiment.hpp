#ifndef CVR_EXPERIMENT_HPP
#define CVR_EXPERIMENT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cvr/config.hpp"
#include "cvr/dataset.hpp"
#include "cvr/distributed.hpp"
#include "cvr/optimizers.hpp"
#include "cvr/problem.hpp"
#include "cvr/trace.hpp"

namespace cvr {

// Raised on malformed experiment configuration; the message names the key.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DataSource { SyntheticClassification, SyntheticRegression, Libsvm };
enum class SuboptMode { Auto, Off, Reference };

struct ProblemSpec {
  LossKind kind = LossKind::Ridge;
  double lambda = 1e-4;
  DataSource source = DataSource::SyntheticRegression;
  Eigen::Index n = 1000;
  Eigen::Index d = 20;
  double noise_sigma = 1.0;
  std::uint64_t data_seed = 0;
  std::string libsvm_path;
  std::optional<Eigen::Index> expected_dim;
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::string algorithm = "sgd";  // sgd | svrg | saga | centralvr |
                                  // centralvr-sync | centralvr-async |
                                  // dist-svrg | async-saga | local-sgd
  OptConfig opt;
  std::optional<ClusterConfig> cluster;
  SuboptMode suboptimality = SuboptMode::Auto;
  std::string output_path = "trace.csv";
  TraceFormat output_format = TraceFormat::Csv;
};

bool algorithm_is_distributed(const std::string& algorithm);
const std::vector<std::string>& known_algorithms();

// Builds a validated ExperimentConfig from parsed key-value pairs; throws
// config_error naming the offending key.
ExperimentConfig build_experiment_config(const KeyValueConfig& kv);

struct ExperimentResult {
  RunResult run;
  std::optional<DistResult> dist;  // set for distributed algorithms
  std::filesystem::path written;
  bool diverged = false;
};

// Materializes the dataset, runs the named algorithm and writes the trace.
// On divergence the partial trace is still written and `diverged` is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct SweepRow {
  std::string value;
  bool ok = false;
  bool converged = false;  // reached opt.target_rel_grad (when set)
  long epochs_to_target = -1;
  double virtual_time_to_target = 0.0;
  std::uint64_t grad_evals_to_target = 0;
  double final_rel_grad = 0.0;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::filesystem::path summary_path;
};

// Runs one experiment per value of `axis` (p | tau | eta | speed_factors),
// writing per-run traces next to the configured output path plus a summary
// CSV. Sub-run failures are recorded and the sweep continues.
SweepResult sweep(const ExperimentConfig& base, const std::string& axis,
                  const std::vector<std::string>& values);

}  // namespace cvr

#endif  // CVR_EXPERIMENT_HPP
