#include "cvr/experiment.hpp"

#include <algorithm>
#include <fstream>

#include "cvr/checks.hpp"

namespace cvr {

namespace {

const std::vector<std::string> kAlgorithms = {
    "sgd",       "svrg",           "saga",
    "centralvr", "centralvr-sync", "centralvr-async",
    "dist-svrg", "async-saga",     "local-sgd"};

LossKind parse_kind(const std::string& s) {
  if (s == "logistic") return LossKind::Logistic;
  if (s == "ridge") return LossKind::Ridge;
  throw config_error("problem.kind: expected logistic or ridge, got '" + s + "'");
}

DataSource parse_source(const std::string& s) {
  if (s == "synthetic-classification") return DataSource::SyntheticClassification;
  if (s == "synthetic-regression") return DataSource::SyntheticRegression;
  if (s == "libsvm") return DataSource::Libsvm;
  throw config_error("problem.data: expected synthetic-classification, "
                     "synthetic-regression or libsvm, got '" + s + "'");
}

}  // namespace

bool algorithm_is_distributed(const std::string& algorithm) {
  return algorithm == "centralvr-sync" || algorithm == "centralvr-async" ||
         algorithm == "dist-svrg" || algorithm == "async-saga" ||
         algorithm == "local-sgd";
}

const std::vector<std::string>& known_algorithms() { return kAlgorithms; }

ExperimentConfig build_experiment_config(const KeyValueConfig& kv) {
  ExperimentConfig cfg;

  cfg.problem.kind = parse_kind(kv.get_string("problem.kind", "ridge"));
  cfg.problem.lambda = kv.get_double("problem.lambda", 1e-4);
  if (cfg.problem.lambda < 0) throw config_error("problem.lambda: must be >= 0");
  const std::string default_source = cfg.problem.kind == LossKind::Logistic
                                         ? "synthetic-classification"
                                         : "synthetic-regression";
  cfg.problem.source = parse_source(kv.get_string("problem.data", default_source));
  cfg.problem.n = kv.get_long("problem.n", 1000);
  cfg.problem.d = kv.get_long("problem.d", 20);
  if (cfg.problem.n < 1 || cfg.problem.d < 1)
    throw config_error("problem.n / problem.d: must be >= 1");
  cfg.problem.noise_sigma = kv.get_double("problem.noise_sigma", 1.0);
  cfg.problem.data_seed = kv.get_u64("problem.data_seed", 0);
  cfg.problem.libsvm_path = kv.get_string("problem.libsvm_path", "");
  if (cfg.problem.source == DataSource::Libsvm && cfg.problem.libsvm_path.empty())
    throw config_error("problem.libsvm_path: required when problem.data = libsvm");
  const long expected = kv.get_long("problem.expected_dim", 0);
  if (expected > 0) cfg.problem.expected_dim = expected;

  cfg.algorithm = kv.get_string("optimizer.algorithm", "");
  if (std::find(kAlgorithms.begin(), kAlgorithms.end(), cfg.algorithm) ==
      kAlgorithms.end())
    throw config_error("optimizer.algorithm: unknown algorithm '" +
                       cfg.algorithm + "'");

  cfg.opt.eta = kv.get_double("optimizer.eta", 0.0);
  if (cfg.opt.eta <= 0) throw config_error("optimizer.eta: must be > 0");
  cfg.opt.epochs = kv.get_long("optimizer.epochs", 10);
  if (cfg.opt.epochs < 1) throw config_error("optimizer.epochs: must be >= 1");
  const std::string sampling = kv.get_string("optimizer.sampling", "permutation");
  if (sampling == "permutation")
    cfg.opt.sampling = Sampling::PermutationPerEpoch;
  else if (sampling == "uniform")
    cfg.opt.sampling = Sampling::UniformWithReplacement;
  else
    throw config_error("optimizer.sampling: expected permutation or uniform");
  cfg.opt.seed = kv.get_u64("optimizer.seed", 0);
  cfg.opt.svrg_snapshot_period = kv.get_long("optimizer.svrg_snapshot_period", 2);
  if (cfg.opt.svrg_snapshot_period < 1)
    throw config_error("optimizer.svrg_snapshot_period: must be >= 1");
  const std::string table = kv.get_string("optimizer.table", "full");
  if (table == "full")
    cfg.opt.table_mode = TableMode::FullVector;
  else if (table == "compact")
    cfg.opt.table_mode = TableMode::ScalarCompact;
  else
    throw config_error("optimizer.table: expected full or compact");
  const double target = kv.get_double("optimizer.target_rel_grad", 0.0);
  if (target > 0) cfg.opt.target_rel_grad = target;
  cfg.opt.metric_every = kv.get_long("metrics.every", 0);
  cfg.opt.record_wall_time = kv.get_bool("metrics.wall_time", true);

  const std::string subopt = kv.get_string("metrics.suboptimality", "auto");
  if (subopt == "auto")
    cfg.suboptimality = SuboptMode::Auto;
  else if (subopt == "off")
    cfg.suboptimality = SuboptMode::Off;
  else if (subopt == "reference")
    cfg.suboptimality = SuboptMode::Reference;
  else
    throw config_error("metrics.suboptimality: expected auto, off or reference");

  if (algorithm_is_distributed(cfg.algorithm)) {
    ClusterConfig cluster;
    cluster.workers = static_cast<int>(kv.get_long("cluster.p", 0));
    if (cluster.workers < 1)
      throw config_error("cluster.p: required (>= 1) for distributed algorithms");
    cluster.tau = kv.get_long("cluster.tau", 0);
    cluster.speed_factors = kv.get_double_list("cluster.speed_factors");
    cluster.comm_latency = kv.get_double("cluster.comm_latency", 0.0);
    if (cluster.comm_latency < 0)
      throw config_error("cluster.comm_latency: must be >= 0");
    cluster.alpha = kv.get_double("cluster.alpha", 0.0);
    cluster.seed = kv.get_u64("cluster.seed", 0);
    const bool is_async =
        cfg.algorithm == "centralvr-async" || cfg.algorithm == "async-saga";
    cluster.mode = is_async ? ClusterMode::Async : ClusterMode::Sync;
    const std::string part = kv.get_string("cluster.partition", "contiguous");
    if (part == "contiguous")
      cluster.partition = PartitionStrategy::Contiguous;
    else if (part == "strided")
      cluster.partition = PartitionStrategy::Strided;
    else if (part == "shuffled")
      cluster.partition = PartitionStrategy::ShuffledEqual;
    else
      throw config_error("cluster.partition: expected contiguous, strided or shuffled");
    cluster.weighted_average = kv.get_bool("cluster.weighted_average", false);
    cluster.strict_zero_init = kv.get_bool("cluster.strict_zero_init", false);
    cluster.real_threads = kv.get_bool("cluster.real_threads", false);
    if (cluster.real_threads && cfg.algorithm != "centralvr-async")
      throw config_error("cluster.real_threads: only supported for centralvr-async");
    cfg.cluster = cluster;
  } else if (kv.has("cluster.p")) {
    throw config_error("cluster.p: set for a non-distributed algorithm '" +
                       cfg.algorithm + "'");
  }

  cfg.output_path = kv.get_string("output.path", "trace.csv");
  const std::string fmt = kv.get_string("output.format", "csv");
  if (fmt == "csv")
    cfg.output_format = TraceFormat::Csv;
  else if (fmt == "json")
    cfg.output_format = TraceFormat::Json;
  else
    throw config_error("output.format: expected csv or json");

  const auto leftovers = kv.unconsumed();
  if (!leftovers.empty())
    throw config_error("unknown config key '" + leftovers.front() + "'");
  return cfg;
}

namespace {

Dataset materialize(const ProblemSpec& spec) {
  switch (spec.source) {
    case DataSource::SyntheticClassification:
      return generate_classification(spec.n, spec.d, spec.data_seed);
    case DataSource::SyntheticRegression:
      return generate_regression(spec.n, spec.d, spec.noise_sigma, spec.data_seed)
          .data;
    case DataSource::Libsvm:
      return read_libsvm(spec.libsvm_path, spec.expected_dim);
  }
  throw config_error("problem.data: unreachable");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const Dataset data = materialize(cfg.problem);
  const Problem problem(data, cfg.problem.kind, cfg.problem.lambda);

  OptConfig opt = cfg.opt;
  if (cfg.suboptimality == SuboptMode::Auto &&
      cfg.problem.kind == LossKind::Ridge) {
    opt.f_star = problem.full_value(ridge_minimizer(problem));
  } else if (cfg.suboptimality == SuboptMode::Reference) {
    opt.f_star = problem.full_value(reference_minimizer(problem));
  }

  ExperimentResult out;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(problem.dim());
  try {
    if (cfg.algorithm == "sgd") {
      out.run = run_sgd(problem, opt, x0);
    } else if (cfg.algorithm == "svrg") {
      out.run = run_svrg(problem, opt, x0);
    } else if (cfg.algorithm == "saga") {
      out.run = run_saga(problem, opt, x0);
    } else if (cfg.algorithm == "centralvr") {
      out.run = run_centralvr(problem, opt, x0, nullptr);
    } else {
      const ClusterConfig& cluster = *cfg.cluster;
      DistResult dist;
      if (cfg.algorithm == "centralvr-sync")
        dist = run_centralvr_sync(problem, cluster, opt, x0);
      else if (cfg.algorithm == "centralvr-async")
        dist = run_centralvr_async(problem, cluster, opt, x0);
      else if (cfg.algorithm == "dist-svrg")
        dist = run_dist_svrg(problem, cluster, opt, x0);
      else if (cfg.algorithm == "async-saga")
        dist = run_async_saga(problem, cluster, opt, x0);
      else
        dist = run_local_sgd(problem, cluster, opt, x0);
      out.run = dist.run;
      out.dist = std::move(dist);
      out.dist->run = RunResult{};  // avoid holding the trace twice
    }
  } catch (const divergence_error& e) {
    out.run = e.partial;
    out.diverged = true;
  }

  if (!out.run.trace.empty()) {
    export_trace(out.run.trace, cfg.output_format, cfg.output_path);
    out.written = cfg.output_path;
  }
  return out;
}

namespace {

std::filesystem::path sweep_trace_path(const std::filesystem::path& base,
                                       const std::string& axis,
                                       const std::string& value) {
  std::string v = value;
  std::replace(v.begin(), v.end(), ',', '_');
  std::filesystem::path p = base;
  const std::string stem = p.stem().string();
  const std::string ext = p.extension().string();
  p.replace_filename(stem + "." + axis + "=" + v + ext);
  return p;
}

void apply_axis(ExperimentConfig& cfg, const std::string& axis,
                const std::string& value) {
  KeyValueConfig kv;
  if (axis == "eta") {
    kv.set("x", value);
    cfg.opt.eta = kv.get_double("x", 0.0);
    if (cfg.opt.eta <= 0) throw config_error("sweep eta: must be > 0");
    return;
  }
  if (!cfg.cluster)
    throw config_error("sweep axis '" + axis + "' needs a distributed algorithm");
  if (axis == "p") {
    kv.set("x", value);
    cfg.cluster->workers = static_cast<int>(kv.get_long("x", 0));
    if (cfg.cluster->workers < 1) throw config_error("sweep p: must be >= 1");
    if (!cfg.cluster->speed_factors.empty() &&
        cfg.cluster->speed_factors.size() !=
            static_cast<std::size_t>(cfg.cluster->workers))
      cfg.cluster->speed_factors.clear();
  } else if (axis == "tau") {
    kv.set("x", value);
    cfg.cluster->tau = kv.get_long("x", 0);
    if (cfg.cluster->tau < 1) throw config_error("sweep tau: must be >= 1");
  } else if (axis == "speed_factors") {
    kv.set("x", value);
    cfg.cluster->speed_factors = kv.get_double_list("x");
  } else {
    throw config_error("sweep axis must be one of p, tau, eta, speed_factors");
  }
}

}  // namespace

SweepResult sweep(const ExperimentConfig& base, const std::string& axis,
                  const std::vector<std::string>& values) {
  if (axis != "p" && axis != "tau" && axis != "eta" && axis != "speed_factors")
    throw config_error("sweep axis must be one of p, tau, eta, speed_factors");
  if (values.empty()) throw config_error("sweep: no values given");

  SweepResult out;
  for (const auto& value : values) {
    SweepRow row;
    row.value = value;
    try {
      ExperimentConfig cfg = base;
      apply_axis(cfg, axis, value);
      cfg.output_path = sweep_trace_path(base.output_path, axis, value).string();
      const ExperimentResult res = run_experiment(cfg);
      row.ok = !res.diverged;
      if (res.diverged) row.error = "diverged";
      const auto& trace = res.run.trace;
      row.final_rel_grad = trace.empty() ? 1.0 : trace.back().rel_grad_norm;
      if (cfg.opt.target_rel_grad) {
        for (const auto& r : trace) {
          if (r.rel_grad_norm <= *cfg.opt.target_rel_grad) {
            row.converged = true;
            row.epochs_to_target = r.epoch;
            row.virtual_time_to_target = r.virtual_time;
            row.grad_evals_to_target = r.grad_evals;
            break;
          }
        }
      }
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    out.rows.push_back(std::move(row));
  }

  std::filesystem::path summary = base.output_path;
  summary.replace_filename(summary.stem().string() + ".summary.csv");
  std::ofstream f(summary, std::ios::binary);
  if (!f) throw std::runtime_error("sweep: cannot write " + summary.string());
  f << "axis,value,ok,converged,epochs_to_target,virtual_time_to_target,"
       "grad_evals_to_target,final_rel_grad,error\n";
  for (const auto& r : out.rows) {
    std::string v = r.value;
    std::replace(v.begin(), v.end(), ',', ';');
    f << axis << ',' << v << ',' << (r.ok ? 1 : 0) << ','
      << (r.converged ? 1 : 0) << ',' << r.epochs_to_target << ','
      << format_g17(r.virtual_time_to_target) << ',' << r.grad_evals_to_target
      << ',' << format_g17(r.final_rel_grad) << ',' << r.error << '\n';
  }
  out.summary_path = summary;
  return out;
}

}  // namespace cvr
