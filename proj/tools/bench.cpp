// Benchmark front end: configure a problem, run one of the optimizers or
// the simulated cluster, and export per-epoch traces. `bench verify` runs
// the numerical checks of the convergence guarantees.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvr/checks.hpp"
#include "cvr/experiment.hpp"
#include "cvr/rng.hpp"
#include "cvr/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitVerifyFailed = 3;

cvr::KeyValueConfig load_config(const std::string& path,
                                const std::vector<std::string>& overrides) {
  cvr::KeyValueConfig kv = path.empty() ? cvr::KeyValueConfig{}
                                        : cvr::KeyValueConfig::parse_file(path);
  for (const auto& kvpair : overrides) {
    const auto eq = kvpair.find('=');
    if (eq == std::string::npos || eq == 0)
      throw cvr::config_error("--set expects key=value, got '" + kvpair + "'");
    std::string key = kvpair.substr(0, eq);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    std::string val = kvpair.substr(eq + 1);
    while (!val.empty() && val.front() == ' ') val.erase(val.begin());
    kv.set(key, val);
  }
  return kv;
}

int cmd_run(const std::string& config_path,
            const std::vector<std::string>& overrides) {
  const auto kv = load_config(config_path, overrides);
  const auto cfg = cvr::build_experiment_config(kv);
  const auto res = cvr::run_experiment(cfg);
  const auto& trace = res.run.trace;
  if (res.diverged) {
    std::cerr << "run diverged; partial trace written to "
              << res.written.string() << "\n";
    return kExitDiverged;
  }
  std::cout << "algorithm=" << cfg.algorithm << " epochs="
            << (trace.empty() ? 0L : trace.back().epoch)
            << " grad_evals=" << res.run.grad_evals << " final_rel_grad="
            << cvr::format_g17(trace.empty() ? 1.0 : trace.back().rel_grad_norm)
            << " trace=" << res.written.string() << "\n";
  return kExitOk;
}

std::vector<std::string> split_values(const std::string& joined) {
  // ';' separates sweep values when the values themselves contain ','
  const char sep = joined.find(';') != std::string::npos ? ';' : ',';
  std::vector<std::string> out;
  std::string cur;
  for (char ch : joined) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

int cmd_sweep(const std::string& config_path,
              const std::vector<std::string>& overrides,
              const std::string& axis, const std::string& values) {
  const auto kv = load_config(config_path, overrides);
  const auto cfg = cvr::build_experiment_config(kv);
  const auto res = cvr::sweep(cfg, axis, split_values(values));
  bool all_ok = true;
  for (const auto& row : res.rows) {
    std::cout << axis << "=" << row.value << " ok=" << row.ok;
    if (row.converged)
      std::cout << " epochs_to_target=" << row.epochs_to_target
                << " virtual_time_to_target="
                << cvr::format_g17(row.virtual_time_to_target);
    else
      std::cout << " final_rel_grad=" << cvr::format_g17(row.final_rel_grad);
    if (!row.error.empty()) std::cout << " error=" << row.error;
    std::cout << "\n";
    all_ok = all_ok && row.ok;
  }
  std::cout << "summary=" << res.summary_path.string() << "\n";
  return all_ok ? kExitOk : kExitDiverged;
}

int cmd_gen_data(const std::string& kind, long n, long d, double noise_sigma,
                 std::uint64_t seed, const std::string& out) {
  cvr::Dataset ds;
  if (kind == "classification") {
    ds = cvr::generate_classification(n, d, seed);
  } else if (kind == "regression") {
    ds = cvr::generate_regression(n, d, noise_sigma, seed).data;
  } else {
    throw cvr::config_error("--kind expects classification or regression");
  }
  cvr::write_libsvm(ds, out);
  std::cout << "wrote " << out << " (n=" << ds.size() << ", d=" << ds.dim()
            << ")\n";
  return kExitOk;
}

// Pinned verification suite over synthetic instances: the step-size rule
// sweep, both gradient-gap inequalities, exhaustive unbiasedness, finite
// differences and the Lyapunov contraction.
int cmd_verify(std::uint64_t seed) {
  using namespace cvr;
  bool all_passed = true;
  auto emit = [&](const CheckReport& r) {
    std::cout << report_to_json(r) << "\n";
    all_passed = all_passed && r.passed;
  };

  {
    Xoshiro256ss rng(mix_u64(seed, 0x76657269));
    CheckReport r;
    r.check = "rate_bound_sufficiency_sweep";
    r.trials = 10000;
    for (long t = 0; t < r.trials; ++t) {
      const double mu = std::pow(10.0, 4.0 * rng.uniform01() - 3.0);
      const double L = mu * (1.0 + 100.0 * rng.uniform01());
      const double eta_max = mu / (2.0 * L * (L + mu));
      const double eta = (1e-6 + (1.0 - 2e-6) * rng.uniform01()) * eta_max;
      if (!rate_bound({L, mu}, eta, 100).valid) ++r.violations;
    }
    r.worst_ratio = r.violations > 0 ? 1.0 : 0.0;
    r.passed = r.violations == 0;
    emit(r);
  }

  const auto reg = generate_regression(5000, 20, 1.0, mix_u64(seed, 1));
  const Problem ridge(reg.data, LossKind::Ridge, 1e-4);
  const Eigen::VectorXd x_star = ridge_minimizer(ridge);
  emit(check_mean_gradient_gap_bound(ridge, x_star, 1000, seed));
  emit(check_pointwise_gradient_gap_bound(ridge, x_star, 1000, seed));
  emit(finite_difference_check(ridge, 200, seed));

  const Dataset cls = generate_classification(5000, 20, mix_u64(seed, 2));
  const Problem logistic(cls, LossKind::Logistic, 1e-4);
  emit(finite_difference_check(logistic, 200, seed));
  {
    GradientTable table(TableMode::FullVector, logistic.size(), logistic.dim());
    Xoshiro256ss rng(mix_u64(seed, 3));
    NormalSampler normal(rng);
    Eigen::VectorXd z(logistic.dim());
    for (Eigen::Index i = 0; i < logistic.size(); ++i) {
      for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = normal.next();
      table.store(logistic, i, i, logistic.grad_coeff(z, i), z);
    }
    table.rebuild_average(logistic);
    Eigen::VectorXd x(logistic.dim());
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = normal.next();
    emit(check_unbiasedness(logistic, table, x));
  }

  {
    const auto small = generate_regression(500, 10, 1.0, mix_u64(seed, 4));
    const Problem p(small.data, LossKind::Ridge, 1e-4);
    const auto consts = p.smoothness_constants(true);
    OptConfig base;
    base.eta = 0.9 * consts.mu / (2.0 * consts.L * (consts.L + consts.mu));
    base.record_wall_time = false;
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 11; ++s)
      seeds.push_back(mix_u64(seed, 100 + s));
    const auto rep = check_lyapunov_contraction(p, base, seeds, 20, true);
    emit(rep.summary);
  }

  return all_passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variance-reduced optimization benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string axis, values;
  std::string kind = "classification", out_path = "data.libsvm";
  long n = 1000, d = 20;
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "run one experiment from a config");
  run->add_option("--config", config_path, "key = value config file")->required();
  run->add_option("--set", overrides, "override, e.g. --set optimizer.eta=0.05");

  auto* sw = app.add_subcommand("sweep", "run an experiment per axis value");
  sw->add_option("--config", config_path)->required();
  sw->add_option("--set", overrides);
  sw->add_option("--axis", axis, "p | tau | eta | speed_factors")->required();
  sw->add_option("--values", values, "comma-separated (';' for list values)")
      ->required();

  auto* verify = app.add_subcommand("verify", "run the convergence checks");
  verify->add_option("--seed", seed);

  auto* gen = app.add_subcommand("gen-data", "write a synthetic dataset");
  gen->add_option("--kind", kind, "classification | regression")->required();
  gen->add_option("--n", n)->required();
  gen->add_option("--d", d)->required();
  gen->add_option("--noise-sigma", noise_sigma);
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, overrides);
    if (sw->parsed()) return cmd_sweep(config_path, overrides, axis, values);
    if (verify->parsed()) return cmd_verify(seed);
    if (gen->parsed())
      return cmd_gen_data(kind, n, d, noise_sigma, seed, out_path);
  } catch (const cvr::divergence_error& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
