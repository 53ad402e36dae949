#include "cvr/checks.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvr/rng.hpp"
#include "json.hpp"

namespace cvr {

RateBound rate_bound(const SmoothnessConstants& consts, double eta,
                     Eigen::Index n) {
  if (!(consts.mu > 0) || consts.L < consts.mu)
    throw std::invalid_argument("rate_bound: need L >= mu > 0");
  if (!(eta > 0)) throw std::invalid_argument("rate_bound: eta > 0");

  RateBound out;
  out.eta_max = consts.mu / (2.0 * consts.L * (consts.L + consts.mu));
  const double denom = 1.0 - 2.0 * consts.L * eta;
  if (denom <= 0) {
    out.valid = false;
    out.reason = "1 - 2 L eta <= 0";
    out.alpha = std::numeric_limits<double>::infinity();
    out.c = 2.0 * static_cast<double>(n) * eta * denom;
    return out;
  }
  out.alpha = std::max(1.0 - eta * consts.mu,
                       2.0 * consts.L * consts.L * eta / (consts.mu * denom));
  out.c = 2.0 * static_cast<double>(n) * eta * denom;
  out.valid = out.alpha > 0 && out.alpha < 1 && out.c > 0;
  if (!out.valid) out.reason = "alpha outside (0, 1)";
  return out;
}

std::string report_to_json(const CheckReport& report) {
  nlohmann::json j{{"check", report.check},
                   {"trials", report.trials},
                   {"violations", report.violations},
                   {"worst_ratio", report.worst_ratio},
                   {"passed", report.passed}};
  return j.dump();
}

namespace {

// Random test point around x_star at a log-uniform scale in [1e-3, 1e3],
// exercising both near-optimal and far-field regimes.
Eigen::VectorXd random_point(const Eigen::VectorXd& x_star, Xoshiro256ss& rng,
                             NormalSampler& normal) {
  const double scale = std::pow(10.0, 6.0 * rng.uniform01() - 3.0);
  Eigen::VectorXd x = x_star;
  for (Eigen::Index j = 0; j < x.size(); ++j) x[j] += scale * normal.next();
  return x;
}

double safe_ratio(double lhs, double rhs) {
  if (rhs <= 0) return lhs <= 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

}  // namespace

CheckReport check_mean_gradient_gap_bound(const Problem& p,
                                          const Eigen::VectorXd& x_star,
                                          long trials, std::uint64_t seed,
                                          double slack) {
  const auto consts = p.smoothness_constants(p.kind() == LossKind::Ridge);
  const double f_star = p.full_value(x_star);
  Xoshiro256ss rng(mix_u64(seed, 0x6c656d31));
  NormalSampler normal(rng);

  CheckReport out;
  out.check = "mean_gradient_gap_bound";
  out.trials = trials;
  out.worst_ratio = 0.0;
  for (long t = 0; t < trials; ++t) {
    const Eigen::VectorXd x = random_point(x_star, rng, normal);
    double lhs = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
      lhs += (p.loss_gradient(x, i) - p.loss_gradient(x_star, i)).squaredNorm();
    lhs /= static_cast<double>(p.size());
    const double rhs = 2.0 * consts.L * (p.full_value(x) - f_star) + slack;
    out.worst_ratio = std::max(out.worst_ratio, safe_ratio(lhs, rhs));
    if (lhs > rhs) ++out.violations;
  }
  out.passed = out.violations == 0;
  return out;
}

CheckReport check_pointwise_gradient_gap_bound(const Problem& p,
                                               const Eigen::VectorXd& x_star,
                                               long trials, std::uint64_t seed,
                                               double slack) {
  const auto consts = p.smoothness_constants(p.kind() == LossKind::Ridge);
  const double f_star = p.full_value(x_star);
  const double coeff = 2.0 * consts.L * consts.L / consts.mu;
  Xoshiro256ss rng(mix_u64(seed, 0x6c656d32));
  NormalSampler normal(rng);

  CheckReport out;
  out.check = "pointwise_gradient_gap_bound";
  out.trials = trials;
  out.worst_ratio = 0.0;
  for (long t = 0; t < trials; ++t) {
    const Eigen::VectorXd x = random_point(x_star, rng, normal);
    const Eigen::Index i =
        static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(p.size())));
    const double lhs =
        (p.loss_gradient(x, i) - p.loss_gradient(x_star, i)).squaredNorm();
    const double rhs = coeff * (p.full_value(x) - f_star) + slack;
    out.worst_ratio = std::max(out.worst_ratio, safe_ratio(lhs, rhs));
    if (lhs > rhs) ++out.violations;
  }
  out.passed = out.violations == 0;
  return out;
}

CheckReport check_unbiasedness(const Problem& p, const GradientTable& table,
                               const Eigen::VectorXd& x, double tol) {
  const Eigen::Index n = p.size();
  const Eigen::Index d = p.dim();
  // Compensated mean of the corrected gradients keeps the summation error
  // well below the asserted tolerance.
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd comp = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd v = corrected_gradient(table, p, x, i);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double y = v[j] - comp[j];
      const double t = sum[j] + y;
      comp[j] = (t - sum[j]) - y;
      sum[j] = t;
    }
  }
  const Eigen::VectorXd mean = sum / static_cast<double>(n);
  const double err = (mean - p.full_gradient(x)).lpNorm<Eigen::Infinity>();

  CheckReport out;
  out.check = "corrected_gradient_unbiasedness";
  out.trials = 1;
  out.violations = err <= tol ? 0 : 1;
  out.worst_ratio = err / tol;
  out.passed = out.violations == 0;
  return out;
}

CheckReport finite_difference_check(const Problem& p, long trials,
                                    std::uint64_t seed) {
  Xoshiro256ss rng(mix_u64(seed, 0x66646966));
  NormalSampler normal(rng);
  const double h = 1e-6;
  const double tol = 1e-5;

  CheckReport out;
  out.check = "finite_difference_gradient";
  out.trials = trials;
  out.worst_ratio = 0.0;
  for (long t = 0; t < trials; ++t) {
    Eigen::VectorXd x(p.dim());
    for (Eigen::Index j = 0; j < p.dim(); ++j) x[j] = normal.next();
    const Eigen::Index i =
        static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(p.size())));
    const Eigen::VectorXd g = p.loss_gradient(x, i);
    Eigen::VectorXd fd(p.dim());
    Eigen::VectorXd xp = x;
    for (Eigen::Index j = 0; j < p.dim(); ++j) {
      xp[j] = x[j] + h;
      const double fplus = p.loss_value(xp, i);
      xp[j] = x[j] - h;
      const double fminus = p.loss_value(xp, i);
      xp[j] = x[j];
      fd[j] = (fplus - fminus) / (2.0 * h);
    }
    const double rel = (fd - g).lpNorm<Eigen::Infinity>() /
                       std::max(1.0, g.lpNorm<Eigen::Infinity>());
    out.worst_ratio = std::max(out.worst_ratio, rel / tol);
    if (rel > tol) ++out.violations;
  }
  out.passed = out.violations == 0;
  return out;
}

Eigen::VectorXd ridge_minimizer(const Problem& p) {
  if (p.kind() != LossKind::Ridge)
    throw std::invalid_argument("ridge_minimizer: ridge problems only");
  const auto& A = p.data().features;
  const double n = static_cast<double>(p.size());
  Eigen::MatrixXd H = (2.0 / n) * (A.transpose() * A);
  H.diagonal().array() += 2.0 * p.lambda();
  const Eigen::VectorXd rhs = (2.0 / n) * (A.transpose() * p.data().labels);
  return H.ldlt().solve(rhs);
}

Eigen::VectorXd reference_minimizer(const Problem& p, double target_rel) {
  const auto consts = p.smoothness_constants(false);
  OptConfig cfg;
  cfg.eta = 1.0 / (3.0 * consts.L);
  cfg.epochs = 20000;
  cfg.sampling = Sampling::PermutationPerEpoch;
  cfg.seed = 0x72656660;
  cfg.target_rel_grad = target_rel;
  cfg.record_wall_time = false;
  return run_centralvr(p, cfg).x;
}

LyapunovReport check_lyapunov_contraction(const Problem& p,
                                          const OptConfig& base,
                                          const std::vector<std::uint64_t>& seeds,
                                          long epochs, bool tight_mu,
                                          double slack) {
  if (p.kind() != LossKind::Ridge)
    throw std::invalid_argument("check_lyapunov_contraction: ridge only");
  if (seeds.empty())
    throw std::invalid_argument("check_lyapunov_contraction: need seeds");

  LyapunovReport out;
  out.rate = rate_bound(p.smoothness_constants(tight_mu), base.eta, p.size());
  if (!out.rate.valid)
    throw std::domain_error("check_lyapunov_contraction: rate bound invalid (" +
                            out.rate.reason + ")");

  const Eigen::VectorXd x_star = ridge_minimizer(p);
  const double f_star = p.full_value(x_star);

  std::vector<std::vector<double>> ratios(
      static_cast<std::size_t>(epochs),
      std::vector<double>(seeds.size(), 0.0));

  for (std::size_t si = 0; si < seeds.size(); ++si) {
    OptConfig cfg = base;
    cfg.seed = seeds[si];
    cfg.sampling = Sampling::UniformWithReplacement;
    cfg.epochs = epochs + 1;
    cfg.table_mode = TableMode::FullVector;
    cfg.target_rel_grad.reset();
    cfg.f_star.reset();

    EpochProbe probe;
    probe.track_stored_fvals = true;
    run_centralvr(p, cfg, Eigen::VectorXd::Zero(p.dim()), &probe);

    std::vector<double> V(static_cast<std::size_t>(epochs) + 1, 0.0);
    for (long m = 0; m <= epochs; ++m) {
      const auto& start = probe.epoch_starts[static_cast<std::size_t>(m) + 1];
      V[static_cast<std::size_t>(m)] =
          (start - x_star).squaredNorm() +
          out.rate.c *
              (probe.stored_fvals_mean[static_cast<std::size_t>(m)] - f_star);
    }
    for (long m = 0; m < epochs; ++m)
      ratios[static_cast<std::size_t>(m)][si] =
          V[static_cast<std::size_t>(m) + 1] / V[static_cast<std::size_t>(m)];
  }

  out.median_ratios.resize(static_cast<std::size_t>(epochs));
  for (long m = 0; m < epochs; ++m) {
    auto& r = ratios[static_cast<std::size_t>(m)];
    const std::size_t mid = r.size() / 2;
    std::nth_element(r.begin(), r.begin() + static_cast<long>(mid), r.end());
    double med = r[mid];
    if (r.size() % 2 == 0) {
      const double lo = *std::max_element(r.begin(), r.begin() + static_cast<long>(mid));
      med = 0.5 * (lo + med);
    }
    out.median_ratios[static_cast<std::size_t>(m)] = med;
  }

  const double bound = out.rate.alpha + slack;
  out.summary.check = "lyapunov_contraction";
  out.summary.trials = static_cast<long>(seeds.size());
  out.summary.worst_ratio = 0.0;
  for (double med : out.median_ratios) {
    out.summary.worst_ratio = std::max(out.summary.worst_ratio, med / bound);
    if (med > bound) ++out.summary.violations;
  }
  out.summary.passed = out.summary.violations == 0;
  return out;
}

}  // namespace cvr
