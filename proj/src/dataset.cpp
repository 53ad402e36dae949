#include "cvr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cvr/rng.hpp"
#include "cvr/trace.hpp"

namespace cvr {

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("libsvm parse error at line " +
                           std::to_string(line_no) + ": " + what);
}

void apply_row_permutation(Dataset& ds, const std::vector<std::size_t>& perm) {
  MatrixRM feats(ds.features.rows(), ds.features.cols());
  Eigen::VectorXd labels(ds.labels.size());
  for (Eigen::Index r = 0; r < feats.rows(); ++r) {
    feats.row(r) = ds.features.row(static_cast<Eigen::Index>(perm[r]));
    labels[r] = ds.labels[static_cast<Eigen::Index>(perm[r])];
  }
  ds.features = std::move(feats);
  ds.labels = std::move(labels);
}

}  // namespace

Dataset generate_classification(Eigen::Index n, Eigen::Index d,
                                std::uint64_t seed) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument(
        "generate_classification: n must be even and >= 2");
  if (d < 1) throw std::invalid_argument("generate_classification: d >= 1");

  Dataset ds;
  ds.kind_hint = DataKind::Classification;
  ds.features.resize(n, d);
  ds.labels.resize(n);

  // Means sit at +/- u/2 with u the normalized all-ones vector, so the
  // class means are separated by exactly one unit.
  const double shift = 0.5 / std::sqrt(static_cast<double>(d));

  Xoshiro256ss rng(mix_u64(seed, stream::kData));
  NormalSampler normal(rng);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double label = (r % 2 == 0) ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j < d; ++j)
      ds.features(r, j) = normal.next() + label * shift;
    ds.labels[r] = label;
  }

  apply_row_permutation(
      ds, random_permutation(static_cast<std::size_t>(n),
                             mix_u64(seed, stream::kShuffle)));
  return ds;
}

RegressionData generate_regression(Eigen::Index n, Eigen::Index d,
                                   double noise_sigma, std::uint64_t seed) {
  if (n < 1 || d < 1)
    throw std::invalid_argument("generate_regression: n, d >= 1");
  if (noise_sigma < 0)
    throw std::invalid_argument("generate_regression: noise_sigma >= 0");

  RegressionData out;
  out.data.kind_hint = DataKind::Regression;
  out.data.features.resize(n, d);
  out.planted.resize(d);

  Xoshiro256ss rng(mix_u64(seed, stream::kData));
  NormalSampler normal(rng);
  for (Eigen::Index j = 0; j < d; ++j) out.planted[j] = normal.next();
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index j = 0; j < d; ++j) out.data.features(r, j) = normal.next();

  out.data.labels = out.data.features * out.planted;
  for (Eigen::Index r = 0; r < n; ++r)
    out.data.labels[r] += noise_sigma * normal.next();
  return out;
}

Dataset read_libsvm(const std::filesystem::path& path,
                    std::optional<Eigen::Index> expected_dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  std::vector<double> labels;
  std::vector<std::vector<std::pair<Eigen::Index, double>>> rows;
  Eigen::Index max_index = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string token;
    if (!(ls >> token)) continue;  // blank line

    std::size_t used = 0;
    double label = 0.0;
    try {
      label = std::stod(token, &used);
    } catch (const std::exception&) {
      parse_fail(line_no, "bad label '" + token + "'");
    }
    if (used != token.size()) parse_fail(line_no, "bad label '" + token + "'");

    std::vector<std::pair<Eigen::Index, double>> row;
    while (ls >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos || colon == 0 ||
          colon + 1 == token.size())
        parse_fail(line_no, "bad feature token '" + token + "'");
      long long idx = 0;
      double val = 0.0;
      try {
        idx = std::stoll(token.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("");
        const std::string vs = token.substr(colon + 1);
        val = std::stod(vs, &used);
        if (used != vs.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        parse_fail(line_no, "bad feature token '" + token + "'");
      }
      if (idx < 1) parse_fail(line_no, "indices are 1-based");
      if (expected_dim && idx > *expected_dim)
        parse_fail(line_no, "index " + std::to_string(idx) +
                                " exceeds expected dimension " +
                                std::to_string(*expected_dim));
      max_index = std::max<Eigen::Index>(max_index, idx);
      row.emplace_back(static_cast<Eigen::Index>(idx) - 1, val);
    }
    labels.push_back(label);
    rows.push_back(std::move(row));
  }

  if (labels.empty()) throw std::runtime_error("libsvm: no samples");
  const Eigen::Index d = expected_dim.value_or(max_index);
  if (d < 1) throw std::runtime_error("libsvm: no features seen");

  Dataset ds;
  ds.features = MatrixRM::Zero(static_cast<Eigen::Index>(labels.size()), d);
  ds.labels.resize(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t r = 0; r < labels.size(); ++r) {
    ds.labels[static_cast<Eigen::Index>(r)] = labels[r];
    for (const auto& [j, v] : rows[r])
      ds.features(static_cast<Eigen::Index>(r), j) = v;
  }
  const bool binary = (ds.labels.array() == 1.0 || ds.labels.array() == -1.0).all();
  ds.kind_hint = binary ? DataKind::Classification : DataKind::Regression;
  return ds;
}

void write_libsvm(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (Eigen::Index r = 0; r < ds.size(); ++r) {
    out << format_g17(ds.labels[r]);
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
      const double v = ds.features(r, j);
      if (v != 0.0) out << ' ' << (j + 1) << ':' << format_g17(v);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<Shard> partition(const Dataset& ds, int workers,
                             PartitionStrategy strategy, std::uint64_t seed) {
  const Eigen::Index n = ds.size();
  if (workers < 1 || static_cast<Eigen::Index>(workers) > n)
    throw std::invalid_argument("partition: need 1 <= workers <= n");

  std::vector<Shard> shards(static_cast<std::size_t>(workers));
  for (int s = 0; s < workers; ++s) shards[static_cast<std::size_t>(s)].owner = s;

  switch (strategy) {
    case PartitionStrategy::Contiguous: {
      const Eigen::Index base = n / workers;
      const Eigen::Index extra = n % workers;
      Eigen::Index next = 0;
      for (int s = 0; s < workers; ++s) {
        const Eigen::Index count = base + (s < extra ? 1 : 0);
        auto& idx = shards[static_cast<std::size_t>(s)].indices;
        idx.resize(static_cast<std::size_t>(count));
        for (Eigen::Index k = 0; k < count; ++k) idx[static_cast<std::size_t>(k)] = next++;
      }
      break;
    }
    case PartitionStrategy::Strided: {
      for (Eigen::Index i = 0; i < n; ++i)
        shards[static_cast<std::size_t>(i % workers)].indices.push_back(i);
      break;
    }
    case PartitionStrategy::ShuffledEqual: {
      const auto perm = random_permutation(static_cast<std::size_t>(n),
                                           mix_u64(seed, stream::kShuffle));
      const Eigen::Index base = n / workers;
      const Eigen::Index extra = n % workers;
      std::size_t next = 0;
      for (int s = 0; s < workers; ++s) {
        const Eigen::Index count = base + (s < extra ? 1 : 0);
        auto& idx = shards[static_cast<std::size_t>(s)].indices;
        for (Eigen::Index k = 0; k < count; ++k)
          idx.push_back(static_cast<Eigen::Index>(perm[next++]));
      }
      break;
    }
  }
  return shards;
}

}  // namespace cvr
