#ifndef CVR_DATASET_HPP
#define CVR_DATASET_HPP

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace cvr {

using MatrixRM =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class DataKind { Classification, Regression };

// Dense design matrix (one sample per row) plus labels. Immutable after
// construction; optimizer runs share it read-only.
struct Dataset {
  MatrixRM features;
  Eigen::VectorXd labels;
  DataKind kind_hint = DataKind::Regression;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
};

// Two Gaussian clouds with unit variance, means one unit apart along the
// normalized all-ones direction, labels +1/-1, equal class counts.
// n must be even. Deterministic in seed.
Dataset generate_classification(Eigen::Index n, Eigen::Index d,
                                std::uint64_t seed);

struct RegressionData {
  Dataset data;
  Eigen::VectorXd planted;  // the coefficient vector the labels were built from
};

// b = A x* + noise, all entries standard normal, noise scaled by noise_sigma.
RegressionData generate_regression(Eigen::Index n, Eigen::Index d,
                                   double noise_sigma, std::uint64_t seed);

// Text format: `label idx:val idx:val ...` per line, 1-based indices,
// missing indices zero. Dimension is the max index seen unless expected_dim
// is given. Malformed input raises std::runtime_error with the line number.
Dataset read_libsvm(const std::filesystem::path& path,
                    std::optional<Eigen::Index> expected_dim = std::nullopt);

// Writes nonzero entries with 17 significant digits so a read round-trips.
void write_libsvm(const Dataset& ds, const std::filesystem::path& path);

enum class PartitionStrategy { Contiguous, Strided, ShuffledEqual };

struct Shard {
  int owner = 0;
  std::vector<Eigen::Index> indices;  // global sample indices owned by this worker
};

// Disjoint cover of {0..n-1} across `workers` shards; sizes differ by at
// most one. Deterministic in seed (seed only matters for ShuffledEqual).
std::vector<Shard> partition(const Dataset& ds, int workers,
                             PartitionStrategy strategy, std::uint64_t seed);

}  // namespace cvr

#endif  // CVR_DATASET_HPP
