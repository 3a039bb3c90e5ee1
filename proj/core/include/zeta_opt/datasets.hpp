#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "zeta_opt/tensor.hpp"

namespace zeta_opt::data {

struct Dataset {
  nn::Tensor2 features;  // [n x d]
  std::vector<std::size_t> labels;
  std::size_t num_classes = 0;
  std::string name;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }

  /// Throws DataError if labels or features break the dataset invariants.
  void validate() const;
  /// Rows at the given indices, in that order.
  Dataset subset(const std::vector<std::size_t>& indices, std::string subset_name) const;
  std::vector<std::size_t> class_counts() const;
};

/// k isotropic Gaussian clusters with standard deviation `spread`. Sample i
/// belongs to class i mod k, so counts differ by at most one.
Dataset make_blobs(std::size_t n, std::size_t d, std::size_t k, double spread, std::uint64_t seed,
                   double center_scale = 3.0);

/// Point on arm `arm` of a k-arm spiral at curve parameter u in [0, 1].
struct Point2 {
  double x;
  double y;
};
Point2 spiral_point(std::size_t arm, std::size_t k, double u);

/// k interleaved 2-D spiral arms, one class per arm, with Gaussian jitter.
Dataset make_spirals(std::size_t n, std::size_t k, double noise, std::uint64_t seed);

struct NoisyDataset {
  Dataset dataset;
  std::vector<std::size_t> flipped;
};

/// Symmetric label noise: each sample is flipped with probability `rate` to a
/// uniformly chosen different class. The input is left untouched.
NoisyDataset inject_label_noise(const Dataset& ds, double rate, std::uint64_t seed);

struct Split {
  Dataset train;
  Dataset test;
};

/// Seeded random split with round(n * test_fraction) test samples. Classes
/// with at least two samples are kept present on both sides.
Split train_test_split(const Dataset& ds, double test_fraction, std::uint64_t seed);

struct CsvOptions {
  bool skip_header = false;
  /// Min-max scale each feature column to [0, 1] (constant columns become 0).
  bool minmax_scale = false;
};

/// Rows are `label,f1,...,fd`. Errors name the offending line.
Dataset load_csv_dataset(const std::filesystem::path& path, std::size_t num_classes,
                         const CsvOptions& opts = {});

}  // namespace zeta_opt::data
