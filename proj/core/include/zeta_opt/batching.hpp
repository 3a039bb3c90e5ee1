#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "zeta_opt/datasets.hpp"

namespace zeta_opt::data {

struct BatchPlan {
  std::size_t batch_size = 64;
  std::uint64_t shuffle_seed = 0;
  bool drop_last = false;

  void validate() const;
};

struct Batch {
  nn::Tensor2 features;
  std::vector<std::size_t> labels;
};

/// Number of batches produced per epoch for n samples.
std::size_t batches_per_epoch(std::size_t n, const BatchPlan& plan);

/// Walks one epoch of a dataset in an order seeded by (shuffle_seed, epoch).
class BatchIterator {
 public:
  BatchIterator(const Dataset& ds, const BatchPlan& plan, std::uint64_t epoch);

  std::optional<Batch> next();
  const std::vector<std::size_t>& order() const { return order_; }

 private:
  const Dataset* ds_;
  BatchPlan plan_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

std::vector<Batch> iterate_batches(const Dataset& ds, const BatchPlan& plan, std::uint64_t epoch);

}  // namespace zeta_opt::data
