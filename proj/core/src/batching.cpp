#include "zeta_opt/batching.hpp"

#include <algorithm>
#include <numeric>

#include "zeta_opt/error.hpp"
#include "zeta_opt/random.hpp"

namespace zeta_opt::data {

void BatchPlan::validate() const {
  if (batch_size < 1) {
    throw DataError("BatchPlan: batch_size must be >= 1");
  }
}

std::size_t batches_per_epoch(std::size_t n, const BatchPlan& plan) {
  plan.validate();
  return plan.drop_last ? n / plan.batch_size : (n + plan.batch_size - 1) / plan.batch_size;
}

BatchIterator::BatchIterator(const Dataset& ds, const BatchPlan& plan, std::uint64_t epoch)
    : ds_(&ds), plan_(plan), order_(ds.size()) {
  plan_.validate();
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  Rng rng(derive_seed(plan_.shuffle_seed, epoch));
  rng.shuffle(std::span(order_));
}

std::optional<Batch> BatchIterator::next() {
  const std::size_t remaining = order_.size() - cursor_;
  if (remaining == 0 || (plan_.drop_last && remaining < plan_.batch_size)) {
    return std::nullopt;
  }
  const std::size_t count = std::min(remaining, plan_.batch_size);
  Batch batch{nn::Tensor2(count, ds_->dim()), {}};
  batch.labels.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    const std::size_t src = order_[cursor_ + r];
    const auto row = ds_->features.row(src);
    std::copy(row.begin(), row.end(), batch.features.row(r).begin());
    batch.labels.push_back(ds_->labels[src]);
  }
  cursor_ += count;
  return batch;
}

std::vector<Batch> iterate_batches(const Dataset& ds, const BatchPlan& plan, std::uint64_t epoch) {
  BatchIterator it(ds, plan, epoch);
  std::vector<Batch> out;
  while (auto batch = it.next()) {
    out.push_back(std::move(*batch));
  }
  return out;
}

}  // namespace zeta_opt::data
