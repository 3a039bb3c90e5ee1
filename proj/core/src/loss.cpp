#include "zeta_opt/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zeta_opt/error.hpp"

namespace zeta_opt::nn {
namespace {

// Max-subtracted log-softmax of one row.
void log_softmax_row(std::span<const double> z, std::span<double> out) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) {
    sum += std::exp(v - zmax);
  }
  const double lse = std::log(sum);
  for (std::size_t j = 0; j < z.size(); ++j) {
    out[j] = z[j] - zmax - lse;
  }
}

}  // namespace

void LossConfig::validate() const {
  if (!(entropy_weight >= 0.0)) {
    throw DomainError("LossConfig: entropy_weight must be >= 0");
  }
}

Tensor2 softmax(const Tensor2& logits) {
  Tensor2 probs(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto z = logits.row(r);
    auto p = probs.row(r);
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      p[j] = std::exp(z[j] - zmax);
      sum += p[j];
    }
    for (double& v : p) {
      v /= sum;
    }
  }
  return probs;
}

LossResult entropy_regularized_loss(const Tensor2& logits, std::span<const std::size_t> labels,
                                    const LossConfig& cfg) {
  cfg.validate();
  const std::size_t batch = logits.rows();
  const std::size_t k = logits.cols();
  if (batch == 0 || labels.size() != batch) {
    throw ShapeError("entropy_regularized_loss: need one label per logit row and batch >= 1");
  }
  const double lambda = cfg.entropy_weight;
  const double inv_b = 1.0 / static_cast<double>(batch);

  LossResult result{0.0, Tensor2(batch, k)};
  std::vector<double> logp(k);
  double ce_sum = 0.0;
  double entropy_sum = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    const std::size_t y = labels[b];
    if (y >= k) {
      throw DataError("entropy_regularized_loss: label " + std::to_string(y) + " at row " +
                      std::to_string(b) + " outside [0, " + std::to_string(k) + ")");
    }
    log_softmax_row(logits.row(b), logp);
    double entropy = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      entropy -= std::exp(logp[j]) * logp[j];
    }
    ce_sum -= logp[y];
    entropy_sum += entropy;

    auto g = result.dloss_dlogits.row(b);
    for (std::size_t j = 0; j < k; ++j) {
      const double p = std::exp(logp[j]);
      const double dce = p - (j == y ? 1.0 : 0.0);
      const double dentropy = -p * (logp[j] + entropy);
      g[j] = (dce - lambda * dentropy) * inv_b;
    }
  }
  result.loss = (ce_sum - lambda * entropy_sum) * inv_b;
  return result;
}

double accuracy(const Tensor2& logits, std::span<const std::size_t> labels) {
  if (labels.size() != logits.rows()) {
    throw ShapeError("accuracy: label count does not match logits rows");
  }
  if (labels.empty()) {
    return 0.0;
  }
  std::size_t correct = 0;
  for (std::size_t b = 0; b < logits.rows(); ++b) {
    const auto z = logits.row(b);
    const auto best = static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
    correct += best == labels[b] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

}  // namespace zeta_opt::nn
