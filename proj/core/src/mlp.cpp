#include "zeta_opt/mlp.hpp"

#include <cmath>
#include <string>

#include "zeta_opt/error.hpp"
#include "zeta_opt/random.hpp"

namespace zeta_opt::nn {
namespace {

Tensor2 uniform_weights(std::size_t out, std::size_t in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  Tensor2 w(out, in);
  for (double& x : w.values()) {
    x = rng.uniform(-bound, bound);
  }
  return w;
}

struct Layers {
  const Tensor2& w1;
  const Tensor2& b1;
  const Tensor2& w2;
  const Tensor2& b2;
};

Layers layers_of(const ParamSet& params) {
  return {params.at(kFc1Weight).value, params.at(kFc1Bias).value, params.at(kFc2Weight).value,
          params.at(kFc2Bias).value};
}

// out[b, o] = bias[o] + sum_i in[b, i] * w[o, i]
void affine(const Tensor2& in, const Tensor2& w, const Tensor2& bias, Tensor2& out) {
  for (std::size_t b = 0; b < in.rows(); ++b) {
    const auto x = in.row(b);
    for (std::size_t o = 0; o < w.rows(); ++o) {
      const auto wr = w.row(o);
      double acc = bias(o, 0);
      for (std::size_t i = 0; i < wr.size(); ++i) {
        acc += x[i] * wr[i];
      }
      out(b, o) = acc;
    }
  }
}

// dw[o, i] = sum_b d[b, o] * in[b, i];  db[o] = sum_b d[b, o]
void affine_param_grads(const Tensor2& in, const Tensor2& d, Tensor2& dw, Tensor2& db) {
  dw.fill(0.0);
  db.fill(0.0);
  for (std::size_t b = 0; b < in.rows(); ++b) {
    const auto x = in.row(b);
    for (std::size_t o = 0; o < d.cols(); ++o) {
      const double g = d(b, o);
      db(o, 0) += g;
      if (g == 0.0) {
        continue;
      }
      auto dwr = dw.row(o);
      for (std::size_t i = 0; i < x.size(); ++i) {
        dwr[i] += g * x[i];
      }
    }
  }
}

}  // namespace

void MlpConfig::validate() const {
  if (input_dim < 1 || hidden_dim < 1 || num_classes < 1) {
    throw ShapeError("MlpConfig: all dimensions must be >= 1");
  }
}

ParamSet mlp_init(const MlpConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  ParamSet params;
  params.add(kFc1Weight, uniform_weights(cfg.hidden_dim, cfg.input_dim, rng), true);
  params.add(kFc1Bias, Tensor2(cfg.hidden_dim, 1), false);
  params.add(kFc2Weight, uniform_weights(cfg.num_classes, cfg.hidden_dim, rng), true);
  params.add(kFc2Bias, Tensor2(cfg.num_classes, 1), false);
  return params;
}

MlpActivations mlp_forward_cached(const ParamSet& params, const Tensor2& x) {
  const Layers l = layers_of(params);
  if (x.cols() != l.w1.cols()) {
    throw ShapeError("mlp_forward: input has " + std::to_string(x.cols()) +
                     " columns, expected " + std::to_string(l.w1.cols()));
  }
  MlpActivations acts{Tensor2(x.rows(), l.w1.rows()), Tensor2(x.rows(), l.w1.rows()),
                      Tensor2(x.rows(), l.w2.rows())};
  affine(x, l.w1, l.b1, acts.hidden_pre);
  const auto pre = acts.hidden_pre.values();
  auto hid = acts.hidden.values();
  for (std::size_t i = 0; i < pre.size(); ++i) {
    hid[i] = pre[i] > 0.0 ? pre[i] : 0.0;
  }
  affine(acts.hidden, l.w2, l.b2, acts.logits);
  if (!acts.logits.all_finite()) {
    throw NumericError("mlp_forward: non-finite logits");
  }
  return acts;
}

Tensor2 mlp_forward(const ParamSet& params, const Tensor2& x) {
  return mlp_forward_cached(params, x).logits;
}

void mlp_backward(ParamSet& params, const Tensor2& x, const MlpActivations& acts,
                  const Tensor2& dloss_dlogits) {
  if (!dloss_dlogits.same_shape(acts.logits) || x.rows() != acts.hidden.rows()) {
    throw ShapeError("mlp_backward: dloss_dlogits / input shape does not match forward pass");
  }
  auto& fc1w = params.at(kFc1Weight);
  auto& fc1b = params.at(kFc1Bias);
  auto& fc2w = params.at(kFc2Weight);
  auto& fc2b = params.at(kFc2Bias);

  affine_param_grads(acts.hidden, dloss_dlogits, fc2w.grad, fc2b.grad);

  // Back through W2 and the ReLU.
  Tensor2 dpre(x.rows(), fc1w.value.rows());
  for (std::size_t b = 0; b < x.rows(); ++b) {
    for (std::size_t c = 0; c < dloss_dlogits.cols(); ++c) {
      const double g = dloss_dlogits(b, c);
      if (g == 0.0) {
        continue;
      }
      const auto w = fc2w.value.row(c);
      auto d = dpre.row(b);
      for (std::size_t h = 0; h < d.size(); ++h) {
        d[h] += g * w[h];
      }
    }
    for (std::size_t h = 0; h < dpre.cols(); ++h) {
      if (!(acts.hidden_pre(b, h) > 0.0)) {
        dpre(b, h) = 0.0;
      }
    }
  }
  affine_param_grads(x, dpre, fc1w.grad, fc1b.grad);
}

void mlp_backward(ParamSet& params, const Tensor2& x, const Tensor2& dloss_dlogits) {
  mlp_backward(params, x, mlp_forward_cached(params, x), dloss_dlogits);
}

}  // namespace zeta_opt::nn
