#include "zeta_opt/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "zeta_opt/error.hpp"

namespace zeta_opt::nn {

Tensor2::Tensor2(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor2::Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("Tensor2: data length " + std::to_string(data_.size()) + " != " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
}

Tensor2 Tensor2::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) {
      throw ShapeError("Tensor2::from_rows: ragged rows");
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor2(r, c, std::move(data));
}

bool Tensor2::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

void Tensor2::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

double frobenius_norm(const Tensor2& t) {
  double sum = 0.0;
  for (double x : t.values()) {
    sum += x * x;
  }
  return std::sqrt(sum);
}

ParamEntry& ParamSet::add(std::string name, Tensor2 value, bool is_matrix) {
  for (const auto& e : entries_) {
    if (e.name == name) {
      throw ShapeError("ParamSet: duplicate parameter name '" + name + "'");
    }
  }
  Tensor2 grad(value.rows(), value.cols());
  entries_.push_back({std::move(name), std::move(value), std::move(grad), is_matrix});
  return entries_.back();
}

std::size_t ParamSet::num_scalars() const {
  return std::accumulate(entries_.begin(), entries_.end(), std::size_t{0},
                         [](std::size_t acc, const ParamEntry& e) { return acc + e.value.size(); });
}

ParamEntry& ParamSet::at(std::string_view name) {
  for (auto& e : entries_) {
    if (e.name == name) {
      return e;
    }
  }
  throw ShapeError("ParamSet: no parameter named '" + std::string(name) + "'");
}

const ParamEntry& ParamSet::at(std::string_view name) const {
  return const_cast<ParamSet&>(*this).at(name);
}

void ParamSet::zero_grad() {
  for (auto& e : entries_) {
    e.grad.fill(0.0);
  }
}

std::vector<double> ParamSet::flatten_values() const {
  std::vector<double> out;
  out.reserve(num_scalars());
  for (const auto& e : entries_) {
    out.insert(out.end(), e.value.values().begin(), e.value.values().end());
  }
  return out;
}

std::vector<double> ParamSet::flatten_grads() const {
  std::vector<double> out;
  out.reserve(num_scalars());
  for (const auto& e : entries_) {
    out.insert(out.end(), e.grad.values().begin(), e.grad.values().end());
  }
  return out;
}

double ParamSet::grad_norm() const {
  double sum = 0.0;
  for (const auto& e : entries_) {
    for (double g : e.grad.values()) {
      sum += g * g;
    }
  }
  return std::sqrt(sum);
}

bool operator==(const ParamEntry& a, const ParamEntry& b) {
  return a.name == b.name && a.is_matrix == b.is_matrix && a.value == b.value && a.grad == b.grad;
}

bool operator==(const ParamSet& a, const ParamSet& b) { return a.entries_ == b.entries_; }

std::uint64_t checksum(const ParamSet& params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& e : params) {
    for (char c : e.name) {
      mix(static_cast<unsigned char>(c));
    }
    mix(e.value.rows());
    mix(e.value.cols());
    for (double x : e.value.values()) {
      mix(std::bit_cast<std::uint64_t>(x));
    }
  }
  return h;
}

}  // namespace zeta_opt::nn
