#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zeta_opt::nn {

/// Dense row-major matrix of doubles.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0);
  Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data);

  /// Builds a matrix from nested rows; all rows must have equal length.
  static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool same_shape(const Tensor2& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;
  void fill(double value);

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Euclidean norm of all entries.
double frobenius_norm(const Tensor2& t);

struct ParamEntry {
  std::string name;
  Tensor2 value;
  Tensor2 grad;
  /// Weight matrices are centralized by the optimizer; bias columns are not.
  bool is_matrix = false;
};

/// Ordered set of named parameters with paired gradients.
class ParamSet {
 public:
  /// Adds a parameter with a zero gradient. Names must be unique.
  ParamEntry& add(std::string name, Tensor2 value, bool is_matrix);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  /// Total number of scalar parameters.
  std::size_t num_scalars() const;

  ParamEntry& operator[](std::size_t i) { return entries_[i]; }
  const ParamEntry& operator[](std::size_t i) const { return entries_[i]; }
  ParamEntry& at(std::string_view name);
  const ParamEntry& at(std::string_view name) const;

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  void zero_grad();
  std::vector<double> flatten_values() const;
  std::vector<double> flatten_grads() const;
  /// Global L2 norm over every gradient entry.
  double grad_norm() const;

  friend bool operator==(const ParamSet& a, const ParamSet& b);

 private:
  std::vector<ParamEntry> entries_;
};

bool operator==(const ParamEntry& a, const ParamEntry& b);

/// FNV-1a hash of names, shapes and value bits. Used to confirm that two runs
/// start from the same parameters.
std::uint64_t checksum(const ParamSet& params);

}  // namespace zeta_opt::nn
