#include "zeta_opt/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "zeta_opt/error.hpp"
#include "zeta_opt/random.hpp"

namespace zeta_opt::data {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

void Dataset::validate() const {
  if (labels.empty()) {
    throw DataError("dataset '" + name + "' is empty");
  }
  if (features.rows() != labels.size()) {
    throw DataError("dataset '" + name + "': feature rows do not match label count");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= num_classes) {
      throw DataError("dataset '" + name + "': label " + std::to_string(labels[i]) +
                      " at row " + std::to_string(i) + " out of range");
    }
  }
  if (!features.all_finite()) {
    throw DataError("dataset '" + name + "': non-finite feature value");
  }
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices, std::string subset_name) const {
  Dataset out;
  out.num_classes = num_classes;
  out.name = std::move(subset_name);
  out.features = nn::Tensor2(indices.size(), dim());
  out.labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto src = features.row(indices[r]);
    std::copy(src.begin(), src.end(), out.features.row(r).begin());
    out.labels.push_back(labels[indices[r]]);
  }
  return out;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes, 0);
  for (std::size_t y : labels) {
    ++counts[y];
  }
  return counts;
}

Dataset make_blobs(std::size_t n, std::size_t d, std::size_t k, double spread, std::uint64_t seed,
                   double center_scale) {
  if (k < 2 || n < k || d < 1 || !(spread > 0.0)) {
    throw DataError("make_blobs: need n >= k >= 2, d >= 1, spread > 0");
  }
  Rng rng(seed);
  nn::Tensor2 centers(k, d);
  if (k <= d) {
    // Vertices of a scaled simplex, on a seeded choice of axes.
    std::vector<std::size_t> axes(d);
    std::iota(axes.begin(), axes.end(), std::size_t{0});
    rng.shuffle(std::span(axes));
    for (std::size_t c = 0; c < k; ++c) {
      centers(c, axes[c]) = center_scale;
    }
  } else {
    for (double& x : centers.values()) {
      x = center_scale * rng.normal();
    }
  }

  Dataset ds;
  ds.name = "blobs";
  ds.num_classes = k;
  ds.features = nn::Tensor2(n, d);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % k;
    ds.labels[i] = c;
    auto row = ds.features.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = centers(c, j) + spread * rng.normal();
    }
  }
  return ds;
}

Point2 spiral_point(std::size_t arm, std::size_t k, double u) {
  // Radius grows linearly over 1.5 turns; arms are rotated copies.
  const double angle =
      3.0 * std::numbers::pi * u + 2.0 * std::numbers::pi * static_cast<double>(arm) /
                                        static_cast<double>(k);
  return {u * std::cos(angle), u * std::sin(angle)};
}

Dataset make_spirals(std::size_t n, std::size_t k, double noise, std::uint64_t seed) {
  if (k < 2 || n < k || !(noise >= 0.0)) {
    throw DataError("make_spirals: need n >= k >= 2 and noise >= 0");
  }
  Rng rng(seed);
  Dataset ds;
  ds.name = "spirals";
  ds.num_classes = k;
  ds.features = nn::Tensor2(n, 2);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t arm = i % k;
    const double u = rng.uniform();
    const Point2 p = spiral_point(arm, k, u);
    const double jx = rng.normal();
    const double jy = rng.normal();
    ds.features(i, 0) = p.x + noise * jx;
    ds.features(i, 1) = p.y + noise * jy;
    ds.labels[i] = arm;
  }
  return ds;
}

NoisyDataset inject_label_noise(const Dataset& ds, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw DataError("inject_label_noise: rate must lie in [0, 1]");
  }
  if (ds.num_classes < 2) {
    throw DataError("inject_label_noise: need at least two classes");
  }
  Rng rng(seed);
  NoisyDataset out{ds, {}};
  out.dataset.name = ds.name + "+noise";
  const auto k = static_cast<std::uint64_t>(ds.num_classes);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (rng.uniform() < rate) {
      const auto shift = 1 + rng.below(k - 1);
      out.dataset.labels[i] = static_cast<std::size_t>((ds.labels[i] + shift) % k);
      out.flipped.push_back(i);
    }
  }
  return out;
}

Split train_test_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw DataError("train_test_split: test_fraction must lie in (0, 1)");
  }
  const std::size_t n = ds.size();
  const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
  if (n_test == 0 || n_test >= n) {
    throw DataError("train_test_split: split of " + std::to_string(n) + " samples at fraction " +
                    std::to_string(test_fraction) + " leaves one side empty");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span(order));

  // order[0, n_test) is the test side. Swap single samples across the
  // boundary so every class with >= 2 samples is present on both sides.
  const auto side_counts = [&](std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> counts(ds.num_classes, 0);
    for (std::size_t i = lo; i < hi; ++i) {
      ++counts[ds.labels[order[i]]];
    }
    return counts;
  };
  for (std::size_t c = 0; c < ds.num_classes; ++c) {
    auto test_counts = side_counts(0, n_test);
    auto train_counts = side_counts(n_test, n);
    if (test_counts[c] + train_counts[c] < 2) {
      continue;
    }
    const bool test_missing = test_counts[c] == 0;
    const bool train_missing = train_counts[c] == 0;
    if (!test_missing && !train_missing) {
      continue;
    }
    // Donor side has >= 2 of class c; give one away in exchange for a sample
    // of a class the donor can spare.
    const std::size_t d_lo = test_missing ? n_test : 0;
    const std::size_t d_hi = test_missing ? n : n_test;
    const std::size_t r_lo = test_missing ? 0 : n_test;
    const std::size_t r_hi = test_missing ? n_test : n;
    auto& receiver_counts = test_missing ? test_counts : train_counts;
    std::size_t give = d_hi;
    for (std::size_t i = d_lo; i < d_hi; ++i) {
      if (ds.labels[order[i]] == c) {
        give = i;
        break;
      }
    }
    std::size_t take = r_hi;
    for (std::size_t i = r_lo; i < r_hi; ++i) {
      if (receiver_counts[ds.labels[order[i]]] >= 2) {
        take = i;
        break;
      }
    }
    if (give < d_hi && take < r_hi) {
      std::swap(order[give], order[take]);
    }
  }

  std::vector<std::size_t> test_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  return {ds.subset(train_idx, ds.name + ":train"), ds.subset(test_idx, ds.name + ":test")};
}

Dataset load_csv_dataset(const std::filesystem::path& path, std::size_t num_classes,
                         const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open dataset file: " + path.string());
  }
  if (num_classes < 1) {
    throw DataError("load_csv_dataset: num_classes must be >= 1");
  }
  const std::string where = path.string();
  std::vector<double> values;
  std::vector<std::size_t> labels;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && opts.skip_header) {
      continue;
    }
    if (trim(line).empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
      fields.emplace_back();
    }
    if (fields.size() < 2) {
      throw DataError(where + ":" + std::to_string(line_no) +
                      ": expected a label and at least one feature");
    }
    double label_value = 0.0;
    if (!parse_double(fields[0], label_value) || label_value < 0.0 ||
        label_value != std::floor(label_value)) {
      throw DataError(where + ":" + std::to_string(line_no) + ": malformed label '" + fields[0] +
                      "'");
    }
    if (label_value >= static_cast<double>(num_classes)) {
      throw DataError(where + ":" + std::to_string(line_no) + ": label " + fields[0] +
                      " out of range [0, " + std::to_string(num_classes) + ")");
    }
    const std::size_t d = fields.size() - 1;
    if (width == 0) {
      width = d;
    } else if (d != width) {
      throw DataError(where + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(width) + " features, found " + std::to_string(d));
    }
    for (std::size_t j = 1; j < fields.size(); ++j) {
      double x = 0.0;
      if (!parse_double(fields[j], x) || !std::isfinite(x)) {
        throw DataError(where + ":" + std::to_string(line_no) + ": malformed value '" +
                        fields[j] + "' in column " + std::to_string(j + 1));
      }
      values.push_back(x);
    }
    labels.push_back(static_cast<std::size_t>(label_value));
  }
  if (labels.empty()) {
    throw DataError(where + ": no data rows");
  }

  Dataset ds;
  ds.name = path.stem().string();
  ds.num_classes = num_classes;
  ds.features = nn::Tensor2(labels.size(), width, std::move(values));
  ds.labels = std::move(labels);
  if (opts.minmax_scale) {
    for (std::size_t j = 0; j < width; ++j) {
      double lo = INFINITY;
      double hi = -INFINITY;
      for (std::size_t i = 0; i < ds.size(); ++i) {
        lo = std::min(lo, ds.features(i, j));
        hi = std::max(hi, ds.features(i, j));
      }
      const double range = hi - lo;
      for (std::size_t i = 0; i < ds.size(); ++i) {
        ds.features(i, j) = range > 0.0 ? (ds.features(i, j) - lo) / range : 0.0;
      }
    }
  }
  return ds;
}

}  // namespace zeta_opt::data
