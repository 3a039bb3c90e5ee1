#include "zeta_opt/metrics_csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "zeta_opt/error.hpp"

namespace zeta_opt::harness {
namespace {

std::string render(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string render(const std::optional<double>& x) { return x ? render(*x) : std::string(); }

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

double parse_number(const std::string& s, std::size_t line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError("metrics csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return out;
}

std::optional<double> parse_optional(const std::string& s, std::size_t line) {
  if (s.empty()) {
    return std::nullopt;
  }
  return parse_number(s, line);
}

}  // namespace

std::string format_metrics_row(const MetricsRecord& r) {
  std::string out;
  out += quote_if_needed(r.run_id);
  out += ',';
  out += quote_if_needed(r.optimizer);
  out += ',' + std::to_string(r.step);
  out += ',' + std::to_string(r.epoch);
  out += r.split == SplitKind::train ? ",train" : ",test";
  out += ',' + render(r.loss);
  out += ',' + render(r.accuracy);
  for (const auto* field : {&r.lr, &r.s_t, &r.zeta_s, &r.delta_t, &r.rho_t, &r.boost,
                            &r.grad_norm, &r.update_norm}) {
    out += ',' + render(*field);
  }
  return out;
}

MetricsCsvWriter::MetricsCsvWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary) {
  if (!out_) {
    throw IoError("cannot open metrics file for writing: " + path.string());
  }
  out_ << kMetricsHeader << '\n';
}

void MetricsCsvWriter::write(const MetricsRecord& record) {
  out_ << format_metrics_row(record) << '\n';
  if (!out_) {
    throw IoError("failed writing metrics file: " + path_.string());
  }
}

void MetricsCsvWriter::close() {
  out_.close();
  if (!out_) {
    throw IoError("failed closing metrics file: " + path_.string());
  }
}

void write_metrics_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path) {
  MetricsCsvWriter writer(path);
  for (const auto& r : records) {
    writer.write(r);
  }
  writer.close();
}

std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open metrics file: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) {
    throw DataError("metrics csv " + path.string() + ": unexpected header");
  }
  std::vector<MetricsRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_csv_line(line);
    if (f.size() != 15) {
      throw DataError("metrics csv line " + std::to_string(line_no) + ": expected 15 fields");
    }
    MetricsRecord r;
    r.run_id = f[0];
    r.optimizer = f[1];
    r.step = static_cast<std::uint64_t>(parse_number(f[2], line_no));
    r.epoch = static_cast<std::size_t>(parse_number(f[3], line_no));
    if (f[4] == "train") {
      r.split = SplitKind::train;
    } else if (f[4] == "test") {
      r.split = SplitKind::test;
    } else {
      throw DataError("metrics csv line " + std::to_string(line_no) + ": bad split '" + f[4] + "'");
    }
    r.loss = parse_number(f[5], line_no);
    r.accuracy = parse_number(f[6], line_no);
    r.lr = parse_optional(f[7], line_no);
    r.s_t = parse_optional(f[8], line_no);
    r.zeta_s = parse_optional(f[9], line_no);
    r.delta_t = parse_optional(f[10], line_no);
    r.rho_t = parse_optional(f[11], line_no);
    r.boost = parse_optional(f[12], line_no);
    r.grad_norm = parse_optional(f[13], line_no);
    r.update_norm = parse_optional(f[14], line_no);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace zeta_opt::harness
