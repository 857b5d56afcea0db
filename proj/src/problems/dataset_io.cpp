#include "sqn/problems/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "sqn/errors.hpp"

namespace sqn {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

int parse_label(const std::string& s, std::size_t line_no) {
  if (s == "1" || s == "+1") return 1;
  if (s == "-1") return -1;
  throw ConfigError("line " + std::to_string(line_no) + ": label must be +1 or -1, got '" + s + "'");
}

}  // namespace

void write_svm_csv(std::ostream& out, const SvmDataset& data) {
  const std::size_t n = data.dim();
  for (std::size_t i = 0; i < data.num_samples(); ++i) {
    out << data.label(i);
    for (std::size_t j = 0; j < n; ++j) out << ',' << format_double(data.row(i)[j]);
    out << '\n';
  }
}

SvmDataset read_svm_csv(std::istream& in, double lambda) {
  std::vector<double> features;
  std::vector<int> labels;
  std::size_t n = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (n == 0) n = fields.size() - 1;
    if (fields.size() != n + 1 || n == 0) throw ConfigError("line " + std::to_string(line_no) + ": ragged row");
    labels.push_back(parse_label(fields[0], line_no));
    for (std::size_t j = 1; j < fields.size(); ++j) {
      try {
        features.push_back(std::stod(fields[j]));
      } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line_no) + ": bad number '" + fields[j] + "'");
      }
    }
  }
  return SvmDataset(n, std::move(features), std::move(labels), lambda);
}

void write_logistic_csv(std::ostream& out, const LogisticDataset& data) {
  const auto& rows = data.rows();
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    out << data.labels()[i];
    for (std::size_t k = rows.offsets[i]; k < rows.offsets[i + 1]; ++k) out << ',' << rows.columns[k];
    out << '\n';
  }
}

LogisticDataset read_logistic_csv(std::istream& in, std::size_t n, double lambda, double gamma) {
  SparseBinaryRows rows;
  rows.n = n;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    labels.push_back(parse_label(fields[0], line_no));
    std::vector<std::size_t> cols;
    for (std::size_t j = 1; j < fields.size(); ++j) {
      std::size_t c = 0;
      const auto& f = fields[j];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), c);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
        throw ConfigError("line " + std::to_string(line_no) + ": bad column index '" + f + "'");
      }
      cols.push_back(c);
    }
    rows.add_row(std::move(cols));
  }
  return LogisticDataset(std::move(rows), std::move(labels), lambda, gamma);
}

}  // namespace sqn
