// Copyright 2026 The greenlan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "greenlan/traffic.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "greenlan/error.hpp"

namespace greenlan {
namespace {

constexpr double kDayHours = 24.0;
constexpr double kDayTolerance = 1e-9;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::vector<std::vector<double>> parse_csv_rows(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  bool first_content_line = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (const auto field : fields) {
      const auto v = parse_number(field);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      // A non-numeric first line is a header of device labels.
      if (first_content_line) {
        first_content_line = false;
        continue;
      }
      fail_invalid(fmt::format("csv line {}: non-numeric field", line_no));
    }
    first_content_line = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> parse_json_rows(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail_invalid(fmt::format("matrix json: {}", e.what()));
  }
  if (doc.is_object()) {
    if (!doc.contains("matrix")) fail_invalid("matrix json: missing \"matrix\"");
    doc = doc.at("matrix");
  }
  if (!doc.is_array()) fail_invalid("matrix json: expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : doc) {
    if (!row.is_array()) fail_invalid("matrix json: expected an array of rows");
    std::vector<double> values;
    for (const auto& cell : row) {
      if (!cell.is_number()) fail_invalid("matrix json: non-numeric entry");
      values.push_back(cell.get<double>());
    }
    rows.push_back(std::move(values));
  }
  return rows;
}

std::string format_number(double v) {
  // Shortest representation that round-trips.
  return fmt::format("{}", v);
}

}  // namespace

std::string_view to_string(TrafficUnit unit) {
  return unit == TrafficUnit::kMbps ? "mbps" : "abstract-load";
}

TrafficUnit parse_traffic_unit(std::string_view text) {
  if (text == "mbps") return TrafficUnit::kMbps;
  if (text == "abstract-load") return TrafficUnit::kAbstractLoad;
  fail_invalid(fmt::format("unknown traffic unit '{}'", text));
}

TrafficMatrix TrafficMatrix::create(SquareMatrix weights, TrafficUnit unit) {
  const std::size_t n = weights.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weights(i, j);
      if (!std::isfinite(w)) {
        fail_invalid(fmt::format("non-finite weight at ({},{})", i + 1, j + 1));
      }
      if (w < 0.0) {
        fail_invalid(
            fmt::format("negative weight {} at ({},{})", w, i + 1, j + 1));
      }
    }
    if (weights(i, i) != 0.0) {
      fail_invalid(fmt::format("nonzero diagonal at ({},{})", i + 1, i + 1));
    }
  }
  return TrafficMatrix(std::move(weights), unit);
}

TrafficMatrix TrafficMatrix::zeros(std::size_t n, TrafficUnit unit) {
  return TrafficMatrix(SquareMatrix(n), unit);
}

double TrafficMatrix::total() const {
  double sum = 0.0;
  for (double v : weights_.values()) sum += v;
  return sum;
}

TrafficMatrix TrafficMatrix::reordered(
    std::span<const std::size_t> order) const {
  return TrafficMatrix(weights_.submatrix(order), unit_);
}

void validate_day_coverage(std::span<const PeriodProfile> profiles) {
  double total = 0.0;
  for (const auto& p : profiles) {
    if (!(p.hours_per_day > 0.0 && p.hours_per_day <= kDayHours)) {
      fail_invalid(fmt::format("period '{}' lasts {} h; expected (0, 24]",
                               p.name, p.hours_per_day));
    }
    total += p.hours_per_day;
  }
  if (std::abs(total - kDayHours) > kDayTolerance) {
    fail_invalid(fmt::format("period durations sum to {} h, not 24 h", total));
  }
}

LoadClassTable::LoadClassTable(std::map<std::string, LoadClass> entries)
    : entries_(std::move(entries)) {
  for (const auto& [symbol, cls] : entries_) {
    if (!parse_number(symbol)) {
      fail_invalid(fmt::format("load class symbol '{}' is not numeric", symbol));
    }
    if (cls.frame_bytes <= 0 || cls.packets_per_second < 0) {
      fail_invalid(fmt::format("load class '{}' has invalid frame/pps", symbol));
    }
  }
}

LoadClassTable LoadClassTable::case_study() {
  return LoadClassTable({{"10", {1125, 10000}}, {"1", {1125, 1000}}});
}

std::optional<LoadClass> LoadClassTable::find(double value) const {
  for (const auto& [symbol, cls] : entries_) {
    if (*parse_number(symbol) == value) return cls;
  }
  return std::nullopt;
}

TrafficMatrix combine(std::span<const PeriodProfile> profiles) {
  if (profiles.empty()) fail_invalid("combine: no period profiles");
  const std::size_t n = profiles.front().matrix.size();
  const TrafficUnit unit = profiles.front().matrix.unit();
  SquareMatrix acc(n);
  for (const auto& p : profiles) {
    if (p.matrix.size() != n) {
      fail_invalid(fmt::format(
          "combine: period '{}' has {} devices, expected {}", p.name,
          p.matrix.size(), n));
    }
    if (p.matrix.unit() != unit) {
      fail_invalid(
          fmt::format("combine: period '{}' uses a different unit", p.name));
    }
    acc = acc + p.hours_per_day * p.matrix.weights();
  }
  return TrafficMatrix::create(std::move(acc), unit);
}

TrafficMatrix load_to_bandwidth(const TrafficMatrix& loads,
                                const LoadClassTable& table) {
  if (loads.unit() != TrafficUnit::kAbstractLoad) {
    fail_invalid("load_to_bandwidth: matrix is already in mbps");
  }
  const std::size_t n = loads.size();
  SquareMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = loads(i, j);
      if (v == 0.0) continue;
      const auto cls = table.find(v);
      if (!cls) {
        fail_invalid(fmt::format("unknown load symbol {} at ({},{})", v, i + 1,
                                 j + 1));
      }
      out(i, j) = cls->mbps();
    }
  }
  return TrafficMatrix::create(std::move(out), TrafficUnit::kMbps);
}

TrafficMatrix parse_matrix(std::string_view text, MatrixFormat format,
                           TrafficUnit unit) {
  const auto rows = format == MatrixFormat::kCsv ? parse_csv_rows(text)
                                                 : parse_json_rows(text);
  return TrafficMatrix::create(SquareMatrix::from_rows(rows), unit);
}

std::string serialize_matrix(const TrafficMatrix& m, MatrixFormat format) {
  std::ostringstream out;
  const std::size_t n = m.size();
  if (format == MatrixFormat::kCsv) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j) out << ',';
        out << format_number(m(i, j));
      }
      out << '\n';
    }
    return out.str();
  }
  out << '[';
  for (std::size_t i = 0; i < n; ++i) {
    out << (i ? ",[" : "[");
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out << ',';
      out << format_number(m(i, j));
    }
    out << ']';
  }
  out << "]\n";
  return out.str();
}

}  // namespace greenlan
