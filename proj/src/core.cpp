#include "volmat/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

namespace volmat {

namespace {

std::vector<std::string> default_names(int p) {
  std::vector<std::string> names;
  names.reserve(p);
  for (int i = 1; i <= p; ++i) names.push_back("a" + std::to_string(i));
  return names;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Splits into physical lines, accepting LF or CRLF. A single trailing newline
// does not produce an extra empty line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(',', start);
    if (end == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, end - start)));
    start = end + 1;
  }
  return fields;
}

double parse_real(std::string_view field, std::size_t line, std::size_t column) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw Error(Errc::parse_error, "line " + std::to_string(line) + ", column " +
                                       std::to_string(column) + ": cannot parse '" +
                                       std::string(field) + "'");
  }
  return value;
}

}  // namespace

PricePanel::PricePanel(Matrix values, std::vector<std::string> asset_names)
    : values_(std::move(values)), names_(std::move(asset_names)) {
  if (values_.rows() == 0 || values_.cols() == 0) {
    throw Error(Errc::empty_panel, "panel has no assets or no time stamps");
  }
  if (values_.cols() < 3) {
    throw Error(Errc::too_few_times, "need n >= 2 intervals, got n = " +
                                         std::to_string(values_.cols() - 1));
  }
  for (Eigen::Index l = 0; l < values_.cols(); ++l) {
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
      if (!std::isfinite(values_(i, l))) {
        throw Error(Errc::non_finite, "value at asset " + std::to_string(i) +
                                          ", time " + std::to_string(l));
      }
    }
  }
  if (names_.empty()) {
    names_ = default_names(assets());
  } else if (static_cast<int>(names_.size()) != assets()) {
    throw Error(Errc::header_mismatch, "expected " + std::to_string(assets()) +
                                           " asset names, got " +
                                           std::to_string(names_.size()));
  }
}

PricePanel PricePanel::slice(int first, int count) const {
  if (first < 0 || count < 1 || first + count > intervals()) {
    throw Error(Errc::index_out_of_panel,
                "slice [" + std::to_string(first) + ", " +
                    std::to_string(first + count) + "] outside panel with n = " +
                    std::to_string(intervals()));
  }
  return PricePanel(values_.middleCols(first, count + 1), names_);
}

PricePanel validate_panel(const Matrix& raw, Orientation orientation) {
  if (orientation == Orientation::time_by_assets) return PricePanel(raw.transpose());
  return PricePanel(raw);
}

PricePanel validate_panel(const PricePanel& panel) {
  return PricePanel(panel.values(), panel.asset_names());
}

VolMatrix::VolMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw Error(Errc::dimension_mismatch, "volatility matrix must be square");
  }
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      if (!std::isfinite(entries_(i, j))) {
        throw Error(Errc::non_finite, "matrix entry (" + std::to_string(i) + ", " +
                                          std::to_string(j) + ")");
      }
      if (entries_(i, j) != entries_(j, i)) {
        throw Error(Errc::not_symmetric, "entry (" + std::to_string(i) + ", " +
                                             std::to_string(j) + ") differs from its mirror");
      }
    }
  }
}

VolMatrix VolMatrix::from_lower(Matrix entries) {
  if (entries.rows() != entries.cols()) {
    throw Error(Errc::dimension_mismatch, "volatility matrix must be square");
  }
  entries.triangularView<Eigen::StrictlyUpper>() = entries.transpose();
  return VolMatrix(std::move(entries));
}

std::string format_real(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(Errc::io_error, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(Errc::io_error, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

PricePanel parse_panel_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(Errc::empty_panel, "empty CSV");

  const auto header = split_fields(lines[0]);
  if (header.size() < 2 || (header[0] != "time" && header[0] != "t")) {
    throw Error(Errc::header_mismatch, "header must be 'time,<asset_1>,...'");
  }
  std::vector<std::string> names;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) {
      throw Error(Errc::header_mismatch, "empty asset name in column " + std::to_string(c + 1));
    }
    names.emplace_back(header[c]);
  }

  const std::size_t width = header.size();
  std::vector<std::vector<double>> rows;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    if (lines[li].empty() && li + 1 == lines.size()) break;
    const auto fields = split_fields(lines[li]);
    if (fields.size() != width) {
      throw Error(Errc::ragged_rows, "line " + std::to_string(line_no) + " has " +
                                         std::to_string(fields.size()) + " fields, header has " +
                                         std::to_string(width));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) row[c] = parse_real(fields[c], line_no, c + 1);
    if (!rows.empty() && !(row[0] > rows.back()[0])) {
      throw Error(Errc::non_monotone_time,
                  "time stamps must be strictly ascending (line " + std::to_string(line_no) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::empty_panel, "CSV has a header but no rows");

  const auto p = static_cast<Eigen::Index>(width - 1);
  Matrix values(p, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t l = 0; l < rows.size(); ++l) {
    for (Eigen::Index i = 0; i < p; ++i) values(i, static_cast<Eigen::Index>(l)) = rows[l][i + 1];
  }
  return PricePanel(std::move(values), std::move(names));
}

PricePanel read_panel_csv(const std::filesystem::path& path) {
  return parse_panel_csv(read_file(path));
}

std::string format_panel_csv(const PricePanel& panel) {
  std::string out = "time";
  for (const auto& name : panel.asset_names()) out += "," + name;
  out += '\n';
  const int n = panel.intervals();
  for (int l = 0; l <= n; ++l) {
    out += format_real(static_cast<double>(l) / n);
    for (int i = 0; i < panel.assets(); ++i) {
      out += ',';
      out += format_real(panel(i, l));
    }
    out += '\n';
  }
  return out;
}

void write_panel_csv(const PricePanel& panel, const std::filesystem::path& path) {
  write_file_atomic(path, format_panel_csv(panel));
}

Matrix parse_matrix_csv(const std::string& text) {
  auto lines = split_lines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw Error(Errc::empty_panel, "empty matrix CSV");
  const auto rows = static_cast<Eigen::Index>(lines.size());
  Eigen::Index cols = -1;
  Matrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto fields = split_fields(lines[r]);
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(fields.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(fields.size()) != cols) {
      throw Error(Errc::ragged_rows, "line " + std::to_string(r + 1) + " has " +
                                         std::to_string(fields.size()) + " fields, expected " +
                                         std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = parse_real(fields[c], r + 1, c + 1);
  }
  return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  return parse_matrix_csv(read_file(path));
}

std::string format_matrix_csv(const Matrix& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_real(m(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const VolMatrix& m, const std::filesystem::path& path) {
  write_file_atomic(path, format_matrix_csv(m.matrix()));
}

}  // namespace volmat
