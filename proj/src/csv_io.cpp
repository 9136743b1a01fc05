#include "countreg/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace countreg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  std::string out = s.substr(b, e - b + 1);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string where(std::size_t row, std::size_t col, const std::string& name) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col) + " ('" + name + "')";
}

}  // namespace

std::optional<Index> CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == name) return static_cast<Index>(j);
  }
  return std::nullopt;
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw CsvParseError(CsvIssue::NoRows, "'" + path + "' is empty", 0, 0);
  t.header = split_line(line);
  std::set<std::string> seen;
  for (std::size_t j = 0; j < t.header.size(); ++j) {
    if (t.header[j].empty()) throw SchemaError("column " + std::to_string(j + 1) + " has an empty name");
    if (!seen.insert(t.header[j]).second) {
      throw SchemaError("duplicate column name '" + t.header[j] + "' (column " + std::to_string(j + 1) + ")");
    }
  }
  const std::size_t width = t.header.size();
  std::vector<double> flat;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++rows;
    const auto cells = split_line(line);
    if (cells.size() != width) {
      throw CsvParseError(CsvIssue::RaggedRow,
                          "row " + std::to_string(rows) + " has " + std::to_string(cells.size()) +
                              " cells, expected " + std::to_string(width),
                          rows, 0);
    }
    for (std::size_t j = 0; j < width; ++j) {
      const std::string& c = cells[j];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (c.empty() || ec != std::errc() || ptr != c.data() + c.size()) {
        throw CsvParseError(CsvIssue::NonNumeric, "non-numeric value '" + c + "' at " + where(rows, j + 1, t.header[j]),
                            rows, j + 1);
      }
      if (!std::isfinite(v)) {
        throw CsvParseError(CsvIssue::NonFinite, "non-finite value '" + c + "' at " + where(rows, j + 1, t.header[j]),
                            rows, j + 1);
      }
      flat.push_back(v);
    }
  }
  if (rows == 0) throw CsvParseError(CsvIssue::NoRows, "'" + path + "' has no data rows", 0, 0);
  t.values.resize(static_cast<Index>(rows), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < width; ++j) t.values(static_cast<Index>(i), static_cast<Index>(j)) = flat[i * width + j];
  return t;
}

VectorXd validated_counts(const CsvTable& table, Index column) {
  const auto& name = table.header[static_cast<std::size_t>(column)];
  VectorXd y = table.values.col(column);
  for (Index i = 0; i < y.size(); ++i) {
    const auto row = static_cast<std::size_t>(i + 1);
    const auto col = static_cast<std::size_t>(column + 1);
    if (y(i) < 0.0) {
      throw CsvParseError(CsvIssue::NegativeTarget, "negative count at " + where(row, col, name), row, col);
    }
    if (y(i) != std::floor(y(i))) {
      throw CsvParseError(CsvIssue::FractionalTarget, "fractional count at " + where(row, col, name), row, col);
    }
  }
  return y;
}

MatrixXd select_features(const CsvTable& table, const std::vector<std::string>& names,
                         const std::optional<std::string>& target) {
  std::set<std::string> have;
  for (const auto& h : table.header) {
    if (!target || h != *target) have.insert(h);
  }
  const std::set<std::string> want(names.begin(), names.end());
  if (have != want) {
    std::string missing;
    std::string extra;
    for (const auto& n : want)
      if (!have.count(n)) missing += (missing.empty() ? "" : ", ") + n;
    for (const auto& n : have)
      if (!want.count(n)) extra += (extra.empty() ? "" : ", ") + n;
    throw SchemaError("feature columns do not match the model (missing: [" + missing + "], unexpected: [" + extra +
                      "])");
  }
  MatrixXd X(table.values.rows(), static_cast<Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) X.col(static_cast<Index>(j)) = table.values.col(*table.column(names[j]));
  return X;
}

LoadedData load_csv(const std::string& path, const LoadOptions& options) {
  const CsvTable table = read_csv_table(path);
  const auto target = table.column(options.target);
  if (!target) throw SchemaError("target column '" + options.target + "' not found in '" + path + "'");
  VectorXd y = validated_counts(table, *target);

  std::vector<std::string> names;
  for (const auto& h : table.header) {
    if (h != options.target) names.push_back(h);
  }
  const MatrixXd F = select_features(table, names, options.target);
  const Index off = options.intercept ? 1 : 0;
  MatrixXd X(F.rows(), F.cols() + off);
  if (options.intercept) X.col(0).setOnes();
  X.rightCols(F.cols()) = F;
  return {Dataset::create(std::move(X), std::move(y), options.intercept, options.standardize), std::move(names)};
}

}  // namespace countreg
