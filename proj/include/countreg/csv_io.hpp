#pragma once

#include <optional>
#include <string>
#include <vector>

#include "countreg/dataset.hpp"
#include "countreg/errors.hpp"

namespace countreg {

enum class CsvIssue { RaggedRow, NonNumeric, NonFinite, NegativeTarget, FractionalTarget, NoRows };

/// ParseError tagged with what went wrong.
class CsvParseError : public ParseError {
 public:
  CsvParseError(CsvIssue issue, const std::string& what, std::size_t row, std::size_t column)
      : ParseError(what, row, column), issue_(issue) {}
  CsvIssue issue() const noexcept { return issue_; }

 private:
  CsvIssue issue_;
};

/// Header plus an all-numeric body. Rows are numbered from 1 for the
/// first data line; columns from 1.
struct CsvTable {
  std::vector<std::string> header;
  MatrixXd values;

  /// Position of `name` in the header, if present.
  std::optional<Index> column(const std::string& name) const;
};

/// Throws IoError (unreadable file), SchemaError (empty or duplicate
/// header names) or CsvParseError (ragged rows, non-numeric or
/// non-finite cells, no data rows).
CsvTable read_csv_table(const std::string& path);

struct LoadOptions {
  std::string target = "y";
  bool standardize = true;
  bool intercept = true;
};

struct LoadedData {
  Dataset data;
  /// Names of the feature columns, in dataset order after the intercept.
  std::vector<std::string> feature_names;
};

/// Builds a dataset from a CSV file. Every column except the target is a
/// feature. The target must hold nonnegative integers.
LoadedData load_csv(const std::string& path, const LoadOptions& options);

/// Raw feature columns in the order of `names`. Throws SchemaError when
/// the table's feature set (all columns except `target`, if given)
/// differs from `names`.
MatrixXd select_features(const CsvTable& table, const std::vector<std::string>& names,
                         const std::optional<std::string>& target);

/// Checks a count column and returns it. Throws CsvParseError.
VectorXd validated_counts(const CsvTable& table, Index column);

}  // namespace countreg
