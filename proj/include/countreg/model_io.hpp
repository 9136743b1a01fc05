#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "countreg/dataset.hpp"
#include "countreg/family.hpp"

namespace countreg {

/// A fitted model as persisted by the command-line tool.
///
/// Coefficients are kept on the standardized scale together with the
/// column divisors, so predictions on new raw data reproduce the training
/// linear predictor exactly. The original-scale coefficients are derived
/// (standardized / divisor) for reporting.
struct SavedModel {
  GlmFamily family = GlmFamily::poisson();
  bool intercept = true;
  std::vector<std::string> features;
  /// One divisor per design column (1 for the intercept).
  VectorXd column_norms;
  /// One coefficient per design column, standardized scale.
  VectorXd beta;

  VectorXd original_beta() const;
  /// Linear predictor for raw feature columns ordered as `features`.
  VectorXd linear_predictor(const MatrixXd& raw_features) const;

  nlohmann::json to_json() const;
  /// Throws SchemaError on missing or inconsistent fields.
  static SavedModel from_json(const nlohmann::json& j);
};

nlohmann::json vector_to_json(const VectorXd& v);
VectorXd vector_from_json(const nlohmann::json& j);

}  // namespace countreg
