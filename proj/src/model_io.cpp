#include "countreg/model_io.hpp"

#include "countreg/errors.hpp"

namespace countreg {

nlohmann::json vector_to_json(const VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

VectorXd vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw SchemaError("expected a numeric array");
  VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError("expected a numeric array");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

VectorXd SavedModel::original_beta() const { return beta.cwiseQuotient(column_norms); }

VectorXd SavedModel::linear_predictor(const MatrixXd& raw_features) const {
  if (raw_features.cols() != static_cast<Index>(features.size())) {
    throw SchemaError("expected " + std::to_string(features.size()) + " feature columns");
  }
  const Index off = intercept ? 1 : 0;
  MatrixXd X(raw_features.rows(), raw_features.cols() + off);
  if (intercept) X.col(0).setOnes();
  X.rightCols(raw_features.cols()) = raw_features;
  return apply_column_scaling(X, column_norms, intercept) * beta;
}

nlohmann::json SavedModel::to_json() const {
  nlohmann::json j;
  j["family"] = family.name();
  j["alpha"] = family.is_poisson() ? nlohmann::json(nullptr) : nlohmann::json(family.alpha());
  j["intercept"] = intercept;
  j["features"] = features;
  j["column_norms"] = vector_to_json(column_norms);
  j["coefficients"] = {{"standardized", vector_to_json(beta)}, {"original", vector_to_json(original_beta())}};
  return j;
}

SavedModel SavedModel::from_json(const nlohmann::json& j) {
  try {
    SavedModel m;
    const auto fam = j.at("family").get<std::string>();
    if (fam == "poisson") {
      m.family = GlmFamily::poisson();
    } else if (fam == "nb") {
      m.family = GlmFamily::negative_binomial(j.at("alpha").get<double>());
    } else {
      throw SchemaError("unknown family '" + fam + "'");
    }
    m.intercept = j.at("intercept").get<bool>();
    m.features = j.at("features").get<std::vector<std::string>>();
    m.column_norms = vector_from_json(j.at("column_norms"));
    m.beta = vector_from_json(j.at("coefficients").at("standardized"));
    const auto d = static_cast<Index>(m.features.size()) + (m.intercept ? 1 : 0);
    if (m.column_norms.size() != d || m.beta.size() != d) {
      throw SchemaError("coefficient and feature counts disagree");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace countreg
