#pragma once

#include <optional>
#include <string>

namespace countreg {

enum class FamilyKind { Poisson, NegBinomial };

/// Poisson, or negative binomial NB(α, α/(α+λ)) with Var = λ + λ²/α.
class GlmFamily {
 public:
  static GlmFamily poisson() { return GlmFamily(FamilyKind::Poisson, std::nullopt); }
  /// Throws InvalidArgument unless alpha > 0 and finite.
  static GlmFamily negative_binomial(double alpha);

  FamilyKind kind() const noexcept { return kind_; }
  bool is_poisson() const noexcept { return kind_ == FamilyKind::Poisson; }
  /// Dispersion; only meaningful for the negative binomial.
  double alpha() const;

  std::string name() const { return is_poisson() ? "poisson" : "nb"; }

 private:
  GlmFamily(FamilyKind kind, std::optional<double> alpha) : kind_(kind), alpha_(alpha) {}

  FamilyKind kind_;
  std::optional<double> alpha_;
};

/// Clamp applied to every linear predictor before it enters exp().
struct LinearPredictorGuard {
  double eta_cap = 30.0;

  double clamp(double eta) const noexcept {
    return eta > eta_cap ? eta_cap : (eta < -eta_cap ? -eta_cap : eta);
  }
};

}  // namespace countreg
