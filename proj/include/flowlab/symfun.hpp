#pragma once

// Elementary symmetric functions, power sums and homogeneous speed functions
// of the principal curvatures, with closed-form first and second derivatives.

#include <array>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowlab/types.hpp"

namespace flowlab::symfun {

/// A point of the positive cone: n >= 2 strictly positive, finite principal
/// curvatures stored in ascending order.
class CurvatureVector {
 public:
  explicit CurvatureVector(std::span<const double> values);
  CurvatureVector(std::initializer_list<double> values);

  /// n copies of c.
  static CurvatureVector constant(int n, double c);

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  const Vec& values() const { return values_; }
  std::span<const double> span() const { return {values_.data(), static_cast<std::size_t>(values_.size())}; }
  double min() const { return values_[0]; }
  double max() const { return values_[values_.size() - 1]; }

  CurvatureVector scaled(double t) const;

 private:
  Vec values_;
};

/// sigma_k of the entries of `values` that are not in `excluded`. Indices are
/// 0-based. sigma_0 = 1, and sigma_k = 0 for k < 0 or k larger than the number
/// of remaining entries.
double sigma(std::span<const double> values, int k, std::span<const int> excluded = {});
double sigma(const CurvatureVector& lambda, int k, std::initializer_list<int> excluded = {});

/// S_k = sum of lambda_i^k, k >= 1.
double power_sum(std::span<const double> values, int k);
double power_sum(const CurvatureVector& lambda, int k);

/// Residuals (LHS - RHS) of the four classical sigma_k identities together with
/// the magnitude of the terms each residual was formed from.
///   [0] max_i |sigma_{k+1} - sigma_{k+1;i} - lambda_i sigma_{k;i}|
///   [1] sum_i lambda_i sigma_{k;i} - (k+1) sigma_{k+1}
///   [2] sum_i sigma_{k;i} - (n-k) sigma_k
///   [3] sum_i lambda_i^2 sigma_{k;i} - (sigma_1 sigma_{k+1} - (k+2) sigma_{k+2})
struct SigmaIdentityResiduals {
  std::array<double, 4> residual{};
  std::array<double, 4> scale{};

  double max_relative() const;
};

SigmaIdentityResiduals sigma_identity_residuals(const CurvatureVector& lambda, int k);

// ---------------------------------------------------------------------------
// Speed functions

enum class Basis { Sigma, PowerSum };

struct Factor {
  Basis basis = Basis::Sigma;
  int k = 1;
  double exponent = 1.0;
};

struct Term {
  double coefficient = 1.0;
  std::vector<Factor> factors;
  std::string source;  // text the term was parsed from, for messages
};

/// F = sum_t c_t * prod_f basis_f^(e_f). Every term carries the same
/// homogeneity degree beta = sum_f k_f * e_f; construction rejects mixtures.
class SpeedFunction {
 public:
  explicit SpeedFunction(std::vector<Term> terms);

  /// Parses e.g. "sigma(2)^0.5", "S(3)^(1/3)", "sigma(2)*sigma(3)",
  /// "1.0*sigma(1)^2 - 3.0*sigma(2)".
  static SpeedFunction parse(const std::string& text);
  static SpeedFunction sigma_power(int k, double alpha);
  static SpeedFunction power_sum_power(int k, double alpha);

  double beta() const { return beta_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// Products of positive powers of sigma_k and S_k with a positive
  /// coefficient. Signed combinations are negative-test material only.
  bool is_condition_family() const;

  /// (k, alpha) when F = c * sigma_k^alpha with c > 0.
  std::optional<std::pair<int, double>> as_sigma_power() const;
  /// (k, alpha) when F = c * S_k^alpha with c > 0.
  std::optional<std::pair<int, double>> as_power_sum_power() const;

  /// Largest basis order appearing in F.
  int max_order() const;

  /// Value only. `values` are positive curvatures in any order.
  double value(std::span<const double> values) const;
  double value(const CurvatureVector& lambda) const { return value(lambda.span()); }

  /// Value and gradient, no second derivatives.
  std::pair<double, Vec> value_gradient(std::span<const double> values) const;

  std::string to_string() const;

 private:
  std::vector<Term> terms_;
  double beta_ = 0.0;
};

struct LogDerivatives {
  Vec gradient;  // d log F / d lambda_i
  Mat hessian;   // d^2 log F / d lambda_i d lambda_j
};

struct DerivativeBundle {
  double value = 0.0;
  Vec gradient;
  Mat hessian;
  std::optional<LogDerivatives> log;  // empty when value <= 0
};

DerivativeBundle eval_bundle(const SpeedFunction& F, const CurvatureVector& lambda);

/// Directional derivatives of W -> F(lambda(W)) at W = diag(lambda) along the
/// symmetric matrix B: first_form = sum_p F_p b_pp, second_form = the second
/// directional derivative, with divided differences (F_p - F_q)/(lambda_p -
/// lambda_q) replaced by F_pp - F_pq when |lambda_p - lambda_q| < 1e-8 max lambda.
struct DirectionalForms {
  double first_form = 0.0;
  double second_form = 0.0;
};

DirectionalForms second_derivative_form(const SpeedFunction& F, const CurvatureVector& lambda,
                                        const Eigen::Ref<const Eigen::MatrixXd>& B);

/// sum_i lambda_i dF/dlambda_i - beta F.
double euler_residual(const SpeedFunction& F, const CurvatureVector& lambda);

/// Relative gap below which two curvatures are treated as equal in divided differences.
inline constexpr double kDividedDifferenceGap = 1e-8;

}  // namespace flowlab::symfun
