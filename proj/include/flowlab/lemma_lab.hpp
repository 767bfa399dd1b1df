#pragma once

// Matrix constructions and pointwise inequalities for homogeneous symmetric
// curvature functions, each evaluated as a signed margin (>= 0 when the
// inequality holds) together with the magnitude used to normalize it.

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "flowlab/symfun.hpp"
#include "flowlab/types.hpp"

namespace flowlab::lab {

using symfun::CurvatureVector;
using symfun::SpeedFunction;

/// Dense symmetric matrix whose two triangles are written together, so the
/// entries are symmetric to exact equality.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(int m);
  /// Copies `entries`; throws ArgumentError unless exactly symmetric.
  static SymmetricMatrix from_dense(const Eigen::Ref<const Eigen::MatrixXd>& entries);

  int size() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  void set(int i, int j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  const Mat& dense() const { return m_; }
  double frobenius_norm() const { return m_.norm(); }

 private:
  Mat m_;
};

/// (m+1)x(m+1) matrix with d00 = sigma_k, d0j = sigma_{k;j}, dii = sigma_{k;i},
/// dij = sigma_{k;ij}; row/column i >= 1 refers to curvature index i-1.
SymmetricMatrix build_D(const CurvatureVector& lambda, int k, int m);

/// a_ii = sigma_{k-1;i} / lambda_i, a_ij = sigma_{k-2;ij}.
SymmetricMatrix build_A(const CurvatureVector& lambda, int k);

/// sigma_k A - xi xi^T with xi_i = sigma_{k-1;i}.
SymmetricMatrix build_ak_matrix(const CurvatureVector& lambda, int k);

/// ||sigma_k A||_F + ||xi||^2, the size of the two terms of build_ak_matrix.
/// For k = n the difference vanishes identically, so its own norm is rounding
/// noise and this is the meaningful reference.
double ak_term_scale(const CurvatureVector& lambda, int k);

/// Upper-left m x m block of the congruent form with entries
/// sigma_{k;i}(sigma_k - sigma_{k;i}) and sigma_k sigma_{k;ij} - sigma_{k;i} sigma_{k;j}.
SymmetricMatrix build_A_tilde(const CurvatureVector& lambda, int k, int m);

/// Smallest eigenvalue. Throws NumericError on non-finite entries.
double psd_margin(const SymmetricMatrix& M);

/// PSD verdict: psd_margin(M) >= -tol * ||M||_F.
bool is_psd(const SymmetricMatrix& M, double tol = 1e-10);
/// PSD verdict against an explicit magnitude: psd_margin(M) >= -tol * scale.
bool is_psd(const SymmetricMatrix& M, double tol, double scale);

/// Determinants of the leading principal submatrices of order 1..size().
std::vector<double> leading_principal_minors(const SymmetricMatrix& M);

struct DetIdentity {
  double lhs = 0.0;    // det A~_m
  double rhs = 0.0;    // sigma_k^(m-1) det D_m
  double scale = 0.0;  // Hadamard bound of both sides
  double residual() const { return lhs - rhs; }
  double relative() const { return scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs); }
};

DetIdentity det_identity(const CurvatureVector& lambda, int k, int m);
double det_identity_residual(const CurvatureVector& lambda, int k, int m);

/// sum_i (1/lambda_i) dlogF_i y_i^2 + sum_ij d2logF_ij y_i y_j.
/// Throws DomainError when F <= 0 at lambda.
double key_inequality_margin(const SpeedFunction& F, const CurvatureVector& lambda,
                             std::span<const double> y);

/// The sigma_k quadratic form
///   sum sigma_{k-1;i}/(lambda_i sigma_k) y_i^2 + sum_{i!=j} sigma_{k-2;ij}/sigma_k y_i y_j
///   - (sum sigma_{k-1;i}/sigma_k y_i)^2,
/// evaluated directly from sigma values. For F = sigma_k^alpha it equals
/// key_inequality_margin / alpha.
double sigma_quadratic_form(const CurvatureVector& lambda, int k, std::span<const double> y);

/// Normalization for the key inequality: sum y_i^2 / min lambda^2.
double key_inequality_scale(const CurvatureVector& lambda, std::span<const double> y);

struct ConditionMargins {
  double positivity = 0.0;  // min(F, min_i dF/dlambda_i); must be > 0
  double quotient = 0.0;    // min over pairs of (l_i F_i - l_j F_j)/(l_i - l_j)
  double quotient_scale = 0.0;
  std::optional<double> key;  // key-inequality margin at y; empty when F <= 0
  double key_scale = 0.0;
  double scaling_residual = 0.0;  // |F(t lambda)/F(lambda) - t^beta| / t^beta at t = 2.5
};

ConditionMargins condition_margins(const SpeedFunction& F, const CurvatureVector& lambda,
                                   std::span<const double> y);

/// [F_i (l_i-l_1)^2 - F_j (l_j-l_1)^2] / [(l_i-l_1)(l_j-l_1)(l_i-l_j)] for
/// 0-based indices i > j >= 1. Requires lambda_0 < lambda_1. Equal lambda_i,
/// lambda_j give the limit F_ii - F_ij + 2 F_i/(lambda_j - lambda_0).
double lamij_margin(const SpeedFunction& F, const CurvatureVector& lambda, int i, int j);

struct RigidityTerms {
  double J1 = 0.0;
  double L1 = 0.0;
  double J1_scale = 0.0;
  double L1_scale = 0.0;
};

/// J1 and L1 with tr b = sum 1/lambda_i.
RigidityTerms rigidity_terms(const SpeedFunction& F, const CurvatureVector& lambda, double C);

/// sum_i lambda_i^-1 dlogF_i h_i^2 - (1/beta)(sum_i dlogF_i h_i)^2.
double cs_margin(const SpeedFunction& F, const CurvatureVector& lambda, std::span<const double> h);
double cs_scale(const SpeedFunction& F, const CurvatureVector& lambda, std::span<const double> h);

/// Minimum of sum t_i y_i^2 - 4 alpha y_m over sum y_i = 1, where sum 1/t_i = k.
double condmin_value(std::span<const double> t, int m, double alpha, double k);
/// Minimizer of the same problem.
std::vector<double> condmin_minimizer(std::span<const double> t, int m, double alpha, double k);
/// sum t_i y_i^2 - 4 alpha y_m.
double condmin_objective(std::span<const double> t, int m, double alpha, std::span<const double> y);

/// g(t, alpha) = (2 alpha/t - 1)((2/(k t) - n - 1) alpha + (n-1)/k), t >= 1.
double thm63_factor_margin(double t, double alpha, int n, int k);
/// [(n-1)/(k(n+1)-2), 1/2]
std::pair<double, double> thm63_alpha_interval(int n, int k);

/// sum_ij d2 log S_k h_i h_j + (1/k)(sum_i dlog S_k h_i)^2.
double sk_loghess_margin(const CurvatureVector& lambda, int k, std::span<const double> h);
double sk_loghess_scale(const CurvatureVector& lambda, int k, std::span<const double> h);

}  // namespace flowlab::lab
