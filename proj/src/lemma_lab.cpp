#include "flowlab/lemma_lab.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "esf.hpp"
#include "flowlab/errors.hpp"

namespace flowlab::lab {

using symfun::DerivativeBundle;
using symfun::eval_bundle;

namespace {

void require_span(std::span<const double> v, int n, const char* what) {
  if (static_cast<int>(v.size()) != n) {
    throw ArgumentError(std::string(what) + " must have " + std::to_string(n) + " entries, got " +
                        std::to_string(v.size()));
  }
}

const double* data(const CurvatureVector& l) { return l.values().data(); }

// Determinant after symmetric diagonal equilibration, so that rows spanning
// many orders of magnitude do not dominate the pivoting.
double equilibrated_det(const Mat& M, double* hadamard) {
  const auto m = M.rows();
  Vec s(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double r = M.row(i).cwiseAbs().maxCoeff();
    s[i] = r > 0.0 ? 1.0 / std::sqrt(r) : 1.0;
  }
  Mat E = s.asDiagonal() * M * s.asDiagonal();
  double log_unscale = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) log_unscale -= 2.0 * std::log(s[i]);
  double had = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) had *= E.row(i).norm();
  const double unscale = std::exp(log_unscale);
  if (hadamard) *hadamard = had * unscale;
  return E.determinant() * unscale;
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(int m) : m_(Mat::Zero(m, m)) {
  if (m < 1 || m > kMaxDim + 1) throw ArgumentError("matrix size out of range");
}

SymmetricMatrix SymmetricMatrix::from_dense(const Eigen::Ref<const Eigen::MatrixXd>& entries) {
  if (entries.rows() != entries.cols()) throw ArgumentError("matrix must be square");
  const int m = static_cast<int>(entries.rows());
  SymmetricMatrix out(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      if (entries(i, j) != entries(j, i)) {
        throw ArgumentError("matrix is not symmetric at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
      }
      out.set(i, j, entries(i, j));
    }
  }
  return out;
}

SymmetricMatrix build_D(const CurvatureVector& lambda, int k, int m) {
  const int n = lambda.size();
  if (k < 1 || k > n) throw ArgumentError("build_D needs 1 <= k <= n, got k=" + std::to_string(k));
  if (m < 1 || m > n) throw ArgumentError("build_D needs 1 <= m <= n, got m=" + std::to_string(m));
  const double* v = data(lambda);
  SymmetricMatrix D(m + 1);
  D.set(0, 0, detail::esf(v, n, k));
  for (int i = 1; i <= m; ++i) {
    const double ski = detail::esf(v, n, k, i - 1);
    D.set(0, i, ski);
    D.set(i, i, ski);
    for (int j = i + 1; j <= m; ++j) D.set(i, j, detail::esf(v, n, k, i - 1, j - 1));
  }
  return D;
}

SymmetricMatrix build_A(const CurvatureVector& lambda, int k) {
  const int n = lambda.size();
  if (k < 1 || k > n) throw ArgumentError("build_A needs 1 <= k <= n, got k=" + std::to_string(k));
  const double* v = data(lambda);
  SymmetricMatrix A(n);
  for (int i = 0; i < n; ++i) {
    A.set(i, i, detail::esf(v, n, k - 1, i) / v[i]);
    for (int j = i + 1; j < n; ++j) A.set(i, j, detail::esf(v, n, k - 2, i, j));
  }
  return A;
}

SymmetricMatrix build_ak_matrix(const CurvatureVector& lambda, int k) {
  const int n = lambda.size();
  const SymmetricMatrix A = build_A(lambda, k);
  const double* v = data(lambda);
  const double sk = detail::esf(v, n, k);
  Vec xi(n);
  for (int i = 0; i < n; ++i) xi[i] = detail::esf(v, n, k - 1, i);
  SymmetricMatrix W(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) W.set(i, j, sk * A(i, j) - xi[i] * xi[j]);
  return W;
}

double ak_term_scale(const CurvatureVector& lambda, int k) {
  const int n = lambda.size();
  const double* v = data(lambda);
  const double sk = detail::esf(v, n, k);
  double xi2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = detail::esf(v, n, k - 1, i);
    xi2 += x * x;
  }
  return std::abs(sk) * build_A(lambda, k).frobenius_norm() + xi2;
}

SymmetricMatrix build_A_tilde(const CurvatureVector& lambda, int k, int m) {
  const int n = lambda.size();
  if (k < 1 || k > n) throw ArgumentError("A~ needs 1 <= k <= n, got k=" + std::to_string(k));
  if (m < 1 || m > n) throw ArgumentError("A~ needs 1 <= m <= n, got m=" + std::to_string(m));
  const double* v = data(lambda);
  const double sk = detail::esf(v, n, k);
  Vec ski(m);
  for (int i = 0; i < m; ++i) ski[i] = detail::esf(v, n, k, i);
  SymmetricMatrix T(m);
  for (int i = 0; i < m; ++i) {
    T.set(i, i, ski[i] * (sk - ski[i]));
    for (int j = i + 1; j < m; ++j) T.set(i, j, sk * detail::esf(v, n, k, i, j) - ski[i] * ski[j]);
  }
  return T;
}

double psd_margin(const SymmetricMatrix& M) {
  if (!M.dense().allFinite()) throw NumericError("psd_margin: matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Mat> es(M.dense(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("psd_margin: eigensolver did not converge");
  return es.eigenvalues().minCoeff();
}

bool is_psd(const SymmetricMatrix& M, double tol) {
  return psd_margin(M) >= -tol * M.frobenius_norm();
}

bool is_psd(const SymmetricMatrix& M, double tol, double scale) {
  return psd_margin(M) >= -tol * scale;
}

std::vector<double> leading_principal_minors(const SymmetricMatrix& M) {
  std::vector<double> minors;
  for (int r = 1; r <= M.size(); ++r) minors.push_back(M.dense().topLeftCorner(r, r).determinant());
  return minors;
}

DetIdentity det_identity(const CurvatureVector& lambda, int k, int m) {
  const SymmetricMatrix T = build_A_tilde(lambda, k, m);
  const SymmetricMatrix D = build_D(lambda, k, m);
  const double sk = detail::esf(data(lambda), lambda.size(), k);
  double had_t = 0.0, had_d = 0.0;
  DetIdentity out;
  out.lhs = equilibrated_det(T.dense(), &had_t);
  const double skm1 = std::pow(sk, m - 1);
  out.rhs = skm1 * equilibrated_det(D.dense(), &had_d);
  out.scale = std::max(had_t, skm1 * had_d);
  return out;
}

double det_identity_residual(const CurvatureVector& lambda, int k, int m) {
  return det_identity(lambda, k, m).residual();
}

double key_inequality_scale(const CurvatureVector& lambda, std::span<const double> y) {
  double s = 0.0;
  for (double yi : y) s += yi * yi;
  return s / (lambda.min() * lambda.min());
}

namespace {

double key_form(const DerivativeBundle& d, const CurvatureVector& lambda, std::span<const double> y) {
  const int n = lambda.size();
  const auto& g = d.log->gradient;
  const auto& H = d.log->hessian;
  double diag = 0.0, quad = 0.0;
  for (int i = 0; i < n; ++i) {
    diag += g[i] / lambda[i] * y[i] * y[i];
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += H(i, j) * y[j];
    quad += row * y[i];
  }
  return diag + quad;
}

}  // namespace

double key_inequality_margin(const SpeedFunction& F, const CurvatureVector& lambda,
                             std::span<const double> y) {
  require_span(y, lambda.size(), "y");
  const DerivativeBundle d = eval_bundle(F, lambda);
  if (!d.log) throw DomainError("key inequality needs F > 0, got F = " + std::to_string(d.value));
  return key_form(d, lambda, y);
}

double sigma_quadratic_form(const CurvatureVector& lambda, int k, std::span<const double> y) {
  const int n = lambda.size();
  require_span(y, n, "y");
  if (k < 1 || k > n) throw ArgumentError("sigma quadratic form needs 1 <= k <= n");
  const double* v = data(lambda);
  const double sk = detail::esf(v, n, k);
  double diag = 0.0, cross = 0.0, lin = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s1 = detail::esf(v, n, k - 1, i);
    diag += s1 / (v[i] * sk) * y[i] * y[i];
    lin += s1 / sk * y[i];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      cross += detail::esf(v, n, k - 2, i, j) / sk * y[i] * y[j];
    }
  }
  return diag + cross - lin * lin;
}

ConditionMargins condition_margins(const SpeedFunction& F, const CurvatureVector& lambda,
                                   std::span<const double> y) {
  const int n = lambda.size();
  require_span(y, n, "y");
  const DerivativeBundle d = eval_bundle(F, lambda);
  ConditionMargins out;

  out.positivity = std::min(d.value, d.gradient.minCoeff());

  const double gap = symfun::kDividedDifferenceGap * lambda.max();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dl = lambda[i] - lambda[j];
      double q, s;
      if (std::abs(dl) < gap) {
        q = d.gradient[i] + lambda[i] * (d.hessian(i, i) - d.hessian(i, j));
        s = std::abs(d.gradient[i]) + lambda[i] * (std::abs(d.hessian(i, i)) + std::abs(d.hessian(i, j)));
      } else {
        const double a = lambda[i] * d.gradient[i];
        const double b = lambda[j] * d.gradient[j];
        q = (a - b) / dl;
        s = (std::abs(a) + std::abs(b)) / std::abs(dl);
      }
      const double normalized = s > 0.0 ? q / s : q;
      if (normalized < best) {
        best = normalized;
        out.quotient = q;
        out.quotient_scale = s;
      }
    }
  }

  if (d.log) {
    out.key = key_form(d, lambda, y);
    out.key_scale = key_inequality_scale(lambda, y);
  }

  constexpr double t = 2.5;
  Vec scaled = lambda.values() * t;
  const double ft = F.value({scaled.data(), static_cast<std::size_t>(n)});
  const double expect = std::pow(t, F.beta()) * d.value;
  out.scaling_residual = expect != 0.0 ? std::abs(ft - expect) / std::abs(expect) : std::abs(ft);
  return out;
}

double lamij_margin(const SpeedFunction& F, const CurvatureVector& lambda, int i, int j) {
  const int n = lambda.size();
  if (!(lambda[0] < lambda[1])) {
    throw ArgumentError("lamij needs lambda_1 strictly below lambda_2");
  }
  if (!(i > j && j >= 1 && i < n)) {
    throw ArgumentError("lamij needs 0-based indices i > j >= 1, got i=" + std::to_string(i) +
                        " j=" + std::to_string(j));
  }
  const DerivativeBundle d = eval_bundle(F, lambda);
  const double l1 = lambda[0];
  const double ai = lambda[i] - l1;
  const double aj = lambda[j] - l1;
  const double dij = lambda[i] - lambda[j];
  if (std::abs(dij) < symfun::kDividedDifferenceGap * lambda.max()) {
    return d.hessian(i, i) - d.hessian(i, j) + 2.0 * d.gradient[i] / aj;
  }
  return (d.gradient[i] * ai * ai - d.gradient[j] * aj * aj) / (ai * aj * dij);
}

RigidityTerms rigidity_terms(const SpeedFunction& F, const CurvatureVector& lambda, double C) {
  const int n = lambda.size();
  const auto [value, grad] = F.value_gradient(lambda.span());
  const double beta = F.beta();
  if (beta == 0.0) throw ArgumentError("rigidity terms need beta != 0");
  const double l1 = lambda.min();
  const double a = (beta - 1.0) / beta;

  RigidityTerms r;
  double trb = 0.0, sum_g = 0.0, sum_gl2 = 0.0, sum_abs_gl2 = 0.0, sum_abs_g = 0.0;
  for (int i = 0; i < n; ++i) {
    const double li = lambda[i];
    const double ratio = li / l1 - 1.0;
    r.J1 += a * grad[i] * ratio - C * grad[i] * li * ratio;
    r.J1_scale += (std::abs(a) + std::abs(C) * li) * std::abs(grad[i]) * (li / l1 + 1.0);
    trb += 1.0 / li;
    sum_g += grad[i];
    sum_abs_g += std::abs(grad[i]);
    sum_gl2 += grad[i] * li * li;
    sum_abs_gl2 += std::abs(grad[i]) * li * li;
  }
  r.L1 = (beta - 1.0) * value * trb - n * a * sum_g + C * (n * beta * value - trb * sum_gl2);
  r.L1_scale = std::abs((beta - 1.0) * value * trb) + std::abs(n * a) * sum_abs_g +
               std::abs(C) * (std::abs(n * beta * value) + trb * sum_abs_gl2);
  return r;
}

double cs_margin(const SpeedFunction& F, const CurvatureVector& lambda, std::span<const double> h) {
  const int n = lambda.size();
  require_span(h, n, "h");
  const auto [value, grad] = F.value_gradient(lambda.span());
  if (!(value > 0.0)) throw DomainError("cs_margin needs F > 0");
  double weighted = 0.0, lin = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = grad[i] / value;
    weighted += g / lambda[i] * h[i] * h[i];
    lin += g * h[i];
  }
  return weighted - lin * lin / F.beta();
}

double cs_scale(const SpeedFunction& F, const CurvatureVector& lambda, std::span<const double> h) {
  const int n = lambda.size();
  require_span(h, n, "h");
  const auto [value, grad] = F.value_gradient(lambda.span());
  double weighted = 0.0, lin = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = std::abs(grad[i] / value);
    weighted += g / lambda[i] * h[i] * h[i];
    lin += g * std::abs(h[i]);
  }
  return weighted + lin * lin / std::abs(F.beta());
}

namespace {

void check_condmin(std::span<const double> t, int m, double k) {
  if (t.empty()) throw ArgumentError("condmin needs at least one t_i");
  if (m < 0 || m >= static_cast<int>(t.size())) throw ArgumentError("condmin index out of range");
  double inv = 0.0;
  for (double ti : t) {
    if (!(ti > 0.0)) throw ArgumentError("condmin needs t_i > 0");
    inv += 1.0 / ti;
  }
  if (std::abs(inv - k) > 1e-10) {
    throw ArgumentError("condmin constraint sum 1/t_i = k violated: sum = " + std::to_string(inv) +
                        ", k = " + std::to_string(k));
  }
}

}  // namespace

double condmin_value(std::span<const double> t, int m, double alpha, double k) {
  check_condmin(t, m, k);
  const double tm = t[m];
  const double a = 2.0 * alpha / tm - 1.0;
  return a * a / k - 4.0 * alpha * alpha / tm;
}

std::vector<double> condmin_minimizer(std::span<const double> t, int m, double alpha, double k) {
  check_condmin(t, m, k);
  const double tm = t[m];
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double delta = static_cast<int>(i) == m ? 1.0 : 0.0;
    y[i] = (2.0 * alpha * delta - 2.0 * alpha / (k * tm) + 1.0 / k) / t[i];
  }
  return y;
}

double condmin_objective(std::span<const double> t, int m, double alpha, std::span<const double> y) {
  if (y.size() != t.size()) throw ArgumentError("condmin objective: size mismatch");
  double f = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) f += t[i] * y[i] * y[i];
  return f - 4.0 * alpha * y[static_cast<std::size_t>(m)];
}

double thm63_factor_margin(double t, double alpha, int n, int k) {
  if (!(t >= 1.0)) throw ArgumentError("thm63 factor needs t >= 1, got " + std::to_string(t));
  if (k < 2 || k > n) throw ArgumentError("thm63 factor needs 2 <= k <= n");
  return (2.0 * alpha / t - 1.0) * ((2.0 / (k * t) - n - 1.0) * alpha + double(n - 1) / k);
}

std::pair<double, double> thm63_alpha_interval(int n, int k) {
  if (k < 2 || k > n) throw ArgumentError("thm63 interval needs 2 <= k <= n");
  return {double(n - 1) / (k * (n + 1) - 2), 0.5};
}

namespace {

struct LogSk {
  Vec g;
  Mat H;
};

LogSk log_sk(const CurvatureVector& lambda, int k) {
  if (k < 1) throw ArgumentError("S_k needs k >= 1");
  const DerivativeBundle d = eval_bundle(SpeedFunction::power_sum_power(k, 1.0), lambda);
  return {d.log->gradient, d.log->hessian};
}

}  // namespace

double sk_loghess_margin(const CurvatureVector& lambda, int k, std::span<const double> h) {
  const int n = lambda.size();
  require_span(h, n, "h");
  const LogSk l = log_sk(lambda, k);
  double quad = 0.0, lin = 0.0;
  for (int i = 0; i < n; ++i) {
    lin += l.g[i] * h[i];
    for (int j = 0; j < n; ++j) quad += l.H(i, j) * h[i] * h[j];
  }
  return quad + lin * lin / k;
}

double sk_loghess_scale(const CurvatureVector& lambda, int k, std::span<const double> h) {
  const int n = lambda.size();
  require_span(h, n, "h");
  const LogSk l = log_sk(lambda, k);
  double quad = 0.0, lin = 0.0;
  for (int i = 0; i < n; ++i) {
    lin += l.g[i] * h[i];
    for (int j = 0; j < n; ++j) quad += std::abs(l.H(i, j) * h[i] * h[j]);
  }
  return quad + lin * lin / k;
}

}  // namespace flowlab::lab
