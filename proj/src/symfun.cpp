#include "flowlab/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "esf.hpp"
#include "flowlab/errors.hpp"

namespace flowlab::symfun {

namespace {

Vec validated_sorted(std::span<const double> values) {
  const auto n = static_cast<int>(values.size());
  if (n < 2) throw ArgumentError("CurvatureVector needs n >= 2 entries, got " + std::to_string(n));
  if (n > kMaxDim) {
    throw ArgumentError("CurvatureVector supports n <= " + std::to_string(kMaxDim) + ", got " +
                        std::to_string(n));
  }
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    const double x = values[i];
    if (!std::isfinite(x) || !(x > 0.0)) {
      throw ArgumentError("curvature " + std::to_string(i) + " = " + std::to_string(x) +
                          " is not in the positive cone");
    }
    v[i] = x;
  }
  std::sort(v.data(), v.data() + n);
  return v;
}

}  // namespace

CurvatureVector::CurvatureVector(std::span<const double> values)
    : values_(validated_sorted(values)) {}

CurvatureVector::CurvatureVector(std::initializer_list<double> values)
    : values_(validated_sorted({values.begin(), values.size()})) {}

CurvatureVector CurvatureVector::constant(int n, double c) {
  std::vector<double> v(static_cast<std::size_t>(std::max(n, 0)), c);
  return CurvatureVector(std::span<const double>(v));
}

CurvatureVector CurvatureVector::scaled(double t) const {
  Vec v = values_ * t;
  return CurvatureVector(std::span<const double>(v.data(), v.size()));
}

double sigma(std::span<const double> values, int k, std::span<const int> excluded) {
  const auto n = static_cast<int>(values.size());
  std::vector<bool> drop(values.size(), false);
  for (int idx : excluded) {
    if (idx < 0 || idx >= n) {
      throw ArgumentError("excluded index " + std::to_string(idx) + " out of range [0, " +
                          std::to_string(n) + ")");
    }
    if (drop[idx]) throw ArgumentError("excluded index " + std::to_string(idx) + " repeated");
    drop[idx] = true;
  }
  if (k < 0) return 0.0;
  if (k == 0) return 1.0;
  const int remaining = n - static_cast<int>(excluded.size());
  if (k > remaining) return 0.0;

  std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    if (drop[i]) continue;
    ++used;
    for (int j = std::min(used, k); j >= 1; --j) e[j] += values[i] * e[j - 1];
  }
  return e[k];
}

double sigma(const CurvatureVector& lambda, int k, std::initializer_list<int> excluded) {
  return sigma(lambda.span(), k, std::span<const int>(excluded.begin(), excluded.size()));
}

double power_sum(std::span<const double> values, int k) {
  if (k < 1) throw ArgumentError("power_sum needs k >= 1, got " + std::to_string(k));
  double s = 0.0;
  for (double x : values) s += detail::ipow(x, k);
  return s;
}

double power_sum(const CurvatureVector& lambda, int k) { return power_sum(lambda.span(), k); }

double SigmaIdentityResiduals::max_relative() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    const double rel = scale[i] > 0.0 ? std::abs(residual[i]) / scale[i] : std::abs(residual[i]);
    worst = std::max(worst, rel);
  }
  return worst;
}

SigmaIdentityResiduals sigma_identity_residuals(const CurvatureVector& lambda, int k) {
  const int n = lambda.size();
  if (k < 0 || k > n) {
    throw ArgumentError("sigma identities need 0 <= k <= n, got k=" + std::to_string(k));
  }
  const double* v = lambda.values().data();
  const double s1 = detail::esf(v, n, 1);
  const double sk = detail::esf(v, n, k);
  const double sk1 = detail::esf(v, n, k + 1);
  const double sk2 = detail::esf(v, n, k + 2);

  SigmaIdentityResiduals r;
  double sum_l = 0.0, sum_l_abs = 0.0;
  double sum_plain = 0.0;
  double sum_l2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ski = detail::esf(v, n, k, i);
    const double sk1i = detail::esf(v, n, k + 1, i);
    const double lam = v[i];

    const double res0 = sk1 - (sk1i + lam * ski);
    const double sc0 = std::abs(sk1) + std::abs(sk1i) + std::abs(lam * ski);
    if (std::abs(res0) > std::abs(r.residual[0])) r.residual[0] = res0;
    r.scale[0] = std::max(r.scale[0], sc0);

    sum_l += lam * ski;
    sum_l_abs += std::abs(lam * ski);
    sum_plain += ski;
    sum_l2 += lam * lam * ski;
  }
  r.residual[1] = sum_l - (k + 1) * sk1;
  r.scale[1] = sum_l_abs + std::abs((k + 1) * sk1);
  r.residual[2] = sum_plain - (n - k) * sk;
  r.scale[2] = std::abs(sum_plain) + std::abs((n - k) * sk);
  r.residual[3] = sum_l2 - (s1 * sk1 - (k + 2) * sk2);
  r.scale[3] = std::abs(sum_l2) + std::abs(s1 * sk1) + std::abs((k + 2) * sk2);
  return r;
}

namespace {

// Value, gradient and Hessian of a single basis function at v.
struct BasisDerivs {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

BasisDerivs basis_derivs(const Factor& f, const double* v, int n) {
  BasisDerivs d;
  d.grad.setZero(n);
  d.hess.setZero(n, n);
  const int k = f.k;
  if (f.basis == Basis::Sigma) {
    d.value = detail::esf(v, n, k);
    for (int i = 0; i < n; ++i) {
      d.grad[i] = detail::esf(v, n, k - 1, i);
      for (int j = i + 1; j < n; ++j) {
        const double h = detail::esf(v, n, k - 2, i, j);
        d.hess(i, j) = h;
        d.hess(j, i) = h;
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      d.value += detail::ipow(v[i], k);
      d.grad[i] = k * detail::ipow(v[i], k - 1);
      d.hess(i, i) = k >= 2 ? double(k) * (k - 1) * detail::ipow(v[i], k - 2) : 0.0;
    }
  }
  return d;
}

void check_orders(const SpeedFunction& F, int n) {
  for (const Term& t : F.terms()) {
    for (const Factor& f : t.factors) {
      if (f.basis == Basis::Sigma && f.k > n) {
        throw ArgumentError("sigma(" + std::to_string(f.k) + ") vanishes identically for n=" +
                            std::to_string(n));
      }
    }
  }
}

}  // namespace

DerivativeBundle eval_bundle(const SpeedFunction& F, const CurvatureVector& lambda) {
  const int n = lambda.size();
  check_orders(F, n);
  const double* v = lambda.values().data();

  DerivativeBundle out;
  out.gradient.setZero(n);
  out.hessian.setZero(n, n);

  for (const Term& term : F.terms()) {
    // Running product P with gradient and Hessian, multiplied factor by factor.
    double P = term.coefficient;
    Vec gP = Vec::Zero(n);
    Mat hP = Mat::Zero(n, n);
    for (const Factor& f : term.factors) {
      const BasisDerivs b = basis_derivs(f, v, n);
      const double e = f.exponent;
      double fv, c1, c2;
      if (e == 1.0) {
        fv = b.value;
        c1 = 1.0;
        c2 = 0.0;
      } else {
        fv = std::pow(b.value, e);
        c1 = e * std::pow(b.value, e - 1.0);
        c2 = e * (e - 1.0) * std::pow(b.value, e - 2.0);
      }
      const Vec gf = c1 * b.grad;
      Mat hf = c1 * b.hess;
      if (c2 != 0.0) hf.noalias() += c2 * b.grad * b.grad.transpose();

      Mat hnew = fv * hP + P * hf;
      hnew.noalias() += gP * gf.transpose();
      hnew.noalias() += gf * gP.transpose();
      gP = fv * gP + P * gf;
      hP = hnew;
      P *= fv;
    }
    out.value += P;
    out.gradient += gP;
    out.hessian += hP;
  }
  // Symmetrize exactly: both triangles come from the same expressions up to rounding order.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double h = 0.5 * (out.hessian(i, j) + out.hessian(j, i));
      out.hessian(i, j) = h;
      out.hessian(j, i) = h;
    }
  }

  if (out.value > 0.0) {
    LogDerivatives lg;
    lg.gradient = out.gradient / out.value;
    lg.hessian = out.hessian / out.value;
    lg.hessian.noalias() -= lg.gradient * lg.gradient.transpose();
    out.log = std::move(lg);
  }
  return out;
}

DirectionalForms second_derivative_form(const SpeedFunction& F, const CurvatureVector& lambda,
                                        const Eigen::Ref<const Eigen::MatrixXd>& B) {
  const int n = lambda.size();
  if (B.rows() != n || B.cols() != n) {
    throw ArgumentError("direction matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  const DerivativeBundle d = eval_bundle(F, lambda);
  const double gap = kDividedDifferenceGap * lambda.max();

  DirectionalForms out;
  for (int p = 0; p < n; ++p) {
    out.first_form += d.gradient[p] * B(p, p);
    for (int q = 0; q < n; ++q) out.second_form += d.hessian(p, q) * B(p, p) * B(q, q);
  }
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double bpq = 0.5 * (B(p, q) + B(q, p));
      const double dl = lambda[p] - lambda[q];
      const double dd = std::abs(dl) < gap ? d.hessian(p, p) - d.hessian(p, q)
                                           : (d.gradient[p] - d.gradient[q]) / dl;
      out.second_form += 2.0 * dd * bpq * bpq;
    }
  }
  return out;
}

double euler_residual(const SpeedFunction& F, const CurvatureVector& lambda) {
  const auto [value, grad] = F.value_gradient(lambda.span());
  return lambda.values().dot(grad) - F.beta() * value;
}

}  // namespace flowlab::symfun
