#include "flowlab/geom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "flowlab/errors.hpp"
#include "flowlab/io.hpp"

namespace flowlab::geom {

namespace {

constexpr double kPi = std::numbers::pi;

std::array<double, kMaxDim> node_values(const CurvatureField& f, int j, int n) {
  std::array<double, kMaxDim> v{};
  v[0] = f.merid[static_cast<std::size_t>(j)];
  for (int i = 1; i < n; ++i) v[static_cast<std::size_t>(i)] = f.par[static_cast<std::size_t>(j)];
  return v;
}

double speed_at(const SpeedFunction& F, const CurvatureField& f, int j, int n) {
  const auto v = node_values(f, j, n);
  return F.value(std::span<const double>(v.data(), static_cast<std::size_t>(n)));
}

void require_convex(const CurvatureField& f, const MeridianProfile& p, const char* what) {
  const int bad = f.first_nonconvex();
  if (bad >= 0) {
    const auto b = static_cast<std::size_t>(bad);
    throw DomainError(std::string(what) + ": profile is not strictly convex at node " +
                      std::to_string(bad) + " (theta=" + io::format_g17(p.theta(bad)) +
                      ", meridian curvature " + io::format_g17(f.merid[b]) +
                      ", parallel curvature " + io::format_g17(f.par[b]) + ")");
  }
}

// cot(j pi / N), antisymmetric about the equator to the last bit
double cot_theta(int j, int N) {
  if (2 * j == N) return 0.0;
  const bool upper = 2 * j > N;
  const double th = (upper ? N - j : j) * kPi / N;
  const double c = std::cos(th) / std::sin(th);
  return upper ? -c : c;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ArgumentError("shape: cannot read " + what + " from '" + s + "'");
  }
  if (used != s.size()) throw ArgumentError("shape: trailing characters in " + what + " '" + s + "'");
  if (!std::isfinite(v)) throw ArgumentError("shape: " + what + " must be finite");
  return v;
}

double parse_positive(const std::string& s, const std::string& what) {
  const double v = parse_number(s, what);
  if (!(v > 0.0)) throw ArgumentError("shape: " + what + " must be positive, got '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

MeridianProfile::MeridianProfile(int n, std::vector<double> rho) : n_(n), rho_(std::move(rho)) {
  if (n < 2 || n > kMaxDim) {
    throw ArgumentError("profile dimension n must be in [2, " + std::to_string(kMaxDim) + "], got " +
                        std::to_string(n));
  }
  if (rho_.size() < 3) throw ArgumentError("profile needs at least 3 nodes");
  for (std::size_t j = 0; j < rho_.size(); ++j) {
    if (!(std::isfinite(rho_[j]) && rho_[j] > 0.0)) {
      throw ArgumentError("profile radius at node " + std::to_string(j) + " is not positive: " +
                          io::format_g17(rho_[j]));
    }
  }
}

double MeridianProfile::dtheta() const { return kPi / N(); }

double MeridianProfile::theta(int j) const { return j * kPi / N(); }

MeridianProfile MeridianProfile::scaled(double s) const {
  std::vector<double> r = rho_;
  for (double& x : r) x *= s;
  return MeridianProfile(n_, std::move(r));
}

Shape Shape::sphere(double r) {
  Shape s;
  s.kind = Kind::Sphere;
  s.r = r;
  return s;
}

Shape Shape::ellipsoid(double a_equatorial, double b_polar) {
  Shape s;
  s.kind = Kind::Ellipsoid;
  s.a = a_equatorial;
  s.b = b_polar;
  return s;
}

Shape Shape::perturbed_sphere(double r, int mode, double eps) {
  Shape s;
  s.kind = Kind::PerturbedSphere;
  s.r = r;
  s.mode = mode;
  s.eps = eps;
  return s;
}

Shape Shape::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ArgumentError("shape '" + text + "': expected kind:parameters, e.g. sphere:1 or ellipsoid:1,1.5");
  }
  const std::string kind = text.substr(0, colon);
  const auto args = split(text.substr(colon + 1), ',');
  auto want = [&](std::size_t count) {
    if (args.size() != count) {
      throw ArgumentError("shape '" + text + "': expected " + std::to_string(count) + " parameter(s)");
    }
  };
  if (kind == "sphere") {
    want(1);
    return sphere(parse_positive(args[0], "radius"));
  }
  if (kind == "ellipsoid") {
    want(2);
    return ellipsoid(parse_positive(args[0], "equatorial semi-axis"),
                     parse_positive(args[1], "polar semi-axis"));
  }
  if (kind == "perturbed") {
    want(3);
    const double l = parse_number(args[1], "mode");
    if (l != std::floor(l) || l < 0 || l > 64) throw ArgumentError("shape: mode must be an integer in [0, 64]");
    return perturbed_sphere(parse_positive(args[0], "radius"), static_cast<int>(l),
                            parse_number(args[2], "amplitude"));
  }
  throw ArgumentError("shape '" + text + "': unknown kind '" + kind + "' (sphere, ellipsoid, perturbed)");
}

std::string Shape::to_string() const {
  switch (kind) {
    case Kind::Sphere:
      return "sphere:" + io::format_g17(r);
    case Kind::Ellipsoid:
      return "ellipsoid:" + io::format_g17(a) + "," + io::format_g17(b);
    case Kind::PerturbedSphere:
      return "perturbed:" + io::format_g17(r) + "," + std::to_string(mode) + "," + io::format_g17(eps);
  }
  return {};
}

MeridianProfile make_shape(const Shape& shape, int n, int N) {
  if (N < 2) throw ArgumentError("grid resolution N must be >= 2");
  std::vector<double> rho(static_cast<std::size_t>(N) + 1);
  for (int j = 0; j <= N; ++j) {
    const double th = j * kPi / N;
    double v = 0.0;
    switch (shape.kind) {
      case Shape::Kind::Sphere:
        if (!(shape.r > 0.0)) throw ArgumentError("sphere radius must be positive");
        v = shape.r;
        break;
      case Shape::Kind::Ellipsoid: {
        if (!(shape.a > 0.0 && shape.b > 0.0)) throw ArgumentError("ellipsoid semi-axes must be positive");
        const double s = std::sin(th), c = std::cos(th);
        v = shape.a * shape.b / std::sqrt(shape.b * shape.b * s * s + shape.a * shape.a * c * c);
        break;
      }
      case Shape::Kind::PerturbedSphere:
        if (!(shape.r > 0.0)) throw ArgumentError("sphere radius must be positive");
        v = shape.r * (1.0 + shape.eps * std::legendre(static_cast<unsigned>(shape.mode), std::cos(th)));
        break;
    }
    rho[static_cast<std::size_t>(j)] = v;
  }
  // Mirror-symmetric shapes are made exactly symmetric about the equator.
  if (shape.kind == Shape::Kind::Ellipsoid) {
    for (int j = 0; j <= N / 2; ++j) rho[static_cast<std::size_t>(N - j)] = rho[static_cast<std::size_t>(j)];
  }
  for (int j = 0; j <= N; ++j) {
    if (!(rho[static_cast<std::size_t>(j)] > 0.0)) {
      throw DomainError("shape " + shape.to_string() + " has non-positive radius at node " + std::to_string(j));
    }
  }
  MeridianProfile p(n, std::move(rho));
  require_convex(curvature_field(p), p, ("make_shape " + shape.to_string()).c_str());
  return p;
}

double CurvatureField::min_curvature() const {
  return std::min(*std::min_element(merid.begin(), merid.end()), *std::min_element(par.begin(), par.end()));
}

double CurvatureField::max_curvature() const {
  return std::max(*std::max_element(merid.begin(), merid.end()), *std::max_element(par.begin(), par.end()));
}

int CurvatureField::first_nonconvex() const {
  for (int j = 0; j < size(); ++j) {
    const auto u = static_cast<std::size_t>(j);
    if (!(merid[u] > 0.0 && par[u] > 0.0 && std::isfinite(merid[u]) && std::isfinite(par[u]))) return j;
  }
  return -1;
}

CurvatureField curvature_field(const MeridianProfile& p) {
  const int N = p.N();
  const double h = p.dtheta();
  const std::vector<double>& r = p.rho();
  CurvatureField f;
  f.merid.resize(r.size());
  f.par.resize(r.size());
  f.support.resize(r.size());
  f.normX2.resize(r.size());
  for (int j = 0; j <= N; ++j) {
    const auto u = static_cast<std::size_t>(j);
    const double rj = r[u];
    // even reflection across the poles
    const double rm = j == 0 ? r[1] : r[u - 1];
    const double rp = j == N ? r[static_cast<std::size_t>(N - 1)] : r[u + 1];
    const double d1 = (rp - rm) / (2.0 * h);
    const double d2 = (rp - 2.0 * rj + rm) / (h * h);
    const double q = rj * rj + d1 * d1;
    const double s = std::sqrt(q);
    const double km = (rj * rj + 2.0 * d1 * d1 - rj * d2) / q / s;
    double kp;
    if (j == 0 || j == N) {
      kp = km;
    } else {
      kp = (1.0 - (d1 / rj) * cot_theta(j, N)) / s;
    }
    f.merid[u] = km;
    f.par[u] = kp;
    f.support[u] = rj * rj / s;
    f.normX2[u] = rj * rj;
    if (!std::isfinite(km) || !std::isfinite(kp) || !std::isfinite(f.support[u])) {
      throw NumericError("non-finite curvature at node " + std::to_string(j));
    }
  }
  return f;
}

bool is_convex(const MeridianProfile& p) { return curvature_field(p).first_nonconvex() < 0; }

symfun::CurvatureVector node_curvatures(const CurvatureField& f, int j, int n) {
  const auto v = node_values(f, j, n);
  return symfun::CurvatureVector(std::span<const double>(v.data(), static_cast<std::size_t>(n)));
}

ResidualStats selfsim_residual(const MeridianProfile& p, const SpeedFunction& F, double C) {
  const CurvatureField f = curvature_field(p);
  require_convex(f, p, "selfsim_residual");
  ResidualStats st;
  double sum = 0.0;
  for (int j = 0; j < f.size(); ++j) {
    const double res = std::abs(speed_at(F, f, j, p.n()) + C - f.support[static_cast<std::size_t>(j)]);
    st.max_abs = std::max(st.max_abs, res);
    sum += res;
  }
  st.mean_abs = sum / f.size();
  return st;
}

double stationary_sphere_radius(const SpeedFunction& F, double C, int n) {
  if (!(C <= 0.0) || !std::isfinite(C)) throw ArgumentError("stationary sphere needs C <= 0");
  if (n < 2 || n > kMaxDim) throw ArgumentError("n out of range");
  const double beta = F.beta();
  if (!(beta > 0.0)) throw ArgumentError("stationary sphere needs a speed of positive degree");
  const auto ones = symfun::CurvatureVector::constant(n, 1.0);
  const double F1 = F.value(ones);
  if (!(F1 > 0.0)) throw ArgumentError("speed function is not positive at (1, ..., 1)");
  const auto g = [&](double r) {
    return F.value(symfun::CurvatureVector::constant(n, 1.0 / r)) + C - r;
  };
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (!(g(lo) > 0.0)) {
    lo *= 0.5;
    if (++guard > 2000 || !(lo > 0.0)) throw NumericError("stationary sphere: lower bracket not found");
  }
  while (!(g(hi) < 0.0)) {
    hi *= 2.0;
    if (++guard > 4000 || !std::isfinite(hi)) throw NumericError("stationary sphere: upper bracket not found");
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

double Diagnostics::Z_min() const { return *std::min_element(Z.begin(), Z.end()); }
double Diagnostics::Z_max() const { return *std::max_element(Z.begin(), Z.end()); }
double Diagnostics::W_min() const { return *std::min_element(W.begin(), W.end()); }
double Diagnostics::W_max() const { return *std::max_element(W.begin(), W.end()); }

Diagnostics diagnostics(const MeridianProfile& p, const SpeedFunction& F) {
  const double beta = F.beta();
  if (beta == 0.0) throw ArgumentError("diagnostics need a speed of nonzero degree");
  const CurvatureField f = curvature_field(p);
  require_convex(f, p, "diagnostics");
  const int n = p.n();
  const double c = (beta - 1.0) / (2.0 * beta);
  Diagnostics d;
  d.Z.resize(static_cast<std::size_t>(f.size()));
  d.W.resize(d.Z.size());
  for (int j = 0; j < f.size(); ++j) {
    const auto u = static_cast<std::size_t>(j);
    const double Fv = speed_at(F, f, j, n);
    const double trb = 1.0 / f.merid[u] + (n - 1) / f.par[u];
    d.Z[u] = Fv * trb - n * c * f.normX2[u];
    d.W[u] = Fv / std::min(f.merid[u], f.par[u]) - c * f.normX2[u];
  }
  return d;
}

SphereIdentityResiduals sphere_identity_residuals(const SpeedFunction& F, double C, int n) {
  SphereIdentityResiduals s;
  s.r_star = stationary_sphere_radius(F, C, n);
  const auto lam = symfun::CurvatureVector::constant(n, 1.0 / s.r_star);
  const auto [Fv, g] = F.value_gradient(lam.span());
  const double beta = F.beta();
  double sum_g = 0.0, sum_gl2 = 0.0;
  for (int i = 0; i < n; ++i) {
    sum_g += g[i];
    sum_gl2 += g[i] * lam[i] * lam[i];
  }
  s.res1 = beta * Fv - sum_gl2 * (Fv + C);
  s.res5 = sum_g - beta * Fv * (Fv + C);
  s.scale1 = std::abs(beta * Fv) + std::abs(sum_gl2 * (Fv + C));
  s.scale5 = std::abs(sum_g) + std::abs(beta * Fv * (Fv + C));
  return s;
}

double weighted_mean_radius(const MeridianProfile& p) {
  const int N = p.N();
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= N; ++j) {
    double w = std::pow(std::sin(p.theta(j)), p.n() - 1);
    if (j == 0 || j == N) w *= 0.5;
    num += w * p.rho(j);
    den += w;
  }
  return num / den;
}

double enclosed_volume(const MeridianProfile& p) {
  const int n = p.n();
  const int N = p.N();
  // |S^{n-1}| / (n+1) * int rho^{n+1} sin^{n-1} dtheta
  const double sphere_area = 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
  double acc = 0.0;
  for (int j = 0; j <= N; ++j) {
    double w = std::pow(std::sin(p.theta(j)), n - 1);
    if (j == 0 || j == N) w *= 0.5;
    acc += w * std::pow(p.rho(j), n + 1);
  }
  return sphere_area / (n + 1) * acc * p.dtheta();
}

std::string profile_csv(const MeridianProfile& p) {
  std::string out = "theta,rho\n";
  for (int j = 0; j <= p.N(); ++j) out += io::format_g17(p.theta(j)) + "," + io::format_g17(p.rho(j)) + "\n";
  return out;
}

void write_profile_csv(const std::string& path, const MeridianProfile& p) {
  io::write_file_atomic(path, profile_csv(p));
}

MeridianProfile parse_profile_csv(const std::string& text, int n) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("profile CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "theta,rho") throw ArgumentError("profile CSV header must be 'theta,rho', got '" + line + "'");
  std::vector<double> theta, rho;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 2) throw ArgumentError("profile CSV line " + std::to_string(lineno) + ": expected 2 columns");
    try {
      std::size_t u1 = 0, u2 = 0;
      theta.push_back(std::stod(parts[0], &u1));
      rho.push_back(std::stod(parts[1], &u2));
      if (u1 != parts[0].size() || u2 != parts[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ArgumentError("profile CSV line " + std::to_string(lineno) + ": not a number");
    }
  }
  if (rho.size() < 3) throw ArgumentError("profile CSV needs at least 3 rows");
  const int N = static_cast<int>(rho.size()) - 1;
  for (int j = 0; j <= N; ++j) {
    const double expect = j * kPi / N;
    if (std::abs(theta[static_cast<std::size_t>(j)] - expect) > 1e-12) {
      throw ArgumentError("profile CSV row " + std::to_string(j) + ": theta must be j*pi/N on a uniform grid");
    }
  }
  return MeridianProfile(n, std::move(rho));
}

MeridianProfile read_profile_csv(const std::string& path, int n) {
  return parse_profile_csv(io::read_file(path), n);
}

}  // namespace flowlab::geom
