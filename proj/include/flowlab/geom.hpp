#pragma once

// Rotationally symmetric closed convex hypersurfaces in R^{n+1}, stored as a
// radial graph rho(theta) over the polar angle on the uniform grid
// theta_j = j pi / N, j = 0..N.

#include <string>
#include <vector>

#include "flowlab/symfun.hpp"

namespace flowlab::geom {

using symfun::SpeedFunction;

class MeridianProfile {
 public:
  /// Throws ArgumentError unless 2 <= n <= kMaxDim, N >= 2 and every rho_j is
  /// positive and finite.
  MeridianProfile(int n, std::vector<double> rho);

  int n() const { return n_; }
  int N() const { return static_cast<int>(rho_.size()) - 1; }
  const std::vector<double>& rho() const { return rho_; }
  double rho(int j) const { return rho_[static_cast<std::size_t>(j)]; }
  double dtheta() const;
  double theta(int j) const;

  /// Uniform rescaling rho -> s rho.
  MeridianProfile scaled(double s) const;

 private:
  int n_;
  std::vector<double> rho_;
};

struct Shape {
  enum class Kind { Sphere, Ellipsoid, PerturbedSphere };
  Kind kind = Kind::Sphere;
  double r = 1.0;  // sphere and perturbed-sphere radius
  double a = 1.0;  // ellipsoid equatorial semi-axis
  double b = 1.0;  // ellipsoid polar semi-axis
  int mode = 2;    // Legendre degree of the perturbation
  double eps = 0.0;

  static Shape sphere(double r);
  static Shape ellipsoid(double a_equatorial, double b_polar);
  static Shape perturbed_sphere(double r, int mode, double eps);

  /// "sphere:R", "ellipsoid:A,B", "perturbed:R,L,EPS".
  static Shape parse(const std::string& text);
  std::string to_string() const;
};

/// Samples the exact radial graph of the shape. Throws DomainError naming the
/// first node where a principal curvature is not positive.
MeridianProfile make_shape(const Shape& shape, int n, int N);

struct CurvatureField {
  std::vector<double> merid;   // meridian principal curvature
  std::vector<double> par;     // parallel principal curvature (multiplicity n-1)
  std::vector<double> support; // <X, nu>
  std::vector<double> normX2;  // |X|^2

  int size() const { return static_cast<int>(merid.size()); }
  double min_curvature() const;
  double max_curvature() const;
  /// First node with a non-positive or non-finite curvature, or -1.
  int first_nonconvex() const;
};

/// Centered second-order differences with even reflection at the poles; the
/// parallel curvature takes its limit (equal to the meridian one) at the poles.
/// Throws NumericError on non-finite values.
CurvatureField curvature_field(const MeridianProfile& p);

bool is_convex(const MeridianProfile& p);

/// Principal curvature vector (merid, par, ..., par) of node j.
symfun::CurvatureVector node_curvatures(const CurvatureField& f, int j, int n);

struct ResidualStats {
  double max_abs = 0.0;
  double mean_abs = 0.0;
};

/// |F(lambda) + C - u| over the grid. Throws DomainError on non-convex profiles.
ResidualStats selfsim_residual(const MeridianProfile& p, const SpeedFunction& F, double C);

/// Root of F(1/r, ..., 1/r) + C - r by bracketed bisection.
double stationary_sphere_radius(const SpeedFunction& F, double C, int n);

struct Diagnostics {
  std::vector<double> Z;  // F tr b - n(beta-1)/(2 beta)|X|^2
  std::vector<double> W;  // F / lambda_min - (beta-1)/(2 beta)|X|^2

  double Z_min() const;
  double Z_max() const;
  double W_min() const;
  double W_max() const;
};

Diagnostics diagnostics(const MeridianProfile& p, const SpeedFunction& F);

struct SphereIdentityResiduals {
  double r_star = 0.0;
  double res1 = 0.0;  // beta F - (sum F_i lambda_i^2)(F + C)
  double res5 = 0.0;  // sum F_i - beta F (F + C)
  double scale1 = 0.0;
  double scale5 = 0.0;
  double rel1() const { return scale1 > 0 ? std::abs(res1) / scale1 : std::abs(res1); }
  double rel5() const { return scale5 > 0 ? std::abs(res5) / scale5 : std::abs(res5); }
};

SphereIdentityResiduals sphere_identity_residuals(const SpeedFunction& F, double C, int n);

/// sin^{n-1}(theta)-weighted mean of rho (trapezoidal weights).
double weighted_mean_radius(const MeridianProfile& p);

/// (n+1)-volume enclosed by the hypersurface.
double enclosed_volume(const MeridianProfile& p);

/// CSV with header "theta,rho" and 17 significant digits.
std::string profile_csv(const MeridianProfile& p);
void write_profile_csv(const std::string& path, const MeridianProfile& p);
/// Throws ArgumentError on malformed input or a non-uniform theta column.
MeridianProfile parse_profile_csv(const std::string& text, int n);
MeridianProfile read_profile_csv(const std::string& path, int n);

}  // namespace flowlab::geom
