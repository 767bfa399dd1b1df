#pragma once

// Explicit integration of X_t = -F nu for rotationally symmetric convex
// hypersurfaces stored as radial graphs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowlab/errors.hpp"
#include "flowlab/geom.hpp"

namespace flowlab::flow {

using geom::MeridianProfile;
using symfun::SpeedFunction;

/// A stage of the integrator left the positive cone.
class ConvexityLost : public DomainError {
 public:
  ConvexityLost(int node, double theta, int stage, const std::string& detail);
  int node() const { return node_; }
  double theta() const { return theta_; }
  int stage() const { return stage_; }

 private:
  int node_;
  double theta_;
  int stage_;
};

enum class Mode { Raw, Normalized };
enum class Status { Converged, Shrunk, StepLimit, ConvexityLost };

std::string to_string(Mode m);
std::string to_string(Status s);

struct StopCriteria {
  std::optional<std::int64_t> max_steps;
  std::optional<double> max_time;
  std::optional<double> roundness_tol;
  std::optional<double> min_mean_radius;

  bool empty() const { return !max_steps && !max_time && !roundness_tol && !min_mean_radius; }
};

struct FlowConfig {
  SpeedFunction F = SpeedFunction::sigma_power(1, 1.0);
  double C_shift = 0.0;  // enters the self-similar residual only
  int n = 2;
  int N = 200;
  double cfl = 0.5;
  Mode mode = Mode::Raw;
  StopCriteria stop;
  std::int64_t record_every = 100;

  /// Throws ArgumentError naming the first invalid field.
  void validate() const;
};

struct FlowRecord {
  double t = 0.0;
  std::int64_t step = 0;
  double mean_radius = 0.0;
  double roundness = 0.0;
  double selfsim_residual_max = 0.0;
  double Z_min = 0.0;
  double Z_max = 0.0;
  double W_min = 0.0;
  double W_max = 0.0;
  double min_curvature = 0.0;
};

struct FlowTrace {
  std::vector<FlowRecord> records;
  Status status = Status::StepLimit;
  std::string message;
  std::optional<int> failed_node;
  std::optional<MeridianProfile> final_profile;
  std::int64_t steps = 0;
  double final_time = 0.0;
  double wall_time_ms = 0.0;
};

/// Largest stable step: cfl * dtheta^2 / (2 max_j D_j) with
/// D_j = (dF/dlambda_merid + (n-1) dF/dlambda_par) / rho_j^2.
double stable_dt(const MeridianProfile& p, const SpeedFunction& F, double cfl);

/// One classical 4-stage step of rho_t = -F sqrt(rho^2 + rho'^2) / rho.
/// Throws ConvexityLost when a stage leaves the positive cone.
MeridianProfile flow_step(const MeridianProfile& p, const SpeedFunction& F, double dt);

FlowTrace run_flow(const FlowConfig& config, const MeridianProfile& initial);

/// (r0^{1+beta} - (1+beta) F(1,...,1) t)^{1/(1+beta)} for F = sigma_k^alpha or S_k^alpha.
/// Throws DomainError at or past extinction.
double shrinking_sphere_oracle(const SpeedFunction& F, int n, double r0, double t);

/// Extinction time of the sphere of radius r0.
double extinction_time(const SpeedFunction& F, int n, double r0);

/// max principal curvature / min principal curvature - 1 over the grid.
double roundness(const MeridianProfile& p);

/// Largest relative deviation of recorded mean radii from the sphere oracle
/// over records with mean_radius >= r_floor.
double sphere_oracle_deviation(const FlowTrace& trace, const SpeedFunction& F, int n, double r0,
                               double r_floor);

std::string trace_csv(const FlowTrace& trace);
nlohmann::json summary_json(const FlowTrace& trace);

}  // namespace flowlab::flow
