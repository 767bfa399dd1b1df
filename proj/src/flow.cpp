#include "flowlab/flow.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#include "flowlab/io.hpp"

namespace flowlab::flow {

namespace {

using geom::CurvatureField;

std::array<double, kMaxDim> node_values(const CurvatureField& f, std::size_t j, int n) {
  std::array<double, kMaxDim> v{};
  v[0] = f.merid[j];
  for (int i = 1; i < n; ++i) v[static_cast<std::size_t>(i)] = f.par[j];
  return v;
}

CurvatureField checked_field(const MeridianProfile& p, int stage) {
  CurvatureField f;
  try {
    f = geom::curvature_field(p);
  } catch (const NumericError& e) {
    throw ConvexityLost(-1, 0.0, stage, e.what());
  }
  const int bad = f.first_nonconvex();
  if (bad >= 0) {
    const auto b = static_cast<std::size_t>(bad);
    throw ConvexityLost(bad, p.theta(bad), stage,
                        "meridian curvature " + io::format_g17(f.merid[b]) + ", parallel curvature " +
                            io::format_g17(f.par[b]));
  }
  return f;
}

// d rho / dt at every node
std::vector<double> velocity(const MeridianProfile& p, const SpeedFunction& F, int stage) {
  const CurvatureField f = checked_field(p, stage);
  const int n = p.n();
  std::vector<double> v(p.rho().size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto lam = node_values(f, j, n);
    const double Fv = F.value(std::span<const double>(lam.data(), static_cast<std::size_t>(n)));
    v[j] = -Fv * p.rho()[j] / f.support[j];
  }
  return v;
}

MeridianProfile advance(const MeridianProfile& p, const std::vector<double>& k, double h, int stage) {
  std::vector<double> r = p.rho();
  for (std::size_t j = 0; j < r.size(); ++j) {
    r[j] += h * k[j];
    if (!(r[j] > 0.0) || !std::isfinite(r[j])) {
      const int node = static_cast<int>(j);
      throw ConvexityLost(node, p.theta(node), stage, "radius " + io::format_g17(r[j]));
    }
  }
  return MeridianProfile(p.n(), std::move(r));
}

FlowRecord observe(const MeridianProfile& p, const FlowConfig& c, double t, std::int64_t step) {
  FlowRecord r;
  r.t = t;
  r.step = step;
  r.mean_radius = geom::weighted_mean_radius(p);
  const CurvatureField f = geom::curvature_field(p);
  r.min_curvature = f.min_curvature();
  r.roundness = f.max_curvature() / r.min_curvature - 1.0;
  r.selfsim_residual_max = geom::selfsim_residual(p, c.F, c.C_shift).max_abs;
  const geom::Diagnostics d = geom::diagnostics(p, c.F);
  r.Z_min = d.Z_min();
  r.Z_max = d.Z_max();
  r.W_min = d.W_min();
  r.W_max = d.W_max();
  return r;
}

double sphere_speed_at_one(const SpeedFunction& F, int n) {
  if (!F.as_sigma_power() && !F.as_power_sum_power()) {
    throw ArgumentError("sphere oracle needs F = sigma_k^alpha or S_k^alpha, got '" + F.to_string() + "'");
  }
  return F.value(symfun::CurvatureVector::constant(n, 1.0));
}

}  // namespace

ConvexityLost::ConvexityLost(int node, double theta, int stage, const std::string& detail)
    : DomainError("convexity lost at node " + std::to_string(node) + " (theta=" + io::format_g17(theta) +
                  ", stage " + std::to_string(stage) + "): " + detail),
      node_(node),
      theta_(theta),
      stage_(stage) {}

std::string to_string(Mode m) { return m == Mode::Raw ? "Raw" : "Normalized"; }

std::string to_string(Status s) {
  switch (s) {
    case Status::Converged:
      return "Converged";
    case Status::Shrunk:
      return "Shrunk";
    case Status::StepLimit:
      return "StepLimit";
    case Status::ConvexityLost:
      return "ConvexityLost";
  }
  return "Unknown";
}

void FlowConfig::validate() const {
  if (n < 2 || n > kMaxDim) throw ArgumentError("n must be in [2, " + std::to_string(kMaxDim) + "]");
  if (N < 16) throw ArgumentError("N must be >= 16, got " + std::to_string(N));
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ArgumentError("cfl must be in (0, 1]");
  if (stop.empty()) throw ArgumentError("stop criteria must not be empty");
  if (stop.max_steps && *stop.max_steps < 0) throw ArgumentError("stop.max_steps must be >= 0");
  if (stop.max_time && !(*stop.max_time > 0.0)) throw ArgumentError("stop.max_time must be positive");
  if (stop.roundness_tol && !(*stop.roundness_tol > 0.0)) throw ArgumentError("stop.roundness_tol must be positive");
  if (stop.min_mean_radius && !(*stop.min_mean_radius > 0.0)) {
    throw ArgumentError("stop.min_mean_radius must be positive");
  }
  if (record_every < 1) throw ArgumentError("record_every must be >= 1");
  if (!(F.beta() > 0.0)) throw ArgumentError("flow speed must have positive degree");
  if (!std::isfinite(C_shift)) throw ArgumentError("C_shift must be finite");
}

double stable_dt(const MeridianProfile& p, const SpeedFunction& F, double cfl) {
  const CurvatureField f = checked_field(p, 0);
  const int n = p.n();
  double dmax = 0.0;
  for (std::size_t j = 0; j < p.rho().size(); ++j) {
    const auto lam = node_values(f, j, n);
    const auto [Fv, g] = F.value_gradient(std::span<const double>(lam.data(), static_cast<std::size_t>(n)));
    const double r = p.rho()[j];
    dmax = std::max(dmax, (std::abs(g[0]) + (n - 1) * std::abs(g[1])) / (r * r));
  }
  if (!(dmax > 0.0) || !std::isfinite(dmax)) throw NumericError("diffusion estimate is not positive");
  const double h = p.dtheta();
  return cfl * 0.5 * h * h / dmax;
}

MeridianProfile flow_step(const MeridianProfile& p, const SpeedFunction& F, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("dt must be positive");
  const auto k1 = velocity(p, F, 1);
  const auto k2 = velocity(advance(p, k1, 0.5 * dt, 2), F, 2);
  const auto k3 = velocity(advance(p, k2, 0.5 * dt, 3), F, 3);
  const auto k4 = velocity(advance(p, k3, dt, 4), F, 4);
  std::vector<double> k(k1.size());
  for (std::size_t j = 0; j < k.size(); ++j) k[j] = (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) / 6.0;
  MeridianProfile out = advance(p, k, dt, 5);
  checked_field(out, 5);
  return out;
}

FlowTrace run_flow(const FlowConfig& config, const MeridianProfile& initial) {
  config.validate();
  if (initial.n() != config.n) throw ArgumentError("initial profile dimension differs from config n");
  const auto start = std::chrono::steady_clock::now();
  FlowTrace tr;
  auto finish = [&](Status s, std::string msg) {
    tr.status = s;
    tr.message = std::move(msg);
    tr.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return tr;
  };

  const StopCriteria& stop = config.stop;
  MeridianProfile p = initial;
  double t = 0.0;
  std::int64_t step = 0;
  double r_star = 0.0;
  try {
    checked_field(p, 0);
    if (config.mode == Mode::Normalized) {
      r_star = geom::stationary_sphere_radius(config.F, 0.0, config.n);
      p = p.scaled(r_star / geom::weighted_mean_radius(p));
    }
  } catch (const ConvexityLost& e) {
    tr.failed_node = e.node();
    tr.final_profile = p;
    return finish(Status::ConvexityLost, e.what());
  }

  tr.records.push_back(observe(p, config, t, step));
  std::int64_t last_recorded = 0;
  auto record_final = [&] {
    if (last_recorded != step || tr.records.empty()) tr.records.push_back(observe(p, config, t, step));
    tr.final_profile = p;
    tr.steps = step;
    tr.final_time = t;
  };

  while (true) {
    if (stop.roundness_tol && roundness(p) < *stop.roundness_tol) {
      record_final();
      return finish(Status::Converged, "roundness below tolerance");
    }
    if (stop.min_mean_radius && geom::weighted_mean_radius(p) < *stop.min_mean_radius) {
      record_final();
      return finish(Status::Shrunk, "mean radius below threshold");
    }
    if (stop.max_steps && step >= *stop.max_steps) {
      record_final();
      return finish(Status::StepLimit, "step limit reached");
    }
    if (stop.max_time && t >= *stop.max_time) {
      record_final();
      return finish(Status::StepLimit, "time limit reached");
    }
    try {
      double dt = stable_dt(p, config.F, config.cfl);
      if (stop.max_time) dt = std::min(dt, *stop.max_time - t);
      p = flow_step(p, config.F, dt);
      if (config.mode == Mode::Normalized) p = p.scaled(r_star / geom::weighted_mean_radius(p));
      t += dt;
      ++step;
    } catch (const ConvexityLost& e) {
      tr.failed_node = e.node();
      record_final();
      return finish(Status::ConvexityLost, e.what());
    }
    if (step % config.record_every == 0) {
      tr.records.push_back(observe(p, config, t, step));
      last_recorded = step;
    }
  }
}

double extinction_time(const SpeedFunction& F, int n, double r0) {
  const double F1 = sphere_speed_at_one(F, n);
  const double b = F.beta();
  return std::pow(r0, 1.0 + b) / ((1.0 + b) * F1);
}

double shrinking_sphere_oracle(const SpeedFunction& F, int n, double r0, double t) {
  if (!(r0 > 0.0)) throw ArgumentError("initial radius must be positive");
  const double F1 = sphere_speed_at_one(F, n);
  const double b = F.beta();
  const double base = std::pow(r0, 1.0 + b) - (1.0 + b) * F1 * t;
  if (!(base > 0.0)) throw DomainError("sphere oracle evaluated at or past the extinction time");
  return std::pow(base, 1.0 / (1.0 + b));
}

double roundness(const MeridianProfile& p) {
  const CurvatureField f = geom::curvature_field(p);
  return f.max_curvature() / f.min_curvature() - 1.0;
}

double sphere_oracle_deviation(const FlowTrace& trace, const SpeedFunction& F, int n, double r0,
                               double r_floor) {
  double worst = 0.0;
  for (const FlowRecord& r : trace.records) {
    if (r.mean_radius < r_floor) continue;
    const double o = shrinking_sphere_oracle(F, n, r0, r.t);
    worst = std::max(worst, std::abs(r.mean_radius - o) / o);
  }
  return worst;
}

std::string trace_csv(const FlowTrace& trace) {
  std::string out =
      "t,step,mean_radius,roundness,selfsim_residual_max,Z_min,Z_max,W_min,W_max,min_curvature\n";
  for (const FlowRecord& r : trace.records) {
    out += io::format_g17(r.t) + "," + std::to_string(r.step) + "," + io::format_g17(r.mean_radius) + "," +
           io::format_g17(r.roundness) + "," + io::format_g17(r.selfsim_residual_max) + "," +
           io::format_g17(r.Z_min) + "," + io::format_g17(r.Z_max) + "," + io::format_g17(r.W_min) + "," +
           io::format_g17(r.W_max) + "," + io::format_g17(r.min_curvature) + "\n";
  }
  return out;
}

nlohmann::json summary_json(const FlowTrace& trace) {
  nlohmann::json j;
  j["status"] = to_string(trace.status);
  j["steps"] = trace.steps;
  j["final_time"] = trace.final_time;
  const bool have = !trace.records.empty();
  j["final_roundness"] = have ? nlohmann::json(trace.records.back().roundness) : nlohmann::json(nullptr);
  j["final_residual"] =
      have ? nlohmann::json(trace.records.back().selfsim_residual_max) : nlohmann::json(nullptr);
  j["final_mean_radius"] = have ? nlohmann::json(trace.records.back().mean_radius) : nlohmann::json(nullptr);
  j["message"] = trace.message;
  j["failed_node"] = trace.failed_node ? nlohmann::json(*trace.failed_node) : nlohmann::json(nullptr);
  j["wall_time_ms"] = trace.wall_time_ms;
  return j;
}

}  // namespace flowlab::flow
