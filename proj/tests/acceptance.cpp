// Acceptance checks AC1..AC11. One PASS/FAIL line per criterion; exit status 1
// if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "flowlab/campaign.hpp"
#include "flowlab/errors.hpp"
#include "flowlab/flow.hpp"
#include "flowlab/geom.hpp"
#include "flowlab/lemma_lab.hpp"
#include "flowlab/rng.hpp"
#include "flowlab/symfun.hpp"
#include "oracles.hpp"

using namespace flowlab;
using symfun::CurvatureVector;
using symfun::SpeedFunction;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Runs a whole default sweep and folds it into an outcome.
lab::SuiteReport sweep(Outcome& o, const std::string& id, std::int64_t samples, std::uint64_t seed) {
  const auto s = lab::run_suite(id, lab::default_sweep(id), samples, seed);
  if (s.violations() > 0) {
    for (const auto& c : s.configurations)
      if (c.violations > 0)
        o.require(false, id + " " + lab::to_json(c.params).dump() + " violations=" + std::to_string(c.violations));
  }
  return s;
}

double worst(const lab::SuiteReport& s) {
  double w = 0;
  bool first = true;
  for (const auto& c : s.configurations) {
    if (first || c.worst_margin < w) w = c.worst_margin;
    first = false;
  }
  return w;
}

Outcome ac1() {
  Outcome o;
  Clock clk;
  CounterRng r(101, 0);
  double id_worst = 0, euler_worst = 0, grad_worst = 0, hess_worst = 0, enum_worst = 0;
  for (int s = 0; s < 1000; ++s) {
    const int n = r.integer(2, 8);
    const CurvatureVector l(oracle::log_uniform_vector(r, n));
    const std::vector<double> v(l.span().begin(), l.span().end());
    for (int k = 0; k <= n; ++k) {
      id_worst = std::max(id_worst, symfun::sigma_identity_residuals(l, k).max_relative());
      const double e = oracle::sigma_enum(v, k);
      enum_worst = std::max(enum_worst, std::abs(symfun::sigma(l, k) - e) / e);
    }
  }
  const std::vector<std::string> exprs = {"sigma(1)", "sigma(2)", "sigma(2)^0.5", "sigma(3)^(1/3)", "S(2)^0.5",
                                          "S(3)^2",   "sigma(2)*sigma(3)", "sigma(4)^0.25", "S(4)^(1/4)"};
  for (int s = 0; s < 1000; ++s) {
    const auto F = SpeedFunction::parse(exprs[static_cast<std::size_t>(s) % exprs.size()]);
    const int n = r.integer(std::max(2, F.max_order()), 8);
    const auto v = oracle::log_uniform_vector(r, n);
    const CurvatureVector l(v);
    const auto b = symfun::eval_bundle(F, l);
    euler_worst = std::max(euler_worst, std::abs(symfun::euler_residual(F, l)) / std::abs(F.beta() * b.value));
    // finite differences in ascending order so indices match the bundle
    const std::vector<double> sorted(l.span().begin(), l.span().end());
    const oracle::Fn f = [&](const std::vector<double>& x) { return F.value(std::span<const double>(x)); };
    const auto g = oracle::fd_gradient(f, sorted);
    const auto H = oracle::fd_hessian(f, sorted);
    // errors relative to F/lambda_min and F/lambda_min^2
    const double gs = std::abs(b.value) / l.min(), hs = gs / l.min();
    double ge = 0, he = 0;
    for (int i = 0; i < n; ++i) {
      ge = std::max(ge, std::abs(b.gradient[i] - g[static_cast<std::size_t>(i)]));
      for (int j = 0; j < n; ++j) he = std::max(he, std::abs(b.hessian(i, j) - H(i, j)));
    }
    grad_worst = std::max(grad_worst, ge / gs);
    hess_worst = std::max(hess_worst, he / hs);
  }
  const double t = clk.seconds();
  o.require(id_worst <= 1e-12, "identity rel " + fmt("%.3g", id_worst));
  o.require(enum_worst <= 1e-12, "sigma vs enumeration " + fmt("%.3g", enum_worst));
  o.require(euler_worst <= 1e-12, "euler rel " + fmt("%.3g", euler_worst));
  o.require(grad_worst <= 1e-6, "fd gradient rel " + fmt("%.3g", grad_worst));
  o.require(hess_worst <= 1e-6, "fd hessian rel " + fmt("%.3g", hess_worst));
  o.require(t < 10, "runtime " + fmt("%.1f s", t));
  if (o.ok)
    o.detail = "identities " + fmt("%.2g", id_worst) + ", euler " + fmt("%.2g", euler_worst) + ", fd grad " +
               fmt("%.2g", grad_worst) + ", fd hess " + fmt("%.2g", hess_worst) + ", " + fmt("%.1f s", t);
  return o;
}

Outcome ac2() {
  Outcome o;
  Clock clk;
  const auto d = sweep(o, "Dmk", 10000, 2);
  const auto a = sweep(o, "ak", 10000, 2);
  const double t = clk.seconds();
  o.require(t < 60, "runtime " + fmt("%.1f s", t));
  if (o.ok)
    o.detail = std::to_string(d.samples() + a.samples()) + " samples, worst normalized min eigenvalue " +
               fmt("%.2g", std::min(worst(d), worst(a))) + ", " + fmt("%.1f s", t);
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto s = sweep(o, "det-identity", 10000, 3);
  if (o.ok) o.detail = std::to_string(s.samples()) + " samples, worst margin " + fmt("%.2g", worst(s));
  return o;
}

Outcome ac4() {
  Outcome o;
  Clock clk;
  const auto s = sweep(o, "key-inequality", 100000, 4);
  const double t = clk.seconds();
  // radial direction y = c lambda
  CounterRng r(104, 0);
  double radial = 0;
  for (int i = 0; i < 2000; ++i) {
    const int n = r.integer(2, 6);
    const int k = r.integer(1, n);
    const double alphas[] = {1.0 / k, 0.5, 1.0, 2.0};
    const double alpha = alphas[r.integer(0, 3)];
    const auto F = r.uniform() < 0.5 ? SpeedFunction::sigma_power(k, alpha) : SpeedFunction::power_sum_power(k, alpha);
    const CurvatureVector l(oracle::log_uniform_vector(r, n));
    const double c = r.uniform(-3, 3);
    std::vector<double> y(l.span().begin(), l.span().end());
    for (double& v : y) v *= c;
    radial = std::max(radial, std::abs(lab::key_inequality_margin(F, l, y)) / lab::key_inequality_scale(l, y));
  }
  o.require(radial <= 1e-12, "radial case " + fmt("%.3g", radial));
  o.require(t < 120, "runtime " + fmt("%.1f s", t));
  if (o.ok)
    o.detail = std::to_string(s.configurations.size()) + " configurations, " + std::to_string(s.samples()) +
               " samples, worst " + fmt("%.2g", worst(s)) + ", radial " + fmt("%.2g", radial) + ", " +
               fmt("%.1f s", t);
  return o;
}

Outcome ac5() {
  Outcome o;
  const auto s = sweep(o, "rigidity", 100000, 5);
  // constant lambda: J1 = L1 = 0
  CounterRng r(105, 0);
  double zero = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = r.integer(2, 6);
    const int k = r.integer(1, n);
    const auto F = SpeedFunction::sigma_power(k, r.uniform(1.0 / k, 2.0));
    const auto t = lab::rigidity_terms(F, CurvatureVector::constant(n, r.log_uniform(1e-2, 1e2)), -r.uniform(0, 2));
    zero = std::max({zero, std::abs(t.J1) / std::max(t.J1_scale, 1e-300), std::abs(t.L1) / std::max(t.L1_scale, 1e-300)});
  }
  o.require(zero <= 1e-12, "constant-lambda terms " + fmt("%.3g", zero));
  if (o.ok)
    o.detail = std::to_string(s.configurations.size()) + " configurations, " + std::to_string(s.samples()) +
               " samples, worst " + fmt("%.2g", worst(s)) + ", constant-lambda " + fmt("%.2g", zero);
  return o;
}

Outcome ac6() {
  Outcome o;
  const auto s = sweep(o, "condmin", 10000, 6);
  const double t[] = {2, 2};
  const double v = lab::condmin_value(t, 0, 0.5, 1.0);
  o.require(std::abs(v + 0.25) <= 1e-15, "worked example " + fmt("%.17g", v));
  if (o.ok)
    o.detail = std::to_string(s.samples()) + " samples, worst " + fmt("%.2g", worst(s)) + ", example " + fmt("%.17g", v);
  return o;
}

Outcome ac7() {
  Outcome o;
  double min_g = 0;
  std::int64_t points = 0;
  double boundary = 0;
  for (int n = 3; n <= 6; ++n)
    for (int k = 2; k <= n - 1; ++k) {
      const auto [lo, hi] = lab::thm63_alpha_interval(n, k);
      for (int a = 0; a <= 400; ++a) {
        const double alpha = lo + (hi - lo) * a / 400.0;
        for (int i = 0; i <= 4000; ++i) {
          const double t = 1.0 + 99.0 * i / 4000.0;
          const double g = lab::thm63_factor_margin(t, alpha, n, k);
          min_g = std::min(min_g, g);
          ++points;
        }
      }
      boundary = std::max(boundary, std::abs(lab::thm63_factor_margin(1.0, 0.5, n, k)));
    }
  o.require(min_g >= -1e-12, "min g " + fmt("%.3g", min_g));
  o.require(boundary == 0.0, "g(1, 1/2) = " + fmt("%.3g", boundary));
  const auto s = sweep(o, "thm63", 10000, 7);
  if (o.ok)
    o.detail = std::to_string(points) + " grid points, min g " + fmt("%.2g", min_g) + ", g(1,1/2) = 0, campaign " +
               std::to_string(s.samples()) + " samples";
  return o;
}

Outcome sphere_flow(Outcome& o, const SpeedFunction& F, const std::string& name) {
  flow::FlowConfig c;
  c.F = F;
  c.n = 2;
  c.N = 200;
  c.cfl = 0.5;
  c.stop.min_mean_radius = 0.2;
  c.record_every = 50;
  const auto tr = flow::run_flow(c, geom::make_shape(geom::Shape::sphere(2), 2, 200));
  const double dev = flow::sphere_oracle_deviation(tr, F, 2, 2.0, 0.2);
  const double secs = tr.wall_time_ms / 1000;
  o.require(tr.status == flow::Status::Shrunk, name + " status " + flow::to_string(tr.status));
  o.require(dev <= 1e-6, name + " deviation " + fmt("%.3g", dev));
  o.require(secs < 10, name + " runtime " + fmt("%.1f s", secs));
  o.detail += (o.detail.empty() ? "" : ", ") + name + " dev " + fmt("%.2g", dev) + " in " + fmt("%.1f s", secs);
  return o;
}

Outcome ac8() {
  Outcome o;
  sphere_flow(o, SpeedFunction::sigma_power(1, 1), "sigma1");
  sphere_flow(o, SpeedFunction::sigma_power(2, 1), "sigma2");
  // closed forms of the two oracles
  o.require(std::abs(flow::shrinking_sphere_oracle(SpeedFunction::sigma_power(1, 1), 2, 2, 0.75) - 1.0) <= 1e-15,
            "sigma1 oracle");
  o.require(std::abs(flow::shrinking_sphere_oracle(SpeedFunction::sigma_power(2, 1), 2, 2, 1.0) - std::cbrt(5.0)) <=
                1e-15,
            "sigma2 oracle");
  return o;
}

Outcome ac9() {
  Outcome o;
  struct Triple {
    int n, k;
    double alpha;
  };
  const std::vector<Triple> triples = {{2, 1, 1},   {2, 1, 2},       {2, 2, 0.5},     {2, 2, 1},     {3, 1, 1},
                                       {3, 2, 0.5}, {3, 2, 1},       {3, 3, 1.0 / 3}, {3, 3, 1},     {4, 1, 0.5},
                                       {4, 2, 1},   {4, 3, 1.0 / 3}, {4, 4, 0.25},    {4, 2, 2},     {5, 2, 0.5},
                                       {5, 3, 1},   {5, 5, 0.2},     {6, 3, 1.0 / 3}, {6, 4, 0.5},   {6, 6, 1}};
  double res = 0, rstar = 0, id = 0;
  for (const auto& t : triples) {
    const auto F = SpeedFunction::sigma_power(t.k, t.alpha);
    const double r = geom::stationary_sphere_radius(F, 0, t.n);
    const double expect = std::pow(oracle::binomial(t.n, t.k), t.alpha / (1 + t.k * t.alpha));
    rstar = std::max(rstar, std::abs(r - expect) / expect);
    res = std::max(res, geom::selfsim_residual(geom::make_shape(geom::Shape::sphere(r), t.n, 200), F, 0).max_abs);
    for (double C : {0.0, -0.1}) {
      const auto s = geom::sphere_identity_residuals(F, C, t.n);
      const auto p = geom::sphere_identity_residuals(SpeedFunction::power_sum_power(t.k, t.alpha), C, t.n);
      id = std::max({id, s.rel1(), s.rel5(), p.rel1(), p.rel5()});
    }
  }
  o.require(triples.size() == 20, "triple count");
  o.require(res <= 1e-10, "selfsim residual " + fmt("%.3g", res));
  o.require(rstar <= 1e-12, "r* vs closed form " + fmt("%.3g", rstar));
  o.require(id <= 1e-11, "identity residuals " + fmt("%.3g", id));
  if (o.ok)
    o.detail = "20 triples, residual " + fmt("%.2g", res) + ", r* rel " + fmt("%.2g", rstar) + ", identities " +
               fmt("%.2g", id);
  return o;
}

Outcome ac10() {
  Outcome o;
  struct Case {
    std::string name;
    int n;
    SpeedFunction F;
  };
  const std::vector<Case> cases = {{"n2 sigma1", 2, SpeedFunction::sigma_power(1, 1)},
                                   {"n3 sigma2^1/2", 3, SpeedFunction::sigma_power(2, 0.5)},
                                   {"n3 sigma2", 3, SpeedFunction::sigma_power(2, 1)},
                                   {"n4 sigma3^1/3", 4, SpeedFunction::sigma_power(3, 1.0 / 3)},
                                   {"n3 S2^1/2", 3, SpeedFunction::power_sum_power(2, 0.5)}};
  for (const auto& c : cases) {
    flow::FlowConfig cfg;
    cfg.F = c.F;
    cfg.n = c.n;
    cfg.N = 200;
    cfg.cfl = 1.0;
    cfg.mode = flow::Mode::Normalized;
    cfg.stop.roundness_tol = 1e-5;
    cfg.stop.max_steps = 2000000;
    cfg.record_every = 1000;
    const auto tr = flow::run_flow(cfg, geom::make_shape(geom::Shape::ellipsoid(1, 1.5), c.n, 200));
    const auto& last = tr.records.back();
    const double r = geom::stationary_sphere_radius(c.F, 0, c.n);
    const double beta = c.F.beta();
    const double Zs = c.n * r * r * (beta + 1) / (2 * beta);
    const double zmid = 0.5 * (last.Z_max + last.Z_min);
    const double spread = (last.Z_max - last.Z_min) / std::abs(zmid);
    const double zerr = std::abs(zmid - Zs) / Zs;
    const double secs = tr.wall_time_ms / 1000;
    o.require(tr.status == flow::Status::Converged, c.name + " status " + flow::to_string(tr.status));
    o.require(last.roundness < 1e-3, c.name + " roundness " + fmt("%.3g", last.roundness));
    o.require(spread <= 1e-4, c.name + " Z spread " + fmt("%.3g", spread));
    o.require(zerr <= 1e-3, c.name + " Z vs stationary " + fmt("%.3g", zerr));
    o.require(secs < 60, c.name + " runtime " + fmt("%.1f s", secs));
    if (o.ok)
      o.detail += (o.detail.empty() ? "" : "; ") + c.name + ": roundness " + fmt("%.1e", last.roundness) +
                  ", Z spread " + fmt("%.1e", spread) + ", " + fmt("%.1f s", secs);
  }
  return o;
}

Outcome ac11() {
  Outcome o;
  lab::CampaignParams p;
  p.n = 2;
  p.F = "1*sigma(1)^2 - 3*sigma(2)";
  const auto rep = lab::run_campaign("condition", p, 1000, 1);
  o.require(rep.violations > 0, "condition checker did not flag the signed combination");
  o.require(rep.worst_sample.contains("lambda"), "no counterexample recorded");

  std::vector<double> rho(201, 1.0);
  for (int j = 95; j <= 105; ++j) rho[static_cast<std::size_t>(j)] = 0.98;
  flow::FlowConfig c;
  c.n = 2;
  c.N = 200;
  c.stop.max_steps = 1000;
  const auto tr = flow::run_flow(c, geom::MeridianProfile(2, rho));
  o.require(tr.status == flow::Status::ConvexityLost, "dented profile status " + flow::to_string(tr.status));
  o.require(tr.failed_node.has_value(), "no failing node reported");
  o.require(tr.steps == 0, "flow continued past the failure");
  if (o.ok)
    o.detail = std::to_string(rep.violations) + "/1000 condition violations, counterexample lambda=" +
               rep.worst_sample["lambda"].dump() + "; dented profile stopped at node " +
               std::to_string(*tr.failed_node) + " with ConvexityLost";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 algebra", ac1},           {"AC2 psd", ac2},           {"AC3 det-identity", ac3},
      {"AC4 key-inequality", ac4},    {"AC5 rigidity", ac5},      {"AC6 condmin", ac6},
      {"AC7 thm63 factor", ac7},      {"AC8 shrinking sphere", ac8}, {"AC9 stationary sphere", ac9},
      {"AC10 sphere convergence", ac10}, {"AC11 negative controls", ac11}};
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %s: %s\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
