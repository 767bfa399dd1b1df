#include "flowlab/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <thread>

#include <Eigen/Dense>

#include "flowlab/errors.hpp"
#include "flowlab/lemma_lab.hpp"
#include "flowlab/rng.hpp"
#include "flowlab/symfun.hpp"

#ifndef FLOWLAB_VERSION
#define FLOWLAB_VERSION "0.0.0"
#endif

namespace flowlab::lab {

namespace {

using nlohmann::json;
using symfun::eval_bundle;

constexpr double kLambdaLo = 1e-3;
constexpr double kLambdaHi = 1e3;
constexpr double kClusterFraction = 0.1;
constexpr double kClusterWidth = 1e-10;

struct Outcome {
  double margin = 0.0;
  bool violated = false;
};

struct Context {
  CampaignParams params;
  std::optional<SpeedFunction> F;
  double beta = 0.0;
};

json vec_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

// ---- samplers -------------------------------------------------------------

std::vector<double> draw_lambda(CounterRng& r, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = r.log_uniform(kLambdaLo, kLambdaHi);
  if (r.uniform() < kClusterFraction) {
    const int mode = r.integer(0, 2);
    if (mode == 2) {
      const double c = v[0];
      for (double& x : v) x = c * (1.0 + kClusterWidth * r.uniform(-1.0, 1.0));
    } else {
      const int i = r.integer(0, n - 1);
      int j = r.integer(0, n - 2);
      if (j >= i) ++j;
      v[static_cast<std::size_t>(j)] =
          mode == 0 ? v[static_cast<std::size_t>(i)] * (1.0 + kClusterWidth * r.uniform(-1.0, 1.0))
                    : v[static_cast<std::size_t>(i)];
    }
  }
  return v;
}

// Direction with a mix of isotropic, curvature-weighted and near-radial draws.
// `radial` is set when the draw is an exact multiple of lambda.
std::vector<double> draw_direction(CounterRng& r, const CurvatureVector& lam, bool& radial) {
  const int n = lam.size();
  std::vector<double> y(static_cast<std::size_t>(n));
  const double u = r.uniform();
  radial = false;
  if (u < 0.3) {
    for (double& x : y) x = r.normal();
  } else if (u < 0.6) {
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = lam[i] * r.normal();
  } else if (u < 0.9) {
    const double c = r.uniform(-2.0, 2.0);
    const double eps = std::pow(10.0, r.uniform(-8.0, -1.0));
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = lam[i] * (c + eps * r.normal());
  } else {
    const double c = r.uniform(-2.0, 2.0);
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = c * lam[i];
    radial = true;
  }
  return y;
}

double ratio(double margin, double scale) { return scale > 0.0 ? margin / scale : margin; }

// ---- lemma evaluators -----------------------------------------------------

Outcome eval_sigprop(const Context& c, CounterRng& r, json* d) {
  const CurvatureVector lam(draw_lambda(r, c.params.n));
  const auto res = symfun::sigma_identity_residuals(lam, c.params.k);
  const double worst = res.max_relative();
  if (d) *d = {{"lambda", vec_json(lam.span())}, {"k", c.params.k}, {"max_relative", worst}};
  return {-worst, !(worst <= 1e-12)};
}

Outcome eval_psd(const SymmetricMatrix& M, double scale, double tol, json* d) {
  const double margin = ratio(psd_margin(M), scale);
  if (d) (*d)["min_eigenvalue_normalized"] = margin;
  return {margin, !(margin >= -tol)};
}

Outcome eval_dmk(const Context& c, CounterRng& r, json* d) {
  const CurvatureVector lam(draw_lambda(r, c.params.n));
  if (d) *d = {{"lambda", vec_json(lam.span())}, {"k", c.params.k}};
  const SymmetricMatrix D = build_D(lam, c.params.k, lam.size());
  return eval_psd(D, D.frobenius_norm(), 1e-10, d);
}

Outcome eval_ak(const Context& c, CounterRng& r, json* d) {
  const CurvatureVector lam(draw_lambda(r, c.params.n));
  if (d) *d = {{"lambda", vec_json(lam.span())}, {"k", c.params.k}};
  return eval_psd(build_ak_matrix(lam, c.params.k), ak_term_scale(lam, c.params.k), 1e-10, d);
}

Outcome eval_det(const Context& c, CounterRng& r, json* d) {
  const CurvatureVector lam(draw_lambda(r, c.params.n));
  const int m = r.integer(1, c.params.n);
  const DetIdentity id = det_identity(lam, c.params.k, m);
  const double rel = id.relative();
  if (d) {
    *d = {{"lambda", vec_json(lam.span())}, {"k", c.params.k}, {"m", m},
          {"lhs", id.lhs}, {"rhs", id.rhs}, {"relative", rel}};
  }
  return {-rel, !(rel <= 1e-8)};
}

Outcome eval_key(const Context& c, CounterRng& r, json* d) {
  const CurvatureVector lam(draw_lambda(r, c.params.n));
  bool radial = false;
  const std::vector<double> y = draw_direction(r, lam, radial);
  const double raw = key_inequality_margin(*c.F, lam, y);
  const double scale = key_inequality_scale(lam, y);
  const double margin = ratio(raw, scale);
  bool bad = !(margin >= -1e-12);
  if (radial) bad = bad || !(std::abs(margin) <= 1e-10);
  std::optional<double> alt;
  if (auto sp = c.F->as_sigma_power()) {
    alt = sp->second * sigma_quadratic_form(lam, sp->first, y);
    bad = bad || !(std::abs(*alt - raw) <= 1e-10 * scale);
  }
  if (d) {
    *d = {{"lambda", vec_json(lam.span())}, {"y", vec_json(y)}, {"radial", radial},
          {"margin", raw}, {"scale", scale}};
    if (alt) (*d)["quadratic_form_path"] = *alt;
  }
  return {margin, bad};
}

Outcome eval_condition(const Context& c, CounterRng& r, json* d) {
  const CurvatureVector lam(draw_lambda(r, c.params.n));
  bool radial = false;
  const std::vector<double> y = draw_direction(r, lam, radial);
  const ConditionMargins cm = condition_margins(*c.F, lam, y);
  const auto [value, grad] = c.F->value_gradient(lam.span());
  const double pos_scale = std::max(std::abs(value), grad.cwiseAbs().maxCoeff());
  const double m_pos = ratio(cm.positivity, pos_scale);
  const double m_quot = ratio(cm.quotient, cm.quotient_scale);
  double margin = std::min({m_pos, m_quot, -cm.scaling_residual});
  bool bad = !(cm.positivity > 0.0) || !(m_quot >= -1e-12) || !(cm.scaling_residual <= 1e-12);
  std::optional<double> m_key;
  if (cm.key) {
    m_key = ratio(*cm.key, cm.key_scale);
    margin = std::min(margin, *m_key);
    bad = bad || !(*m_key >= -1e-12);
  }
  if (d) {
    *d = {{"lambda", vec_json(lam.span())}, {"y", vec_json(y)},
          {"positivity", cm.positivity},  {"quotient", cm.quotient},
          {"scaling_residual", cm.scaling_residual}};
    (*d)["key"] = cm.key ? json(*cm.key) : json(nullptr);
  }
  return {margin, bad};
}

Outcome eval_lamij(const Context& c, CounterRng& r, json* d) {
  const int n = c.params.n;
  std::vector<double> v = draw_lambda(r, n);
  std::sort(v.begin(), v.end());
  // Push the smallest entry strictly below the rest.
  v[0] = v[1] * r.uniform(0.01, 0.99);
  int j = r.integer(1, n - 2);
  int i = r.integer(j + 1, n - 1);
  if (r.uniform() < kClusterFraction) {
    i = j + 1;
    const double base = v[static_cast<std::size_t>(j)];
    v[static_cast<std::size_t>(i)] =
        r.uniform() < 0.5 ? base : base * (1.0 + kClusterWidth * r.uniform(0.0, 1.0));
  }
  const CurvatureVector lam(v);
  const double raw = lamij_margin(*c.F, lam, i, j);
  const auto [value, grad] = c.F->value_gradient(lam.span());
  const double scale = (std::abs(grad[i]) + std::abs(grad[j])) / (lam[j] - lam[0]);
  if (d) {
    *d = {{"lambda", vec_json(lam.span())}, {"i", i}, {"j", j}, {"margin", raw}, {"scale", scale}};
  }
  return {ratio(raw, scale), !(raw > 0.0)};
}

bool strict_L1_regime(const Context& c, double C) {
  const double a = c.params.alpha;
  const int k = c.params.k;
  const bool above = a > 1.0 / k + 1e-12;
  if (c.params.F) return false;
  if (c.params.family == Family::PowerSum) return above || C < 0.0;
  if (k <= c.params.n - 1) return above || C < 0.0;
  return C < 0.0;
}

Outcome eval_rigidity(const Context& c, CounterRng& r, json* d) {
  const CurvatureVector lam(draw_lambda(r, c.params.n));
  double C;
  if (c.params.C) {
    C = *c.params.C;
  } else {
    C = r.uniform() < 1.0 / 3.0 ? 0.0 : -std::pow(10.0, r.uniform(-3.0, 3.0));
  }
  const RigidityTerms t = rigidity_terms(*c.F, lam, C);
  const double mj = ratio(t.J1, t.J1_scale);
  const double ml = ratio(t.L1, t.L1_scale);
  bool bad = !(mj >= -1e-12) || !(ml >= -1e-12);
  const bool nonconstant = lam.max() / lam.min() - 1.0 > 1e-4;
  if (nonconstant) {
    if (c.beta > 1.0 + 1e-12 || C < 0.0) bad = bad || !(t.J1 > 0.0);
    if (strict_L1_regime(c, C)) bad = bad || !(t.L1 > 0.0);
  }
  if (d) {
    *d = {{"lambda", vec_json(lam.span())}, {"C", C}, {"J1", t.J1}, {"L1", t.L1},
          {"J1_scale", t.J1_scale}, {"L1_scale", t.L1_scale}};
  }
  return {std::min(mj, ml), bad};
}

Outcome eval_cs(const Context& c, CounterRng& r, json* d) {
  const CurvatureVector lam(draw_lambda(r, c.params.n));
  bool radial = false;
  const std::vector<double> h = draw_direction(r, lam, radial);
  const double raw = cs_margin(*c.F, lam, h);
  const double scale = cs_scale(*c.F, lam, h);
  const double margin = ratio(raw, scale);
  bool bad = !(margin >= -1e-12);
  if (radial) bad = bad || !(std::abs(margin) <= 1e-10);
  if (d) {
    *d = {{"lambda", vec_json(lam.span())}, {"h", vec_json(h)}, {"radial", radial},
          {"margin", raw}, {"scale", scale}};
  }
  return {margin, bad};
}

// Constrained minimum by solving the bordered KKT system directly.
double condmin_kkt(std::span<const double> t, int m, double alpha) {
  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  for (int i = 0; i < n; ++i) {
    K(i, i) = 2.0 * t[static_cast<std::size_t>(i)];
    K(i, n) = 1.0;
    K(n, i) = 1.0;
  }
  rhs[m] = 4.0 * alpha;
  rhs[n] = 1.0;
  const Eigen::VectorXd sol = K.fullPivLu().solve(rhs);
  std::vector<double> y(sol.data(), sol.data() + n);
  return condmin_objective(t, m, alpha, y);
}

Outcome eval_condmin(const Context&, CounterRng& r, json* d) {
  const int dim = r.integer(1, 6);
  const double ktarget = r.uniform(0.5, 6.0);
  std::vector<double> w(static_cast<std::size_t>(dim));
  double wsum = 0.0;
  for (double& x : w) wsum += (x = r.log_uniform(1e-2, 1e2));
  std::vector<double> t(w.size());
  double k = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    t[i] = wsum / (ktarget * w[i]);
    k += 1.0 / t[i];
  }
  const int m = r.integer(0, dim - 1);
  const double alpha = r.uniform(-2.0, 2.0);
  const double closed = condmin_value(t, m, alpha, k);
  const double oracle = condmin_kkt(t, m, alpha);
  const double diff = std::abs(closed - oracle);
  if (d) {
    *d = {{"t", vec_json(t)}, {"m", m},          {"alpha", alpha},
          {"k", k},           {"closed", closed}, {"oracle", oracle}};
  }
  return {-diff, !(diff <= 1e-8)};
}

Outcome eval_thm63(const Context& c, CounterRng& r, json* d) {
  const int n = c.params.n;
  const int k = c.params.k;
  const auto [lo, hi] = thm63_alpha_interval(n, k);
  const double t = r.uniform() < 0.1 ? 1.0 : r.log_uniform(1.0, 100.0);
  const double u = r.uniform();
  const double alpha = u < 0.05 ? lo : (u < 0.1 ? hi : r.uniform(lo, hi));
  const double raw = thm63_factor_margin(t, alpha, n, k);
  const double scale = (2.0 * alpha / t + 1.0) *
                       (std::abs((2.0 / (k * t) - n - 1.0) * alpha) + (n - 1.0) / k);
  if (d) *d = {{"t", t}, {"alpha", alpha}, {"margin", raw}, {"scale", scale}};
  const double margin = ratio(raw, scale);
  return {margin, !(margin >= -1e-12)};
}

Outcome eval_sk_loghess(const Context& c, CounterRng& r, json* d) {
  const CurvatureVector lam(draw_lambda(r, c.params.n));
  bool radial = false;
  const std::vector<double> h = draw_direction(r, lam, radial);
  const double raw = sk_loghess_margin(lam, c.params.k, h);
  const double scale = sk_loghess_scale(lam, c.params.k, h);
  const double margin = ratio(raw, scale);
  bool bad = !(margin >= -1e-12);
  if (radial) bad = bad || !(std::abs(margin) <= 1e-10);
  if (d) {
    *d = {{"lambda", vec_json(lam.span())}, {"h", vec_json(h)}, {"radial", radial},
          {"margin", raw}, {"scale", scale}};
  }
  return {margin, bad};
}

using Evaluator = Outcome (*)(const Context&, CounterRng&, json*);

struct LemmaInfo {
  Evaluator eval;
  double tolerance;
  const char* scale;
  bool needs_F;
};

const std::map<std::string, LemmaInfo>& registry() {
  static const std::map<std::string, LemmaInfo> reg = {
      {"sigprop", {eval_sigprop, 1e-12, "max identity residual / sum of term magnitudes", false}},
      {"Dmk", {eval_dmk, 1e-10, "min eigenvalue of D_n^(k) / Frobenius norm", false}},
      {"ak", {eval_ak, 1e-10, "min eigenvalue of sigma_k A - xi xi^T / (||sigma_k A||_F + ||xi||^2)", false}},
      {"det-identity",
       {eval_det, 1e-8, "|det A~_m - sigma_k^(m-1) det D_m| / Hadamard bound", false}},
      {"key-inequality", {eval_key, 1e-12, "sum y_i^2 / min lambda_i^2", true}},
      {"condition",
       {eval_condition, 1e-12,
        "i) over max(|F|, max|F_i|); iii) over (|l_i F_i| + |l_j F_j|)/|l_i - l_j|; "
        "iv) over sum y_i^2 / min lambda_i^2; ii) relative homogeneity residual",
        true}},
      {"lamij", {eval_lamij, 0.0, "(|F_i| + |F_j|) / (lambda_j - lambda_1)", true}},
      {"rigidity", {eval_rigidity, 1e-12, "J1 and L1 over the sums of their term magnitudes", true}},
      {"cs", {eval_cs, 1e-12, "sum lambda_i^-1 |g_i| h_i^2 + (sum |g_i h_i|)^2 / |beta|", true}},
      {"condmin", {eval_condmin, 1e-8, "absolute difference from the KKT solve", false}},
      {"thm63",
       {eval_thm63, 1e-12, "(2 alpha/t + 1)(|(2/(k t) - n - 1) alpha| + (n-1)/k)", false}},
      {"sk-loghess",
       {eval_sk_loghess, 1e-12, "sum |H_ij h_i h_j| + (g.h)^2 / k with g, H of log S_k", false}},
  };
  return reg;
}

std::string family_name(Family f) { return f == Family::Sigma ? "sigma" : "power_sum"; }

std::string canonical(const std::string& id, const CampaignParams& p) {
  json j = to_json(p);
  j["lemma_id"] = id;
  return j.dump();
}

void validate(const std::string& id, const CampaignParams& p) {
  if (p.n < 2 || p.n > kMaxDim) {
    throw ArgumentError("n must be in [2, " + std::to_string(kMaxDim) + "], got " +
                        std::to_string(p.n));
  }
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) throw ArgumentError(id + ": " + what);
  };
  if (id == "sigprop") need(p.k >= 0 && p.k <= p.n, "k must be in [0, n]");
  if (id == "Dmk" || id == "ak" || id == "det-identity") need(p.k >= 1 && p.k <= p.n, "k must be in [1, n]");
  if (id == "lamij") need(p.n >= 3, "needs n >= 3");
  if (id == "thm63") {
    need(p.n >= 3, "needs n >= 3");
    need(p.k >= 2 && p.k <= p.n, "k must be in [2, n]");
  }
  if (id == "sk-loghess") need(p.k >= 1, "k must be >= 1");
  if (registry().at(id).needs_F && !p.F) {
    need(p.k >= 1, "k must be >= 1");
    need(p.family == Family::PowerSum || p.k <= p.n, "sigma_k needs k <= n");
    need(std::isfinite(p.alpha) && p.alpha > 0.0, "alpha must be positive");
  }
  if (p.C) need(std::isfinite(*p.C) && *p.C <= 0.0, "C must be <= 0");
}

struct Best {
  bool violated = false;
  double margin = std::numeric_limits<double>::infinity();
  std::int64_t index = -1;
  std::int64_t violations = 0;
};

// Violations first, then lower margin, then lower index.
bool worse(const Best& a, const Best& b) {
  if (b.index < 0) return a.index >= 0;
  if (a.index < 0) return false;
  if (a.violated != b.violated) return a.violated;
  if (a.margin != b.margin) return a.margin < b.margin;
  return a.index < b.index;
}

}  // namespace

const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids = {"sigprop", "Dmk",        "ak",       "det-identity",
                                               "key-inequality", "condition", "lamij", "rigidity",
                                               "cs",      "condmin",    "thm63",    "sk-loghess"};
  return ids;
}

bool is_lemma_id(const std::string& id) { return registry().count(id) > 0; }

int configured_threads() {
  if (const char* env = std::getenv("FLOWLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

InequalityReport run_campaign(const std::string& lemma_id, const CampaignParams& params,
                              std::int64_t samples, std::uint64_t seed, int threads) {
  const auto it = registry().find(lemma_id);
  if (it == registry().end()) throw ArgumentError("unknown lemma id '" + lemma_id + "'");
  if (samples < 1) throw ArgumentError("samples must be >= 1");
  validate(lemma_id, params);
  const LemmaInfo& info = it->second;

  Context ctx;
  ctx.params = params;
  if (info.needs_F) {
    if (params.F) {
      ctx.F = SpeedFunction::parse(*params.F);
    } else {
      ctx.F = params.family == Family::Sigma ? SpeedFunction::sigma_power(params.k, params.alpha)
                                             : SpeedFunction::power_sum_power(params.k, params.alpha);
    }
    ctx.beta = ctx.F->beta();
  }

  const std::uint64_t key = splitmix64(seed) ^ fnv1a(canonical(lemma_id, params));
  if (threads <= 0) threads = configured_threads();
  threads = static_cast<int>(std::min<std::int64_t>(threads, samples));

  std::vector<Best> partial(static_cast<std::size_t>(threads));
  auto work = [&](int part) {
    const std::int64_t lo = samples * part / threads;
    const std::int64_t hi = samples * (part + 1) / threads;
    Best best;
    for (std::int64_t i = lo; i < hi; ++i) {
      CounterRng rng(key, static_cast<std::uint64_t>(i));
      Outcome o = info.eval(ctx, rng, nullptr);
      if (std::isnan(o.margin)) {
        o.margin = -std::numeric_limits<double>::infinity();
        o.violated = true;
      }
      if (o.violated) ++best.violations;
      const Best cand{o.violated, o.margin, i, 0};
      if (worse(cand, best)) {
        best.violated = cand.violated;
        best.margin = cand.margin;
        best.index = cand.index;
      }
    }
    partial[static_cast<std::size_t>(part)] = best;
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int p = 0; p < threads; ++p) {
      pool.emplace_back([&, p] {
        try {
          work(p);
        } catch (...) {
          errors[static_cast<std::size_t>(p)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  Best total;
  for (const Best& b : partial) {
    total.violations += b.violations;
    if (worse(b, total)) {
      total.violated = b.violated;
      total.margin = b.margin;
      total.index = b.index;
    }
  }

  InequalityReport rep;
  rep.lemma_id = lemma_id;
  rep.params = params;
  rep.seed = seed;
  rep.samples = samples;
  rep.violations = total.violations;
  rep.worst_margin = total.margin;
  rep.tolerance = info.tolerance;
  rep.scale = info.scale;
  CounterRng rng(key, static_cast<std::uint64_t>(total.index));
  json sample;
  info.eval(ctx, rng, &sample);
  sample["index"] = total.index;
  sample["violated"] = total.violated;
  rep.worst_sample = std::move(sample);
  return rep;
}

std::vector<CampaignParams> default_sweep(const std::string& lemma_id) {
  if (!is_lemma_id(lemma_id)) throw ArgumentError("unknown lemma id '" + lemma_id + "'");
  std::vector<CampaignParams> out;
  auto add = [&](int n, int k, double alpha, Family f) {
    CampaignParams p;
    p.n = n;
    p.k = k;
    p.alpha = alpha;
    p.family = f;
    out.push_back(p);
  };
  // alpha grid with duplicates removed
  auto alphas = [](int k, bool with_half) {
    std::vector<double> a = {1.0 / k};
    if (with_half) a.push_back(0.5);
    a.push_back(1.0);
    a.push_back(2.0);
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
  };
  const bool with_F = registry().at(lemma_id).needs_F;
  if (lemma_id == "condmin") {
    add(2, 1, 1.0, Family::Sigma);
  } else if (lemma_id == "sigprop") {
    for (int n = 2; n <= 8; ++n)
      for (int k = 0; k <= n; ++k) add(n, k, 1.0, Family::Sigma);
  } else if (lemma_id == "thm63") {
    for (int n = 3; n <= 6; ++n)
      for (int k = 2; k <= n - 1; ++k) add(n, k, 1.0, Family::Sigma);
  } else if (lemma_id == "sk-loghess") {
    for (int n = 2; n <= 6; ++n)
      for (int k = 1; k <= 6; ++k) add(n, k, 1.0, Family::PowerSum);
  } else if (!with_F) {
    for (int n = 2; n <= 6; ++n)
      for (int k = 1; k <= n; ++k) add(n, k, 1.0, Family::Sigma);
  } else {
    const int n_lo = lemma_id == "lamij" ? 3 : 2;
    const bool half = lemma_id != "lamij" && lemma_id != "rigidity";
    for (Family f : {Family::Sigma, Family::PowerSum})
      for (int n = n_lo; n <= 6; ++n)
        for (int k = 1; k <= n; ++k)
          for (double a : alphas(k, half)) add(n, k, a, f);
  }
  return out;
}

std::int64_t SuiteReport::samples() const {
  std::int64_t s = 0;
  for (const auto& c : configurations) s += c.samples;
  return s;
}

std::int64_t SuiteReport::violations() const {
  std::int64_t s = 0;
  for (const auto& c : configurations) s += c.violations;
  return s;
}

SuiteReport run_suite(const std::string& lemma_id, const std::vector<CampaignParams>& sweep,
                      std::int64_t samples, std::uint64_t seed, int threads) {
  SuiteReport s;
  s.lemma_id = lemma_id;
  s.seed = seed;
  for (const CampaignParams& p : sweep) s.configurations.push_back(run_campaign(lemma_id, p, samples, seed, threads));
  return s;
}

json to_json(const CampaignParams& p) {
  json j;
  j["n"] = p.n;
  j["k"] = p.k;
  j["alpha"] = p.alpha;
  j["family"] = family_name(p.family);
  j["F"] = p.F ? json(*p.F) : json(nullptr);
  j["C"] = p.C ? json(*p.C) : json(nullptr);
  return j;
}

json to_json(const InequalityReport& r) {
  json j;
  j["lemma_id"] = r.lemma_id;
  j["version"] = FLOWLAB_VERSION;
  j["parameters"] = to_json(r.params);
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["violations"] = r.violations;
  j["worst_margin"] = r.worst_margin;
  j["worst_sample"] = r.worst_sample;
  j["tolerance"] = r.tolerance;
  j["scale"] = r.scale;
  return j;
}

json to_json(const SuiteReport& r) {
  json j;
  j["lemma_id"] = r.lemma_id;
  j["version"] = FLOWLAB_VERSION;
  j["seed"] = r.seed;
  j["samples"] = r.samples();
  j["violations"] = r.violations();
  const InequalityReport* worst = nullptr;
  for (const auto& c : r.configurations) {
    const bool cv = c.violations > 0;
    if (!worst || (cv && worst->violations == 0) ||
        (cv == (worst->violations > 0) && c.worst_margin < worst->worst_margin)) {
      worst = &c;
    }
  }
  if (worst) {
    j["worst_margin"] = worst->worst_margin;
    json ws = worst->worst_sample;
    ws["parameters"] = to_json(worst->params);
    j["worst_sample"] = ws;
    j["tolerance"] = worst->tolerance;
    j["scale"] = worst->scale;
  }
  j["configurations"] = json::array();
  for (const auto& c : r.configurations) j["configurations"].push_back(to_json(c));
  return j;
}

}  // namespace flowlab::lab
