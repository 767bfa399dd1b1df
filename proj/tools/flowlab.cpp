// flowlab command-line driver.
//
// Exit codes: 0 success, 1 violation or failed run, 2 usage/config error,
// 3 numeric failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "flowlab/campaign.hpp"
#include "flowlab/errors.hpp"
#include "flowlab/flow.hpp"
#include "flowlab/geom.hpp"
#include "flowlab/io.hpp"
#include "flowlab/run_config.hpp"

namespace {

using namespace flowlab;
using nlohmann::json;

enum Exit : int { kOk = 0, kViolation = 1, kUsage = 2, kNumeric = 3 };

struct VerifyArgs {
  std::string suite;
  int n = 3;
  int k = 2;
  double alpha = 1.0;
  std::string family = "sigma";
  std::string F;
  double C = 0.0;
  std::int64_t samples = 10000;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
};

int cmd_verify(const VerifyArgs& a, bool explicit_params, const CLI::App& sub) {
  std::vector<std::string> suites;
  if (a.suite == "all") {
    if (explicit_params) throw ArgumentError("explicit parameters need a single --suite, not 'all'");
    suites = lab::lemma_ids();
  } else {
    if (!lab::is_lemma_id(a.suite)) {
      std::string known;
      for (const auto& id : lab::lemma_ids()) known += " " + id;
      throw ArgumentError("unknown suite '" + a.suite + "'; known:" + known + " all");
    }
    suites = {a.suite};
  }

  bool any_violation = false;
  for (const std::string& id : suites) {
    std::vector<lab::CampaignParams> sweep;
    if (explicit_params) {
      lab::CampaignParams p;
      p.n = a.n;
      p.k = a.k;
      p.alpha = a.alpha;
      if (a.family == "sigma") {
        p.family = lab::Family::Sigma;
      } else if (a.family == "power_sum") {
        p.family = lab::Family::PowerSum;
      } else {
        throw ArgumentError("--family must be sigma or power_sum");
      }
      if (sub.count("--F")) p.F = a.F;
      if (sub.count("--C")) p.C = a.C;
      sweep.push_back(p);
    } else {
      sweep = lab::default_sweep(id);
    }
    const lab::SuiteReport rep = lab::run_suite(id, sweep, a.samples, a.seed, a.threads);
    const json j = lab::to_json(rep);
    const std::string text = j.dump(2) + "\n";
    if (!a.out.empty()) {
      io::write_file_atomic((std::filesystem::path(a.out) / (id + ".json")).string(), text);
    } else {
      std::cout << text;
    }
    std::cerr << id << ": configurations=" << rep.configurations.size() << " samples=" << rep.samples()
              << " violations=" << rep.violations()
              << " worst_margin=" << io::format_g17(j.value("worst_margin", 0.0)) << "\n";
    any_violation = any_violation || rep.violations() > 0;
  }
  return any_violation ? kViolation : kOk;
}

geom::MeridianProfile initial_profile(const config::RunConfig& rc) {
  if (rc.shape) return geom::make_shape(*rc.shape, rc.flow.n, rc.flow.N);
  geom::MeridianProfile p = geom::read_profile_csv(*rc.initial_csv, rc.flow.n);
  if (p.N() != rc.flow.N) {
    throw config::ConfigError({"initial_csv: has N=" + std::to_string(p.N()) + " but config N=" +
                               std::to_string(rc.flow.N)});
  }
  return p;
}

int cmd_flow(const std::string& path) {
  const config::RunConfig rc = config::load_run_config(path);
  const geom::MeridianProfile init = initial_profile(rc);
  const flow::FlowTrace tr = flow::run_flow(rc.flow, init);

  json summary = flow::summary_json(tr);
  summary["version"] = FLOWLAB_VERSION;
  summary["config"] = json::parse(io::read_file(path));
  const bool sphere = rc.shape && rc.shape->kind == geom::Shape::Kind::Sphere;
  if (sphere && rc.flow.mode == flow::Mode::Raw &&
      (rc.flow.F.as_sigma_power() || rc.flow.F.as_power_sum_power())) {
    const double floor = rc.flow.stop.min_mean_radius.value_or(0.0);
    json oracle;
    oracle["r0"] = rc.shape->r;
    oracle["r_floor"] = floor;
    oracle["max_relative_deviation"] = flow::sphere_oracle_deviation(tr, rc.flow.F, rc.flow.n, rc.shape->r, floor);
    if (!tr.records.empty() && tr.records.back().t < flow::extinction_time(rc.flow.F, rc.flow.n, rc.shape->r)) {
      oracle["final_oracle_radius"] =
          flow::shrinking_sphere_oracle(rc.flow.F, rc.flow.n, rc.shape->r, tr.records.back().t);
    }
    summary["oracle"] = oracle;
  }
  io::write_file_atomic(rc.trace_csv, flow::trace_csv(tr));
  io::write_file_atomic(rc.summary_json, summary.dump(2) + "\n");
  if (rc.final_profile_csv && tr.final_profile) geom::write_profile_csv(*rc.final_profile_csv, *tr.final_profile);
  std::cout << summary.dump(2) << "\n";
  const bool ok = tr.status == flow::Status::Converged || tr.status == flow::Status::Shrunk;
  return ok ? kOk : kViolation;
}

int cmd_selfsim(const std::string& F_text, int n, double C, const std::string& shape_text, int N) {
  if (!(C <= 0.0)) throw ArgumentError("--C must be <= 0");
  const auto F = symfun::SpeedFunction::parse(F_text);
  const double r_star = geom::stationary_sphere_radius(F, C, n);
  geom::Shape shape;
  if (shape_text == "sphere:auto") {
    shape = geom::Shape::sphere(r_star);
  } else {
    shape = geom::Shape::parse(shape_text);
  }
  const geom::MeridianProfile p = geom::make_shape(shape, n, N);
  const geom::ResidualStats res = geom::selfsim_residual(p, F, C);
  const double tol = 1e-8 * std::max(1.0, r_star);
  std::cout << "r_star " << io::format_g17(r_star) << "\n"
            << "shape " << shape.to_string() << "\n"
            << "residual_max " << io::format_g17(res.max_abs) << "\n"
            << "residual_mean " << io::format_g17(res.mean_abs) << "\n"
            << "tolerance " << io::format_g17(tol) << "\n";
  return res.max_abs <= tol ? kOk : kViolation;
}

int cmd_sphere_radius(const std::string& F_text, int n, double C) {
  if (!(C <= 0.0)) throw ArgumentError("--C must be <= 0");
  const auto F = symfun::SpeedFunction::parse(F_text);
  std::cout << io::format_g17(geom::stationary_sphere_radius(F, C, n)) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowlab: symmetric-function inequalities and axisymmetric curvature flows"};
  app.set_version_flag("--version", FLOWLAB_VERSION);
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run seeded inequality campaigns");
  verify->add_option("--suite", va.suite, "lemma id or 'all'")->required();
  verify->add_option("--n", va.n, "dimension");
  verify->add_option("--k", va.k, "order");
  verify->add_option("--alpha", va.alpha, "exponent");
  verify->add_option("--family", va.family, "sigma or power_sum");
  verify->add_option("--F", va.F, "explicit speed function");
  verify->add_option("--C", va.C, "fixed C (rigidity)");
  verify->add_option("--samples", va.samples, "samples per configuration")->check(CLI::PositiveNumber);
  verify->add_option("--seed", va.seed, "campaign seed");
  verify->add_option("--out", va.out, "directory for <lemma>.json reports");
  verify->add_option("--threads", va.threads, "worker threads (0 = FLOWLAB_THREADS or auto)")
      ->check(CLI::NonNegativeNumber);

  std::string config_path;
  bool print_schema = false;
  auto* flowc = app.add_subcommand("flow", "run a flow experiment from a JSON config");
  flowc->add_option("--config", config_path, "run configuration");
  flowc->add_flag("--schema", print_schema, "print the configuration JSON schema and exit");

  std::string ss_F, ss_shape = "sphere:auto";
  int ss_n = 2, ss_N = 200;
  double ss_C = 0.0;
  auto* selfsim = app.add_subcommand("selfsim", "self-similar residual of a shape");
  selfsim->add_option("--F", ss_F, "speed function")->required();
  selfsim->add_option("--n", ss_n, "dimension")->required();
  selfsim->add_option("--C", ss_C, "shift C <= 0");
  selfsim->add_option("--shape", ss_shape, "sphere:auto | sphere:R | ellipsoid:A,B | perturbed:R,L,EPS");
  selfsim->add_option("--N", ss_N, "grid resolution")->check(CLI::Range(16, 100000));

  std::string sr_F;
  int sr_n = 2;
  double sr_C = 0.0;
  auto* sradius = app.add_subcommand("sphere-radius", "radius of the stationary sphere");
  sradius->add_option("--F", sr_F, "speed function")->required();
  sradius->add_option("--n", sr_n, "dimension")->required();
  sradius->add_option("--C", sr_C, "shift C <= 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (verify->parsed()) {
      const bool explicit_params = verify->count("--n") || verify->count("--k") || verify->count("--alpha") ||
                                   verify->count("--F") || verify->count("--family") || verify->count("--C");
      return cmd_verify(va, explicit_params, *verify);
    }
    if (flowc->parsed()) {
      if (print_schema) {
        std::cout << config::run_config_schema().dump(2) << "\n";
        return kOk;
      }
      if (config_path.empty()) throw ArgumentError("flow needs --config <path>");
      return cmd_flow(config_path);
    }
    if (selfsim->parsed()) return cmd_selfsim(ss_F, ss_n, ss_C, ss_shape, ss_N);
    if (sradius->parsed()) return cmd_sphere_radius(sr_F, sr_n, sr_C);
  } catch (const config::ConfigError& e) {
    std::cerr << "error: invalid run configuration\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return kUsage;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}
