#pragma once

// Seeded randomized verification campaigns over the lemma_lab margins.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace flowlab::lab {

enum class Family { Sigma, PowerSum };

struct CampaignParams {
  int n = 3;
  int k = 2;
  double alpha = 1.0;
  Family family = Family::Sigma;
  std::optional<std::string> F;  // explicit speed function; overrides family/k/alpha
  std::optional<double> C;       // fixed C for the rigidity lemma; sampled when empty
};

/// Outcome of one campaign configuration. `worst_margin` is the normalized
/// margin (raw margin / per-lemma scale) of the worst sample; a sample is a
/// violation when its normalized margin drops below -tolerance or a strict
/// requirement of the lemma fails.
struct InequalityReport {
  std::string lemma_id;
  CampaignParams params;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  double worst_margin = 0.0;
  nlohmann::json worst_sample;
  double tolerance = 0.0;
  std::string scale;  // description of the normalization
};

/// Registered lemma ids.
const std::vector<std::string>& lemma_ids();
bool is_lemma_id(const std::string& id);

/// Deterministic in (lemma_id, params, samples, seed) irrespective of `threads`
/// (0 = FLOWLAB_THREADS or hardware concurrency).
InequalityReport run_campaign(const std::string& lemma_id, const CampaignParams& params,
                              std::int64_t samples, std::uint64_t seed, int threads = 0);

/// Parameter grid used when a suite is requested without explicit parameters.
std::vector<CampaignParams> default_sweep(const std::string& lemma_id);

/// One report per lemma covering a list of configurations.
struct SuiteReport {
  std::string lemma_id;
  std::uint64_t seed = 0;
  std::vector<InequalityReport> configurations;

  std::int64_t samples() const;
  std::int64_t violations() const;
};

SuiteReport run_suite(const std::string& lemma_id, const std::vector<CampaignParams>& sweep,
                      std::int64_t samples, std::uint64_t seed, int threads = 0);

nlohmann::json to_json(const CampaignParams& p);
nlohmann::json to_json(const InequalityReport& r);
nlohmann::json to_json(const SuiteReport& r);

/// Thread count from FLOWLAB_THREADS (0 or unset = hardware concurrency).
int configured_threads();

}  // namespace flowlab::lab
